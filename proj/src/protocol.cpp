// Copyright 2026 The Skefl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "skefl/protocol.hpp"

#include <chrono>
#include <string>

#include "skefl/error.hpp"

namespace skefl::protocol {

using crypto::CiphertextVector;
using net::Message;
using net::MessageKind;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void append_u64_be(Bytes& out, std::uint64_t v) {
  append_u32_be(out, static_cast<std::uint32_t>(v >> 32));
  append_u32_be(out, static_cast<std::uint32_t>(v));
}

std::uint64_t read_u64_be(std::span<const std::uint8_t> bytes, std::size_t offset) {
  return (std::uint64_t{read_u32_be(bytes, offset)} << 32) | read_u32_be(bytes, offset + 4);
}

// Verification traffic: owner (u32) and round (u64), then for responses the
// share in vector wire form.
Bytes verify_header(ClientId owner, std::uint64_t round) {
  Bytes out;
  append_u32_be(out, owner);
  append_u64_be(out, round);
  return out;
}

constexpr std::size_t kVerifyHeaderBytes = 12;

Bytes digest_payload(const atss::ShareDigest& digest) {
  const std::string text = digest.to_json().dump();
  return Bytes(text.begin(), text.end());
}

atss::ShareDigest parse_digest(const Bytes& payload) {
  try {
    return atss::ShareDigest::from_json(
        nlohmann::json::parse(payload.begin(), payload.end()));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("malformed digest payload: ") + e.what());
  }
}

}  // namespace

void RoundConfig::validate() const {
  require(n >= 1, ErrorCode::kConfiguration, "need at least one client");
  require(m >= 1, ErrorCode::kConfiguration, "model length m must be >= 1");
  require(2 * f + 1 <= n, ErrorCode::kConfiguration,
          "2f + 1 <= n violated: n = " + std::to_string(n) + ", f = " + std::to_string(f));
}

BigInt fedavg_weight(std::uint64_t sample_count, std::uint64_t total_samples,
                     const crypto::FixedPointCodec& codec) {
  return codec.ratio(sample_count, total_samples);
}

nlohmann::json RoundResult::to_json(bool include_timings) const {
  nlohmann::json j = {
      {"round", round},
      {"global_model", global_model},
      {"msg_counts", {{"c2c", msg_counts.c2c}, {"c2s", msg_counts.c2s}, {"s2c", msg_counts.s2c}}},
      {"digests", digests},
      {"bytes_total", bytes_total},
      {"elements_total", elements_total},
      {"he_ops",
       {{"encrypt", ops.encrypt},
        {"add", ops.add},
        {"neg", ops.neg},
        {"scalar_mul", ops.scalar_mul},
        {"decrypt", ops.decrypt}}},
  };
  if (include_timings) j["phase_timings_ms"] = phase_timings_ms;
  return j;
}

// ---------------------------------------------------------------------------
// Client

Client::Client(ClientId id, const RoundConfig& config,
               std::shared_ptr<const crypto::PublicKey> pk,
               std::shared_ptr<const crypto::SecretKey> sk,
               const crypto::FixedPointCodec& codec)
    : id_(id), config_(config), pk_(std::move(pk)), sk_(std::move(sk)), codec_(codec) {}

void Client::distribute(std::uint64_t round, const fl::ModelVector& model,
                        std::uint64_t total_samples, net::Transport& net) {
  require(model.weights.size() == config_.m, ErrorCode::kLengthMismatch,
          "client " + std::to_string(id_) + " model has length " +
              std::to_string(model.weights.size()) + ", expected " +
              std::to_string(config_.m));
  require(owned_.count(round) == 0, ErrorCode::kProtocolOrder,
          "client " + std::to_string(id_) + " already distributed round " +
              std::to_string(round));
  const std::vector<BigInt> plaintext = codec_.encode(model.weights);
  Rng enc_rng = Rng::derive(config_.seed, "encrypt", id_, round);
  // Clients hold sk, whose encryptor is faster and bit-identical.
  const crypto::Encryptor& encryptor =
      sk_ ? static_cast<const crypto::Encryptor&>(*sk_) : *pk_;
  const CiphertextVector encrypted = crypto::encrypt_vector(encryptor, plaintext, enc_rng);
  const BigInt weight = fedavg_weight(model.sample_count, total_samples, codec_);
  CiphertextVector weighted = sk_ ? crypto::scalar_mul_vector(*sk_, encrypted, weight)
                                 : crypto::scalar_mul_vector(*pk_, encrypted, weight);

  Rng split_rng = Rng::derive(config_.seed, "split", id_, round);
  atss::ShareSet set = atss::split(
      *pk_, weighted, atss::SplitParams{id_, round, config_.n, config_.f}, split_rng);
  const atss::ShareDigest digest = atss::publish(id_, round, weighted);
  Owned& owned = owned_[round];
  owned.weighted = std::move(weighted);
  owned.shares = std::move(set);
  send_shares(owned.shares, net);
  net.send(round, id_, net::kBulletin, MessageKind::kDigest, digest_payload(digest), 0);
}

void Client::send_shares(const atss::ShareSet& set, net::Transport& net) {
  const auto elements = static_cast<std::uint32_t>(set.shares.front().size());
  if (!config_.garbling) {
    for (const CiphertextVector& share : set.shares) {
      net.send(set.round, id_, net::kServer, MessageKind::kShare, crypto::serialize(share),
               elements);
    }
    return;
  }
  for (std::size_t j = 0; j + 1 < set.shares.size(); ++j) {
    net.send(set.round, id_, set.recipients[j], MessageKind::kShare,
             crypto::serialize(set.shares[j]), elements);
  }
  store_share(id_, set.round, set.kept_share());
}

void Client::store_share(ClientId owner, std::uint64_t round, CiphertextVector share) {
  const bool inserted = inbox_.try_emplace({owner, round}, std::move(share)).second;
  require(inserted, ErrorCode::kProtocolOrder,
          "client " + std::to_string(id_) + " received a second share from client " +
              std::to_string(owner) + " for round " + std::to_string(round));
}

std::vector<Message> Client::receive(net::Transport& net) {
  std::vector<Message> responses;
  for (Message& msg : net.take_inbox(id_)) {
    switch (msg.kind) {
      case MessageKind::kShare:
        store_share(msg.sender, msg.round, pk_->deserialize_vector(msg.payload));
        break;
      case MessageKind::kGlobalModel:
        require(msg.sender == net::kServer, ErrorCode::kProtocolOrder,
                "global model from a non-server party");
        global_[msg.round] = pk_->deserialize_vector(msg.payload);
        decoded_.erase(msg.round);
        break;
      case MessageKind::kVerifyRequest: {
        require(msg.payload.size() == kVerifyHeaderBytes, ErrorCode::kParse,
                "malformed verification request");
        const ClientId owner = read_u32_be(msg.payload, 0);
        const std::uint64_t round = read_u64_be(msg.payload, 4);
        const CiphertextVector* share = held_share(owner, round);
        require(share != nullptr, ErrorCode::kProtocolOrder,
                "client " + std::to_string(id_) + " holds no share of client " +
                    std::to_string(owner) + " for round " + std::to_string(round));
        Bytes payload = verify_header(owner, round);
        const Bytes body = crypto::serialize(*share);
        payload.insert(payload.end(), body.begin(), body.end());
        net.send(msg.round, id_, msg.sender, MessageKind::kVerifyResponse,
                 std::move(payload), static_cast<std::uint32_t>(share->size()));
        break;
      }
      case MessageKind::kVerifyResponse:
        responses.push_back(std::move(msg));
        break;
      default:
        fail(ErrorCode::kProtocolOrder,
             "client " + std::to_string(id_) + " got an unexpected " +
                 std::string(net::to_string(msg.kind)) + " message");
    }
  }
  return responses;
}

CiphertextVector Client::garble(std::uint64_t round) const {
  std::vector<CiphertextVector> held;
  for (const auto& [key, share] : inbox_) {
    if (key.second == round) held.push_back(share);
  }
  require(!held.empty(), ErrorCode::kProtocolOrder,
          "client " + std::to_string(id_) + " has nothing to garble for round " +
              std::to_string(round));
  return atss::merge(*pk_, held);
}

void Client::submit_garbled(std::uint64_t round, net::Transport& net) const {
  const CiphertextVector garbled = garble(round);
  net.send(round, id_, net::kServer, MessageKind::kGarbled, crypto::serialize(garbled),
           static_cast<std::uint32_t>(garbled.size()));
}

const std::vector<double>& Client::global_model(std::uint64_t round) {
  auto cached = decoded_.find(round);
  if (cached != decoded_.end()) return cached->second;
  auto it = global_.find(round);
  require(it != global_.end(), ErrorCode::kProtocolOrder,
          "client " + std::to_string(id_) + " has no global model for round " +
              std::to_string(round));
  require(sk_ != nullptr, ErrorCode::kAuthorization, "client holds no secret key");
  const std::vector<BigInt> plain = crypto::decrypt_vector(*sk_, it->second);
  // Each term is weight * encode(w): two fixed-point factors.
  return decoded_[round] = codec_.decode(plain, 2);
}

const CiphertextVector* Client::held_share(ClientId owner, std::uint64_t round) const {
  auto it = inbox_.find({owner, round});
  return it == inbox_.end() ? nullptr : &it->second;
}

std::size_t Client::held_share_count(std::uint64_t round) const {
  std::size_t count = 0;
  for (const auto& entry : inbox_) count += entry.first.second == round ? 1 : 0;
  return count;
}

void Client::discard(ClientId owner, std::uint64_t round) { inbox_.erase({owner, round}); }

const atss::ShareSet& Client::own_shares(std::uint64_t round) const {
  auto it = owned_.find(round);
  require(it != owned_.end(), ErrorCode::kProtocolOrder,
          "client " + std::to_string(id_) + " did not distribute round " +
              std::to_string(round));
  return it->second.shares;
}

const CiphertextVector& Client::weighted_vector(std::uint64_t round) const {
  auto it = owned_.find(round);
  require(it != owned_.end(), ErrorCode::kProtocolOrder,
          "client " + std::to_string(id_) + " did not distribute round " +
              std::to_string(round));
  return it->second.weighted;
}

const atss::ShareSet& Client::resplit(ClientId owner, std::uint64_t old_round,
                                      std::uint64_t new_round, net::Transport& net) {
  require(owner == id_, ErrorCode::kAuthorization,
          "client " + std::to_string(id_) + " does not hold the intact vector of client " +
              std::to_string(owner));
  const Owned& previous = owned_.at(old_round);
  require(owned_.count(new_round) == 0, ErrorCode::kProtocolOrder,
          "round " + std::to_string(new_round) + " already has shares");
  Rng split_rng = Rng::derive(config_.seed, "resplit", id_, new_round);
  atss::ShareSet set = atss::resplit(*pk_, previous.weighted, previous.shares, id_,
                                     new_round, config_.n, split_rng);
  Owned& owned = owned_[new_round];
  owned.weighted = previous.weighted;
  owned.shares = std::move(set);
  discard(id_, old_round);
  send_shares(owned.shares, net);
  net.send(new_round, id_, net::kBulletin, MessageKind::kDigest,
           digest_payload(atss::publish(id_, new_round, owned.weighted)), 0);
  return owned.shares;
}

void Client::send_verify_request(ClientId holder, ClientId owner, std::uint64_t round,
                                 net::Transport& net) const {
  net.send(round, id_, holder, MessageKind::kVerifyRequest, verify_header(owner, round), 0);
}

// ---------------------------------------------------------------------------
// Server

Server::Server(const RoundConfig& config, std::shared_ptr<const crypto::PublicKey> pk)
    : config_(config), pk_(std::move(pk)) {}

void Server::receive(net::Transport& net) {
  for (Message& msg : net.take_inbox(net::kServer)) {
    require(net::is_client(msg.sender), ErrorCode::kProtocolOrder,
            "server got a message from a non-client");
    if (msg.kind == MessageKind::kGarbled) {
      const bool inserted =
          garbled_[msg.round]
              .try_emplace(msg.sender, pk_->deserialize_vector(msg.payload))
              .second;
      require(inserted, ErrorCode::kProtocolOrder,
              "client " + std::to_string(msg.sender) + " submitted twice in round " +
                  std::to_string(msg.round));
    } else if (msg.kind == MessageKind::kShare && !config_.garbling) {
      raw_[msg.round][msg.sender].push_back(pk_->deserialize_vector(msg.payload));
    } else {
      fail(ErrorCode::kProtocolOrder,
           "server got an unexpected " + std::string(net::to_string(msg.kind)) + " message");
    }
  }
}

CiphertextVector Server::aggregate(std::uint64_t round) const {
  std::vector<CiphertextVector> parts;
  std::string missing;
  for (ClientId c = 1; c <= config_.n; ++c) {
    if (config_.garbling) {
      auto r = garbled_.find(round);
      if (r == garbled_.end() || r->second.count(c) == 0) {
        missing += " " + std::to_string(c);
        continue;
      }
      parts.push_back(r->second.at(c));
    } else {
      auto r = raw_.find(round);
      if (r == raw_.end() || r->second.count(c) == 0 ||
          r->second.at(c).size() != config_.f + 1) {
        missing += " " + std::to_string(c);
        continue;
      }
      parts.push_back(atss::merge(*pk_, r->second.at(c)));
    }
  }
  require(missing.empty(), ErrorCode::kIncompleteRound,
          "round " + std::to_string(round) + " is missing submissions from clients" + missing);
  return atss::merge(*pk_, parts);
}

void Server::broadcast(std::uint64_t round, const CiphertextVector& global,
                       net::Transport& net) const {
  const Bytes payload = crypto::serialize(global);
  for (ClientId c = 1; c <= config_.n; ++c) {
    net.send(round, net::kServer, c, MessageKind::kGlobalModel, payload,
             static_cast<std::uint32_t>(global.size()));
  }
}

const std::map<ClientId, CiphertextVector>& Server::garbled(std::uint64_t round) const {
  static const std::map<ClientId, CiphertextVector> kEmpty;
  auto it = garbled_.find(round);
  return it == garbled_.end() ? kEmpty : it->second;
}

// ---------------------------------------------------------------------------
// Federation

Federation::Federation(const RoundConfig& config, crypto::KeyPair keys,
                       const crypto::FixedPointCodec& codec,
                       std::shared_ptr<net::SimNetwork> net)
    : config_(config),
      keys_(std::move(keys)),
      codec_(codec),
      net_(net ? std::move(net) : std::make_shared<net::SimNetwork>()),
      server_(config, keys_.pk) {
  config_.validate();
  require(codec_.modulus() == keys_.pk->plaintext_modulus(), ErrorCode::kConfiguration,
          "codec ring differs from the key's plaintext ring");
  codec_.require_capacity(config_.n);
  net_->register_party(net::kServer);
  net_->register_party(net::kBulletin);
  clients_.reserve(config_.n);
  for (ClientId c = 1; c <= config_.n; ++c) {
    net_->register_party(c);
    clients_.emplace_back(c, config_, keys_.pk, keys_.sk, codec_);
  }
}

Client& Federation::client(ClientId id) {
  require(id >= 1 && id <= clients_.size(), ErrorCode::kRouting,
          "no client " + std::to_string(id));
  return clients_[id - 1];
}

void Federation::set_next_round(std::uint64_t round) {
  require(round >= next_round_, ErrorCode::kProtocolOrder, "rounds cannot go backwards");
  next_round_ = round;
}

RoundResult Federation::run_round(std::span<const fl::ModelVector> models) {
  require(models.size() == config_.n, ErrorCode::kConfiguration,
          "expected " + std::to_string(config_.n) + " local models, got " +
              std::to_string(models.size()));
  std::uint64_t total = 0;
  for (const fl::ModelVector& w : models) total += w.sample_count;
  require(total > 0, ErrorCode::kConfiguration, "total sample count N must be > 0");

  const std::uint64_t round = next_round_++;
  RoundResult result;
  result.round = round;
  const crypto::OpCounts ops_before = keys_.pk->counters().snapshot();

  auto start = Clock::now();
  for (Client& c : clients_) c.distribute(round, models[c.id() - 1], total, *net_);
  net_->deliver_all(round);
  for (Client& c : clients_) c.receive(*net_);
  result.phase_timings_ms["distribute"] = elapsed_ms(start);

  start = Clock::now();
  if (config_.garbling) {
    for (const Client& c : clients_) c.submit_garbled(round, *net_);
  }
  net_->deliver_all(round);
  result.phase_timings_ms["garble"] = elapsed_ms(start);

  start = Clock::now();
  server_.receive(*net_);
  const CiphertextVector global = server_.aggregate(round);
  server_.broadcast(round, global, *net_);
  net_->deliver_all(round);
  result.phase_timings_ms["aggregate"] = elapsed_ms(start);

  for (Client& c : clients_) c.receive(*net_);
  result.ops = keys_.pk->counters().snapshot() - ops_before;
  if (config_.decrypt_global) {
    start = Clock::now();
    result.global_model = clients_.front().global_model(round);
    result.phase_timings_ms["decrypt"] = elapsed_ms(start);
  }

  const net::RoundTranscript t = net_->transcript(round);
  result.msg_counts = {t.client_to_client(), t.client_to_server(), t.server_to_client()};
  result.digests = t.stats(MessageKind::kDigest).count;
  result.bytes_total = t.total_bytes();
  result.elements_total = t.total_elements();
  return result;
}

std::vector<Bytes> Federation::collect_shares(ClientId owner, ClientId verifier,
                                              std::uint64_t round) {
  const atss::ShareSet& set = client(owner).own_shares(round);
  Client& v = client(verifier);
  std::vector<ClientId> asked;
  for (ClientId holder : set.recipients) {
    if (holder == verifier) continue;
    v.send_verify_request(holder, owner, round, *net_);
    asked.push_back(holder);
  }
  net_->deliver_all(round);
  for (ClientId holder : asked) client(holder).receive(*net_);
  net_->deliver_all(round);
  std::map<ClientId, Bytes> by_holder;
  for (Message& msg : v.receive(*net_)) {
    require(msg.payload.size() >= kVerifyHeaderBytes &&
                read_u32_be(msg.payload, 0) == owner &&
                read_u64_be(msg.payload, 4) == round,
            ErrorCode::kProtocolOrder, "verification response for the wrong share");
    by_holder[msg.sender] =
        Bytes(msg.payload.begin() + kVerifyHeaderBytes, msg.payload.end());
  }
  std::vector<Bytes> payloads;
  for (ClientId holder : set.recipients) {
    if (holder == verifier) {
      const CiphertextVector* own = v.held_share(owner, round);
      if (own != nullptr) payloads.push_back(crypto::serialize(*own));
    } else if (auto it = by_holder.find(holder); it != by_holder.end()) {
      payloads.push_back(std::move(it->second));
    }
  }
  return payloads;
}

atss::ShareDigest Federation::published_digest(ClientId owner, std::uint64_t round) const {
  for (const Message& msg : net_->peek_inbox(net::kBulletin)) {
    if (msg.kind != MessageKind::kDigest || msg.sender != owner || msg.round != round) {
      continue;
    }
    return parse_digest(msg.payload);
  }
  fail(ErrorCode::kProtocolOrder, "client " + std::to_string(owner) +
                                      " published no digest for round " +
                                      std::to_string(round));
}

bool Federation::verify_model(ClientId owner, ClientId verifier, std::uint64_t round) {
  const atss::ShareDigest digest = published_digest(owner, round);
  const std::vector<Bytes> payloads = collect_shares(owner, verifier, round);
  return atss::verify_serialized(*keys_.pk, digest, payloads);
}

const atss::ShareSet& Federation::resplit(ClientId caller, ClientId owner,
                                          std::uint64_t old_round, std::uint64_t new_round) {
  const atss::ShareSet& old_set = client(owner).own_shares(old_round);
  const std::vector<ClientId> old_holders = old_set.recipients;
  const atss::ShareSet& fresh = client(caller).resplit(owner, old_round, new_round, *net_);
  for (ClientId holder : old_holders) client(holder).discard(owner, old_round);
  net_->deliver_all(new_round);
  for (ClientId holder : fresh.recipients) {
    if (holder != owner) client(holder).receive(*net_);
  }
  return fresh;
}

}  // namespace skefl::protocol
