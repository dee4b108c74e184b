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

#include "skefl/sim_net.hpp"

#include <algorithm>
#include <sstream>

#include "skefl/error.hpp"
#include "skefl/rng.hpp"

namespace skefl::net {
namespace {

std::string party_name(PartyId p) {
  if (p == kServer) return "server";
  if (p == kBulletin) return "bulletin";
  return std::to_string(p);
}

}  // namespace

std::string_view to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::kShare:
      return "Share";
    case MessageKind::kGarbled:
      return "Garbled";
    case MessageKind::kGlobalModel:
      return "GlobalModel";
    case MessageKind::kDigest:
      return "Digest";
    case MessageKind::kVerifyRequest:
      return "VerifyRequest";
    case MessageKind::kVerifyResponse:
      return "VerifyResponse";
  }
  return "Unknown";
}

std::uint64_t RoundTranscript::client_to_client() const {
  return static_cast<std::uint64_t>(std::count_if(
      messages.begin(), messages.end(),
      [](const Message& m) { return is_client(m.sender) && is_client(m.receiver); }));
}

std::uint64_t RoundTranscript::client_to_server() const {
  return static_cast<std::uint64_t>(std::count_if(
      messages.begin(), messages.end(),
      [](const Message& m) { return is_client(m.sender) && m.receiver == kServer; }));
}

std::uint64_t RoundTranscript::server_to_client() const {
  return static_cast<std::uint64_t>(std::count_if(
      messages.begin(), messages.end(),
      [](const Message& m) { return m.sender == kServer && is_client(m.receiver); }));
}

std::uint64_t RoundTranscript::total_bytes() const {
  std::uint64_t total = 0;
  for (const KindStats& s : per_kind) total += s.bytes;
  return total;
}

std::uint64_t RoundTranscript::total_elements() const {
  std::uint64_t total = 0;
  for (const KindStats& s : per_kind) total += s.elements;
  return total;
}

std::array<KindStats, kMessageKinds> RoundTranscript::recount() const {
  std::array<KindStats, kMessageKinds> out{};
  for (const Message& m : messages) {
    KindStats& s = out[static_cast<std::size_t>(m.kind)];
    ++s.count;
    s.bytes += m.payload.size();
    s.elements += m.elements;
  }
  return out;
}

std::string RoundTranscript::to_csv(bool header) const {
  std::ostringstream out;
  if (header) out << "seq,round,sender,receiver,kind,bytes\n";
  for (const Message& m : messages) {
    out << m.seq << ',' << m.round << ',' << party_name(m.sender) << ','
        << party_name(m.receiver) << ',' << to_string(m.kind) << ','
        << m.payload.size() << '\n';
  }
  return out.str();
}

nlohmann::json RoundTranscript::to_json() const {
  nlohmann::json msgs = nlohmann::json::array();
  for (const Message& m : messages) {
    msgs.push_back({{"seq", m.seq},
                    {"round", m.round},
                    {"sender", party_name(m.sender)},
                    {"receiver", party_name(m.receiver)},
                    {"kind", to_string(m.kind)},
                    {"bytes", m.payload.size()},
                    {"elements", m.elements},
                    {"sha256", to_hex(sha256(m.payload))}});
  }
  nlohmann::json counters = nlohmann::json::object();
  for (std::size_t k = 0; k < kMessageKinds; ++k) {
    counters[std::string(to_string(static_cast<MessageKind>(k)))] = {
        {"count", per_kind[k].count},
        {"bytes", per_kind[k].bytes},
        {"elements", per_kind[k].elements}};
  }
  return {{"round", round}, {"messages", std::move(msgs)}, {"counters", std::move(counters)}};
}

void SimNetwork::register_party(PartyId id) {
  std::lock_guard<std::mutex> lock(mu_);
  inboxes_.try_emplace(id);
}

void SimNetwork::send(std::uint64_t round, PartyId sender, PartyId receiver,
                      MessageKind kind, Bytes payload, std::uint32_t elements) {
  std::lock_guard<std::mutex> lock(mu_);
  require(known(sender), ErrorCode::kRouting,
          "unknown sender " + party_name(sender));
  require(known(receiver), ErrorCode::kRouting,
          "unknown receiver " + party_name(receiver));
  pending_.push_back(
      Message{next_seq_++, round, sender, receiver, kind, std::move(payload), elements});
}

void SimNetwork::deliver_all(std::uint64_t round) {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<Message> batch;
  std::vector<Message> rest;
  for (Message& m : pending_) {
    (m.round == round ? batch : rest).push_back(std::move(m));
  }
  pending_ = std::move(rest);
  std::sort(batch.begin(), batch.end(), [](const Message& a, const Message& b) {
    return a.sender != b.sender ? a.sender < b.sender : a.seq < b.seq;
  });
  if (shuffle_seed_) {
    Rng rng = Rng::derive(*shuffle_seed_, "net/shuffle", round, next_seq_);
    shuffle(std::span<Message>(batch), rng);
  }
  std::vector<Message>& log = delivered_[round];
  for (Message& m : batch) {
    inboxes_[m.receiver].push_back(m);
    log.push_back(std::move(m));
  }
}

std::vector<Message> SimNetwork::take_inbox(PartyId party) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = inboxes_.find(party);
  require(it != inboxes_.end(), ErrorCode::kRouting, "unknown party " + party_name(party));
  std::vector<Message> out = std::move(it->second);
  it->second.clear();
  return out;
}

std::vector<Message> SimNetwork::peek_inbox(PartyId party) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = inboxes_.find(party);
  require(it != inboxes_.end(), ErrorCode::kRouting, "unknown party " + party_name(party));
  return it->second;
}

void SimNetwork::set_shuffle_seed(std::optional<std::uint64_t> seed) {
  std::lock_guard<std::mutex> lock(mu_);
  shuffle_seed_ = seed;
}

RoundTranscript SimNetwork::transcript(std::uint64_t round) const {
  std::lock_guard<std::mutex> lock(mu_);
  RoundTranscript t;
  t.round = round;
  auto it = delivered_.find(round);
  if (it != delivered_.end()) t.messages = it->second;
  t.per_kind = t.recount();
  return t;
}

std::size_t SimNetwork::pending() const {
  std::lock_guard<std::mutex> lock(mu_);
  return pending_.size();
}

}  // namespace skefl::net
