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

#ifndef SKEFL_PROTOCOL_HPP_
#define SKEFL_PROTOCOL_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nlohmann/json.hpp"
#include "skefl/atss.hpp"
#include "skefl/crypto/backend.hpp"
#include "skefl/crypto/codec.hpp"
#include "skefl/fl_workload.hpp"
#include "skefl/sim_net.hpp"

namespace skefl::protocol {

using atss::ClientId;

struct RoundConfig {
  std::size_t n = 3;
  std::size_t f = 1;
  std::size_t m = 10;
  std::uint64_t seed = 1;
  // Sanity mode: when false, clients ship all f + 1 shares straight to the
  // server, which merges them per owner. Nothing is hidden from the server.
  bool garbling = true;
  // Whether run_round decrypts the global model (as client 1) for its report.
  bool decrypt_global = true;

  // Throws kConfiguration unless n >= 1, m >= 1 and 2f + 1 <= n.
  void validate() const;
};

// encode(N_i / N) with round-half-even. Throws kConfiguration when N = 0.
BigInt fedavg_weight(std::uint64_t sample_count, std::uint64_t total_samples,
                     const crypto::FixedPointCodec& codec);

struct MessageCounts {
  std::uint64_t c2c = 0;
  std::uint64_t c2s = 0;
  std::uint64_t s2c = 0;

  friend bool operator==(const MessageCounts&, const MessageCounts&) = default;
};

struct RoundResult {
  std::uint64_t round = 0;
  std::vector<double> global_model;  // empty when decrypt_global is off
  MessageCounts msg_counts;
  std::uint64_t digests = 0;         // bulletin posts
  std::uint64_t bytes_total = 0;
  std::uint64_t elements_total = 0;
  crypto::OpCounts ops;              // homomorphic work during the round
  std::map<std::string, double> phase_timings_ms;

  nlohmann::json to_json(bool include_timings = true) const;
};

// One client. Holds pk and, as every client does here, sk.
class Client {
 public:
  Client(ClientId id, const RoundConfig& config,
         std::shared_ptr<const crypto::PublicKey> pk,
         std::shared_ptr<const crypto::SecretKey> sk,
         const crypto::FixedPointCodec& codec);

  ClientId id() const { return id_; }

  // Encrypts W_i, weights it by N_i / N, splits it into f + 1 shares, sends f
  // of them, keeps the last and posts the digest of the weighted vector.
  void distribute(std::uint64_t round, const fl::ModelVector& model,
                  std::uint64_t total_samples, net::Transport& net);

  // Drains the inbox: stores shares and global models, answers verification
  // requests. Returns the verification responses addressed to this client.
  std::vector<net::Message> receive(net::Transport& net);

  // Homomorphic sum of every share held for `round`, own share included.
  // Throws kProtocolOrder when none is held.
  crypto::CiphertextVector garble(std::uint64_t round) const;
  void submit_garbled(std::uint64_t round, net::Transport& net) const;

  // Decrypts (once) and decodes the broadcast global model of `round`.
  const std::vector<double>& global_model(std::uint64_t round);
  bool has_global_model(std::uint64_t round) const { return global_.count(round) != 0; }

  // Shares held for (owner, round), if any.
  const crypto::CiphertextVector* held_share(ClientId owner, std::uint64_t round) const;
  std::size_t held_share_count(std::uint64_t round) const;
  void discard(ClientId owner, std::uint64_t round);

  const atss::ShareSet& own_shares(std::uint64_t round) const;
  const crypto::CiphertextVector& weighted_vector(std::uint64_t round) const;

  // Owner-only: splits the weighted vector of old_round afresh under
  // new_round and sends the new shares. Any other client raises
  // kAuthorization.
  const atss::ShareSet& resplit(ClientId owner, std::uint64_t old_round,
                                std::uint64_t new_round, net::Transport& net);

  void send_verify_request(ClientId holder, ClientId owner, std::uint64_t round,
                           net::Transport& net) const;

 private:
  struct Owned {
    crypto::CiphertextVector weighted;
    atss::ShareSet shares;
  };

  void send_shares(const atss::ShareSet& set, net::Transport& net);
  void store_share(ClientId owner, std::uint64_t round, crypto::CiphertextVector share);

  ClientId id_;
  RoundConfig config_;
  std::shared_ptr<const crypto::PublicKey> pk_;
  std::shared_ptr<const crypto::SecretKey> sk_;
  crypto::FixedPointCodec codec_;
  std::map<std::pair<ClientId, std::uint64_t>, crypto::CiphertextVector> inbox_;
  std::map<std::uint64_t, Owned> owned_;
  std::map<std::uint64_t, crypto::CiphertextVector> global_;
  std::map<std::uint64_t, std::vector<double>> decoded_;
};

// The aggregator. Holds the public key only.
class Server {
 public:
  Server(const RoundConfig& config, std::shared_ptr<const crypto::PublicKey> pk);

  void receive(net::Transport& net);
  // Homomorphic sum of the n garbled vectors (or, without garbling, of the
  // per-owner merges). Throws kIncompleteRound naming the missing clients.
  crypto::CiphertextVector aggregate(std::uint64_t round) const;
  void broadcast(std::uint64_t round, const crypto::CiphertextVector& global,
                 net::Transport& net) const;

  const std::map<ClientId, crypto::CiphertextVector>& garbled(std::uint64_t round) const;

 private:
  RoundConfig config_;
  std::shared_ptr<const crypto::PublicKey> pk_;
  std::map<std::uint64_t, std::map<ClientId, crypto::CiphertextVector>> garbled_;
  std::map<std::uint64_t, std::map<ClientId, std::vector<crypto::CiphertextVector>>> raw_;
};

// Trusted-dealer harness: n clients and a server over one transport, driven
// phase by phase with barriers in between.
class Federation {
 public:
  Federation(const RoundConfig& config, crypto::KeyPair keys,
             const crypto::FixedPointCodec& codec,
             std::shared_ptr<net::SimNetwork> net = nullptr);

  const RoundConfig& config() const { return config_; }
  const crypto::FixedPointCodec& codec() const { return codec_; }
  const crypto::KeyPair& keys() const { return keys_; }
  net::SimNetwork& network() { return *net_; }
  const net::SimNetwork& network() const { return *net_; }
  Client& client(ClientId id);
  Server& server() { return server_; }

  // Runs Dist, Garble, Aggr and the broadcast for the next round number.
  // models[i] belongs to client i + 1.
  RoundResult run_round(std::span<const fl::ModelVector> models);
  std::uint64_t next_round() const { return next_round_; }
  // Lets a short-lived federation (one per sampled cohort) keep the global
  // round numbering. Rounds never go backwards.
  void set_next_round(std::uint64_t round);

  // Verifier gathers the owner's shares: its own share plus one
  // VerifyRequest / VerifyResponse pair per other holder. Returns the share
  // payloads in recipient order.
  std::vector<Bytes> collect_shares(ClientId owner, ClientId verifier,
                                    std::uint64_t round);
  // Reads the owner's digest for `round` off the bulletin board.
  atss::ShareDigest published_digest(ClientId owner, std::uint64_t round) const;
  // collect_shares followed by atss::verify_serialized.
  bool verify_model(ClientId owner, ClientId verifier, std::uint64_t round);

  // caller re-splits owner's round `old_round` vector under `new_round`;
  // the old holders discard their (owner, old_round) shares.
  const atss::ShareSet& resplit(ClientId caller, ClientId owner,
                                std::uint64_t old_round, std::uint64_t new_round);

 private:
  RoundConfig config_;
  crypto::KeyPair keys_;
  crypto::FixedPointCodec codec_;
  std::shared_ptr<net::SimNetwork> net_;
  std::vector<Client> clients_;
  Server server_;
  std::uint64_t next_round_ = 0;
};

}  // namespace skefl::protocol

#endif  // SKEFL_PROTOCOL_HPP_
