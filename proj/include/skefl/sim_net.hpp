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

#ifndef SKEFL_SIM_NET_HPP_
#define SKEFL_SIM_NET_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlohmann/json.hpp"
#include "skefl/bigint.hpp"

namespace skefl::net {

using PartyId = std::uint32_t;

inline constexpr PartyId kServer = 0;
// Public bulletin board that share digests are posted to. It is a pseudo
// party: anyone may read it, and its traffic is reported separately from the
// client/server message counts.
inline constexpr PartyId kBulletin = 0xFFFFFFFFu;

enum class MessageKind : std::uint8_t {
  kShare,
  kGarbled,
  kGlobalModel,
  kDigest,
  kVerifyRequest,
  kVerifyResponse,
};
inline constexpr std::size_t kMessageKinds = 6;

std::string_view to_string(MessageKind kind);

inline bool is_client(PartyId p) { return p != kServer && p != kBulletin; }

struct Message {
  std::uint64_t seq = 0;
  std::uint64_t round = 0;
  PartyId sender = 0;
  PartyId receiver = 0;
  MessageKind kind = MessageKind::kShare;
  Bytes payload;
  // Model elements carried; a vector travels as one message of m elements.
  std::uint32_t elements = 0;
};

struct KindStats {
  std::uint64_t count = 0;
  std::uint64_t bytes = 0;
  std::uint64_t elements = 0;

  friend bool operator==(const KindStats&, const KindStats&) = default;
};

struct RoundTranscript {
  std::uint64_t round = 0;
  std::vector<Message> messages;  // in delivery order
  std::array<KindStats, kMessageKinds> per_kind{};

  const KindStats& stats(MessageKind kind) const {
    return per_kind[static_cast<std::size_t>(kind)];
  }
  // Client-to-client, client-to-server and server-to-client message counts.
  // Bulletin traffic is in none of them.
  std::uint64_t client_to_client() const;
  std::uint64_t client_to_server() const;
  std::uint64_t server_to_client() const;
  std::uint64_t total_bytes() const;
  std::uint64_t total_elements() const;

  // Per-kind stats recomputed from the message list.
  std::array<KindStats, kMessageKinds> recount() const;

  // One line per message: seq,round,sender,receiver,kind,bytes
  std::string to_csv(bool header = true) const;
  // Messages plus a SHA-256 of each payload, and the per-kind counters.
  nlohmann::json to_json() const;
};

// Delivery fabric seen by protocol parties. A socket implementation could
// sit behind the same interface.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual void register_party(PartyId id) = 0;
  // Enqueues; throws kRouting when either end is unknown.
  virtual void send(std::uint64_t round, PartyId sender, PartyId receiver,
                    MessageKind kind, Bytes payload, std::uint32_t elements) = 0;
  // Moves every pending message of `round` into its receiver's inbox.
  virtual void deliver_all(std::uint64_t round) = 0;
  // Removes and returns the delivered messages addressed to `party`.
  virtual std::vector<Message> take_inbox(PartyId party) = 0;
  // Delivered messages addressed to `party`, left in place.
  virtual std::vector<Message> peek_inbox(PartyId party) const = 0;
};

// In-process network with a fixed total delivery order: sender id, then
// sequence number. Sends may come from several threads; delivery is
// serialized. An optional shuffle seed replaces the fixed order with a
// seeded random permutation, used to show the protocol does not depend on
// delivery order.
class SimNetwork final : public Transport {
 public:
  SimNetwork() = default;

  void register_party(PartyId id) override;
  void send(std::uint64_t round, PartyId sender, PartyId receiver, MessageKind kind,
            Bytes payload, std::uint32_t elements) override;
  void deliver_all(std::uint64_t round) override;
  std::vector<Message> take_inbox(PartyId party) override;
  std::vector<Message> peek_inbox(PartyId party) const override;

  void set_shuffle_seed(std::optional<std::uint64_t> seed);

  // Every delivered message of `round`, in delivery order.
  RoundTranscript transcript(std::uint64_t round) const;
  std::size_t pending() const;

 private:
  bool known(PartyId id) const { return inboxes_.count(id) != 0; }

  mutable std::mutex mu_;
  std::uint64_t next_seq_ = 0;
  std::map<PartyId, std::vector<Message>> inboxes_;
  std::vector<Message> pending_;
  std::map<std::uint64_t, std::vector<Message>> delivered_;
  std::optional<std::uint64_t> shuffle_seed_;
};

}  // namespace skefl::net

#endif  // SKEFL_SIM_NET_HPP_
