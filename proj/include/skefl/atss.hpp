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

#ifndef SKEFL_ATSS_HPP_
#define SKEFL_ATSS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nlohmann/json.hpp"
#include "skefl/crypto/backend.hpp"
#include "skefl/rng.hpp"

// Asymmetric threshold secret sharing of ciphertext vectors. A vector is cut
// into f + 1 ciphertext shares whose element-wise homomorphic sum is the
// original vector, bit for bit. The owner always keeps the last share (and
// the intact vector), which is what makes the scheme asymmetric: only the
// owner can re-split.
namespace skefl::atss {

using ClientId = std::uint32_t;

struct SplitParams {
  ClientId owner = 1;
  std::uint64_t round = 0;
  std::size_t n = 1;  // clients are 1..n
  std::size_t f = 0;
};

struct ShareSet {
  ClientId owner = 0;
  std::uint64_t round = 0;
  std::vector<crypto::CiphertextVector> shares;  // f + 1 of them
  std::vector<ClientId> recipients;              // recipients.back() == owner

  std::size_t f() const { return shares.size() - 1; }
  const crypto::CiphertextVector& kept_share() const { return shares.back(); }
};

struct ShareDigest {
  ClientId owner = 0;
  std::uint64_t round = 0;
  Digest32 digest{};

  nlohmann::json to_json() const;
  static ShareDigest from_json(const nlohmann::json& j);
  friend bool operator==(const ShareDigest&, const ShareDigest&) = default;
};

// Uniform f-subset of {1..n} \ {owner} in random order, followed by owner.
std::vector<ClientId> choose_recipients(ClientId owner, std::size_t n,
                                        std::size_t f, Rng& rng);

// Shares 1..f are fresh encryptions of uniform ring vectors; the last is
// ctv minus their homomorphic sum. Throws kConfiguration if f + 1 > n or
// the owner is not a client index, kLengthMismatch on an empty vector.
ShareSet split(const crypto::PublicKey& pk, const crypto::CiphertextVector& ctv,
               const SplitParams& params, Rng& rng);

// Element-wise homomorphic sum. Throws kLengthMismatch on empty input or
// unequal lengths.
crypto::CiphertextVector merge(const crypto::PublicKey& pk,
                               std::span<const crypto::CiphertextVector> shares);

Digest32 hash_vector(const crypto::CiphertextVector& ctv);

ShareDigest publish(ClientId owner, std::uint64_t round,
                    const crypto::CiphertextVector& ctv);

// 1 iff H(serialize(merge(shares))) matches the published digest. Anything
// that prevents reconstruction (no shares, ragged lengths) yields 0.
bool verify(const crypto::PublicKey& pk, const ShareDigest& digest,
            std::span<const crypto::CiphertextVector> shares);

// Same, starting from wire-form share payloads; unparsable payloads yield 0.
bool verify_serialized(const crypto::PublicKey& pk, const ShareDigest& digest,
                       std::span<const Bytes> payloads);

// Re-splits the intact vector under a new round with fresh recipients. Only
// the owner of `previous` holds the intact vector, so any other caller gets
// kAuthorization; new_round must differ from the previous round.
ShareSet resplit(const crypto::PublicKey& pk, const crypto::CiphertextVector& intact,
                 const ShareSet& previous, ClientId caller,
                 std::uint64_t new_round, std::size_t n, Rng& rng);

}  // namespace skefl::atss

#endif  // SKEFL_ATSS_HPP_
