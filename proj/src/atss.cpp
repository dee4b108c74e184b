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

#include "skefl/atss.hpp"

#include <string>

#include "skefl/error.hpp"

namespace skefl::atss {

using crypto::Ciphertext;
using crypto::CiphertextVector;
using crypto::PublicKey;

nlohmann::json ShareDigest::to_json() const {
  return {{"owner", owner}, {"round", round}, {"sha256", to_hex(digest)}};
}

ShareDigest ShareDigest::from_json(const nlohmann::json& j) {
  try {
    return ShareDigest{j.at("owner").get<ClientId>(), j.at("round").get<std::uint64_t>(),
                       digest_from_hex(j.at("sha256").get<std::string>())};
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("malformed share digest: ") + e.what());
  }
}

std::vector<ClientId> choose_recipients(ClientId owner, std::size_t n,
                                        std::size_t f, Rng& rng) {
  require(owner >= 1 && owner <= n, ErrorCode::kConfiguration,
          "owner " + std::to_string(owner) + " is not a client in 1.." +
              std::to_string(n));
  require(f + 1 <= n, ErrorCode::kConfiguration,
          "f + 1 = " + std::to_string(f + 1) + " shares need at least that many clients, n = " +
              std::to_string(n));
  std::vector<ClientId> pool;
  pool.reserve(n - 1);
  for (ClientId c = 1; c <= n; ++c) {
    if (c != owner) pool.push_back(c);
  }
  // Partial Fisher-Yates: the first f slots become a uniform ordered f-subset.
  for (std::size_t i = 0; i < f; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(f);
  pool.push_back(owner);
  return pool;
}

ShareSet split(const PublicKey& pk, const CiphertextVector& ctv,
               const SplitParams& params, Rng& rng) {
  require(!ctv.empty(), ErrorCode::kLengthMismatch, "cannot split an empty vector");
  ShareSet out;
  out.owner = params.owner;
  out.round = params.round;
  out.recipients = choose_recipients(params.owner, params.n, params.f, rng);
  out.shares.reserve(params.f + 1);
  const std::size_t m = ctv.size();
  for (std::size_t j = 0; j < params.f; ++j) {
    CiphertextVector share;
    share.reserve(m);
    for (std::size_t k = 0; k < m; ++k) share.push_back(pk.encrypt_random(rng));
    out.shares.push_back(std::move(share));
  }
  if (params.f == 0) {
    out.shares.push_back(ctv);
    return out;
  }
  const CiphertextVector random_sum = merge(pk, out.shares);
  CiphertextVector last;
  last.reserve(m);
  for (std::size_t k = 0; k < m; ++k) last.push_back(pk.sub(ctv[k], random_sum[k]));
  out.shares.push_back(std::move(last));
  return out;
}

CiphertextVector merge(const PublicKey& pk, std::span<const CiphertextVector> shares) {
  require(!shares.empty(), ErrorCode::kLengthMismatch, "merge needs at least one share");
  CiphertextVector acc = shares[0];
  for (std::size_t j = 1; j < shares.size(); ++j) {
    require(shares[j].size() == acc.size(), ErrorCode::kLengthMismatch,
            "share " + std::to_string(j) + " has length " +
                std::to_string(shares[j].size()) + ", expected " +
                std::to_string(acc.size()));
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] = pk.add(acc[k], shares[j][k]);
  }
  return acc;
}

Digest32 hash_vector(const CiphertextVector& ctv) {
  return sha256(crypto::serialize(ctv));
}

ShareDigest publish(ClientId owner, std::uint64_t round, const CiphertextVector& ctv) {
  return ShareDigest{owner, round, hash_vector(ctv)};
}

bool verify(const PublicKey& pk, const ShareDigest& digest,
            std::span<const CiphertextVector> shares) {
  if (shares.empty()) return false;
  for (const CiphertextVector& s : shares) {
    if (s.size() != shares[0].size() || s.empty()) return false;
  }
  try {
    return hash_vector(merge(pk, shares)) == digest.digest;
  } catch (const Error&) {
    return false;  // foreign backend or out-of-range element
  }
}

bool verify_serialized(const PublicKey& pk, const ShareDigest& digest,
                       std::span<const Bytes> payloads) {
  std::vector<CiphertextVector> shares;
  shares.reserve(payloads.size());
  try {
    for (const Bytes& p : payloads) shares.push_back(pk.deserialize_vector(p));
  } catch (const Error&) {
    return false;
  }
  return verify(pk, digest, shares);
}

ShareSet resplit(const PublicKey& pk, const CiphertextVector& intact,
                 const ShareSet& previous, ClientId caller, std::uint64_t new_round,
                 std::size_t n, Rng& rng) {
  require(caller == previous.owner, ErrorCode::kAuthorization,
          "client " + std::to_string(caller) + " cannot re-split shares owned by client " +
              std::to_string(previous.owner));
  require(new_round != previous.round, ErrorCode::kProtocolOrder,
          "re-split must move to a new round");
  return split(pk, intact, SplitParams{previous.owner, new_round, n, previous.f()}, rng);
}

}  // namespace skefl::atss
