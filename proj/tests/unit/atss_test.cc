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

#include <algorithm>
#include <numeric>
#include <map>
#include <set>

#include "gtest/gtest.h"
#include "skefl/atss.hpp"
#include "skefl/crypto/mock.hpp"
#include "skefl/crypto/paillier.hpp"
#include "skefl/error.hpp"

namespace skefl::atss {
namespace {

using crypto::CiphertextVector;
using crypto::KeyPair;

CiphertextVector random_vector(const KeyPair& keys, std::size_t m, Rng& rng) {
  CiphertextVector out;
  for (std::size_t k = 0; k < m; ++k) {
    out.push_back(keys.pk->encrypt(rng.below(keys.pk->plaintext_modulus()), rng));
  }
  return out;
}

class AtssPaillierTest : public ::testing::Test {
 protected:
  AtssPaillierTest() : keys_(crypto::paillier_keygen(128, 21)), rng_(Rng::derive(21, "atss")) {}
  KeyPair keys_;
  Rng rng_;
};

TEST_F(AtssPaillierTest, ZeroThresholdIsACopy) {
  const CiphertextVector v = random_vector(keys_, 5, rng_);
  const ShareSet set = split(*keys_.pk, v, SplitParams{1, 0, 1, 0}, rng_);
  ASSERT_EQ(set.shares.size(), 1U);
  EXPECT_EQ(set.shares[0], v);
  EXPECT_EQ(set.recipients, std::vector<ClientId>{1});
}

TEST_F(AtssPaillierTest, MergeInvertsSplitBitExactly) {
  for (std::size_t f = 0; f <= 5; ++f) {
    for (std::size_t m : {1, 10, 1000}) {
      const CiphertextVector v = random_vector(keys_, m, rng_);
      const ShareSet set = split(*keys_.pk, v, SplitParams{3, 7, 11, f}, rng_);
      ASSERT_EQ(set.shares.size(), f + 1);
      EXPECT_EQ(merge(*keys_.pk, set.shares), v) << "f=" << f << " m=" << m;
    }
  }
}

TEST_F(AtssPaillierTest, DecryptedMergeMatchesOriginal) {
  const CiphertextVector v = random_vector(keys_, 4, rng_);
  const ShareSet set = split(*keys_.pk, v, SplitParams{1, 0, 5, 2}, rng_);
  EXPECT_EQ(crypto::decrypt_vector(*keys_.sk, merge(*keys_.pk, set.shares)),
            crypto::decrypt_vector(*keys_.sk, v));
}

TEST_F(AtssPaillierTest, MergeIsPermutationInvariant) {
  const CiphertextVector v = random_vector(keys_, 6, rng_);
  ShareSet set = split(*keys_.pk, v, SplitParams{2, 0, 11, 5}, rng_);
  for (int i = 0; i < 100; ++i) {
    shuffle(std::span<CiphertextVector>(set.shares), rng_);
    ASSERT_EQ(merge(*keys_.pk, set.shares), v);
  }
}

TEST_F(AtssPaillierTest, MergeErrors) {
  const CiphertextVector v = random_vector(keys_, 3, rng_);
  EXPECT_EQ(merge(*keys_.pk, std::vector<CiphertextVector>{v}), v);
  EXPECT_THROW(merge(*keys_.pk, std::vector<CiphertextVector>{}), Error);
  CiphertextVector shorter = v;
  shorter.pop_back();
  try {
    merge(*keys_.pk, std::vector<CiphertextVector>{v, shorter});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthMismatch);
  }
  EXPECT_THROW(split(*keys_.pk, CiphertextVector{}, SplitParams{1, 0, 3, 1}, rng_), Error);
}

TEST_F(AtssPaillierTest, SplitRejectsTooFewClients) {
  const CiphertextVector v = random_vector(keys_, 2, rng_);
  try {
    split(*keys_.pk, v, SplitParams{1, 0, 2, 2}, rng_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfiguration);
  }
  EXPECT_THROW(split(*keys_.pk, v, SplitParams{4, 0, 3, 1}, rng_), Error);
}

TEST(AtssMockTest, SharePlaintextsSumToTheInput) {
  const KeyPair keys = crypto::mock_keygen(BigInt(1) << 32);
  Rng rng = Rng::derive(1, "mock-split");
  const CiphertextVector v = {keys.pk->encrypt(7, rng)};
  const ShareSet set = split(*keys.pk, v, SplitParams{1, 0, 5, 2}, rng);
  ASSERT_EQ(set.shares.size(), 3U);
  const BigInt r1 = set.shares[0][0].value();
  const BigInt r2 = set.shares[1][0].value();
  const BigInt last = set.shares[2][0].value();
  const BigInt m = BigInt(1) << 32;
  BigInt expected_last = (7 - r1 - r2) % m;
  if (expected_last < 0) expected_last += m;
  EXPECT_EQ(last, expected_last);
  EXPECT_EQ((r1 + r2 + last) % m, 7);
}

TEST(RecipientsTest, DistinctOwnerLastAndNeverSelf) {
  Rng rng = Rng::derive(2, "recipients");
  for (int i = 0; i < 200; ++i) {
    const auto r = choose_recipients(3, 7, 3, rng);
    ASSERT_EQ(r.size(), 4U);
    EXPECT_EQ(r.back(), 3U);
    const std::set<ClientId> unique(r.begin(), r.end());
    EXPECT_EQ(unique.size(), 4U);
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_NE(r[j], 3U);
      EXPECT_GE(r[j], 1U);
      EXPECT_LE(r[j], 7U);
    }
  }
}

TEST(RecipientsTest, CoversEveryFSubsetUniformly) {
  // n = 5, f = 2: C(4, 2) = 6 possible recipient sets for owner 1.
  Rng rng = Rng::derive(3, "coverage");
  std::map<std::set<ClientId>, int> seen;
  const int trials = 6000;
  for (int i = 0; i < trials; ++i) {
    auto r = choose_recipients(1, 5, 2, rng);
    r.pop_back();
    ++seen[std::set<ClientId>(r.begin(), r.end())];
  }
  EXPECT_EQ(seen.size(), 6U);
  for (const auto& [subset, count] : seen) EXPECT_NEAR(count, trials / 6, 150);
}

class AtssVerifyTest : public AtssPaillierTest {
 protected:
  void SetUp() override {
    vector_ = random_vector(keys_, 8, rng_);
    set_ = split(*keys_.pk, vector_, SplitParams{1, 4, 5, 2}, rng_);
    digest_ = publish(1, 4, vector_);
  }
  CiphertextVector vector_;
  ShareSet set_;
  ShareDigest digest_;
};

TEST_F(AtssVerifyTest, HonestSharesVerify) {
  EXPECT_TRUE(verify(*keys_.pk, digest_, set_.shares));
  std::vector<Bytes> wire;
  for (const auto& s : set_.shares) wire.push_back(crypto::serialize(s));
  EXPECT_TRUE(verify_serialized(*keys_.pk, digest_, wire));
}

TEST_F(AtssVerifyTest, AnySingleBitFlipFails) {
  std::vector<Bytes> wire;
  for (const auto& s : set_.shares) wire.push_back(crypto::serialize(s));
  for (std::size_t j = 0; j < wire.size(); ++j) {
    for (std::size_t byte = 0; byte < wire[j].size(); byte += 7) {
      for (int bit = 0; bit < 8; bit += 3) {
        std::vector<Bytes> tampered = wire;
        tampered[j][byte] ^= static_cast<std::uint8_t>(1U << bit);
        ASSERT_FALSE(verify_serialized(*keys_.pk, digest_, tampered))
            << "share " << j << " byte " << byte << " bit " << bit;
      }
    }
  }
}

TEST_F(AtssVerifyTest, MissingSharesFail) {
  for (std::size_t drop = 0; drop < set_.shares.size(); ++drop) {
    std::vector<CiphertextVector> partial = set_.shares;
    partial.erase(partial.begin() + static_cast<std::ptrdiff_t>(drop));
    EXPECT_FALSE(verify(*keys_.pk, digest_, partial));
  }
  EXPECT_FALSE(verify(*keys_.pk, digest_, std::vector<CiphertextVector>{}));
}

TEST_F(AtssVerifyTest, DigestJsonRoundTrip) {
  const nlohmann::json j = digest_.to_json();
  EXPECT_EQ(j.at("owner"), 1);
  EXPECT_EQ(j.at("round"), 4);
  EXPECT_EQ(j.at("sha256").get<std::string>().size(), 64U);
  EXPECT_EQ(ShareDigest::from_json(j), digest_);
  EXPECT_THROW(ShareDigest::from_json(nlohmann::json{{"owner", 1}}), Error);
}

TEST_F(AtssVerifyTest, ResplitRules) {
  try {
    resplit(*keys_.pk, vector_, set_, 2, 5, 5, rng_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAuthorization);
  }
  EXPECT_THROW(resplit(*keys_.pk, vector_, set_, 1, 4, 5, rng_), Error);

  Rng a = Rng::derive(8, "resplit"), b = Rng::derive(8, "resplit");
  const ShareSet fresh = resplit(*keys_.pk, vector_, set_, 1, 5, 5, a);
  const ShareSet again = resplit(*keys_.pk, vector_, set_, 1, 5, 5, b);
  EXPECT_EQ(fresh.shares, again.shares);
  EXPECT_EQ(fresh.recipients, again.recipients);
  EXPECT_EQ(fresh.round, 5U);
  EXPECT_EQ(fresh.shares.size(), set_.shares.size());
  EXPECT_EQ(crypto::decrypt_vector(*keys_.sk, merge(*keys_.pk, fresh.shares)),
            crypto::decrypt_vector(*keys_.sk, vector_));
  EXPECT_TRUE(verify(*keys_.pk, publish(1, 5, vector_), fresh.shares));

  // Old-round shares mixed with new-round shares do not reconstruct.
  std::vector<CiphertextVector> mixed = fresh.shares;
  mixed[0] = set_.shares[0];
  EXPECT_FALSE(verify(*keys_.pk, digest_, mixed));
  EXPECT_NE(crypto::decrypt_vector(*keys_.sk, merge(*keys_.pk, mixed)),
            crypto::decrypt_vector(*keys_.sk, vector_));
}

}  // namespace
}  // namespace skefl::atss
