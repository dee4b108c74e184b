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

#include <vector>

#include "gtest/gtest.h"
#include "skefl/crypto/keys.hpp"
#include "skefl/crypto/paillier.hpp"
#include "skefl/error.hpp"

namespace skefl::crypto {
namespace {

BigInt powm(const BigInt& b, const BigInt& e, const BigInt& m) {
  BigInt r;
  mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return r;
}

// Textbook Paillier, straight from the definition: lambda = lcm(p-1, q-1),
// mu = L(g^lambda mod N^2)^-1 mod N, m = L(c^lambda mod N^2) * mu mod N.
BigInt textbook_decrypt(const BigInt& c, const BigInt& p, const BigInt& q) {
  const BigInt n = p * q;
  const BigInt n2 = n * n;
  BigInt lambda;
  const BigInt pm1 = p - 1, qm1 = q - 1;
  mpz_lcm(lambda.get_mpz_t(), pm1.get_mpz_t(), qm1.get_mpz_t());
  const BigInt g = n + 1;
  const BigInt lg = (powm(g, lambda, n2) - 1) / n;
  BigInt mu;
  mpz_invert(mu.get_mpz_t(), lg.get_mpz_t(), n.get_mpz_t());
  const BigInt lc = (powm(c, lambda, n2) - 1) / n;
  return lc * mu % n;
}

class TinyPaillierTest : public ::testing::Test {
 protected:
  TinyPaillierTest() : rng_(Rng::derive(1, "tiny")), keys_(paillier_from_primes(11, 13, rng_)) {}
  Rng rng_;
  KeyPair keys_;
};

TEST_F(TinyPaillierTest, DecryptsSevenLikeTheTextbookDefinition) {
  for (int trial = 0; trial < 20; ++trial) {
    const Ciphertext c = keys_.pk->encrypt(7, rng_);
    EXPECT_EQ(keys_.sk->decrypt(c), 7);
    EXPECT_EQ(textbook_decrypt(c.value(), 11, 13), 7);
  }
}

TEST_F(TinyPaillierTest, CiphertextsHaveTheFormGToTheMTimesRToTheN) {
  const BigInt n = 143, n2 = n * n;
  for (int m = 0; m < 143; m += 13) {
    const Ciphertext c = keys_.sk->encrypt(m, rng_);
    bool found = false;
    for (int r = 1; r < 143 && !found; ++r) {
      BigInt g;
      mpz_gcd_ui(g.get_mpz_t(), BigInt(r).get_mpz_t(), 143);
      if (g != 1) continue;
      found = powm(n + 1, m, n2) * powm(r, n, n2) % n2 == c.value();
    }
    EXPECT_TRUE(found) << "m=" << m;
  }
}

TEST_F(TinyPaillierTest, AllPlaintextsRoundTripAgainstOracle) {
  for (int m = 0; m < 143; ++m) {
    const Ciphertext c = keys_.pk->encrypt(m, rng_);
    ASSERT_EQ(keys_.sk->decrypt(c), m);
    ASSERT_EQ(textbook_decrypt(c.value(), 11, 13), m);
  }
}

TEST_F(TinyPaillierTest, HomomorphismMatchesOracle) {
  for (int a = 0; a < 143; a += 7) {
    for (int b = 0; b < 143; b += 11) {
      const Ciphertext ca = keys_.pk->encrypt(a, rng_);
      const Ciphertext cb = keys_.pk->encrypt(b, rng_);
      EXPECT_EQ(textbook_decrypt(keys_.pk->add(ca, cb).value(), 11, 13), (a + b) % 143);
      EXPECT_EQ(textbook_decrypt(keys_.pk->neg(ca).value(), 11, 13), (143 - a) % 143);
      EXPECT_EQ(textbook_decrypt(keys_.pk->scalar_mul(ca, b).value(), 11, 13), a * b % 143);
    }
  }
}

TEST(PaillierKeygenTest, RejectsUnsupportedSizes) {
  for (std::size_t bits : {0, 64, 512, 1023, 4096}) {
    try {
      paillier_keygen(bits, 1);
      FAIL() << bits;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kConfiguration);
    }
  }
}

TEST(PaillierKeygenTest, SameSeedSameKeys) {
  const KeyPair a = paillier_keygen(128, 5);
  const KeyPair b = paillier_keygen(128, 5);
  const KeyPair c = paillier_keygen(128, 6);
  EXPECT_EQ(a.sk->to_json(), b.sk->to_json());
  EXPECT_NE(a.sk->to_json(), c.sk->to_json());
  EXPECT_EQ(bit_length(a.pk->plaintext_modulus()), 128U);
}

TEST(PaillierKeygenTest, Modulus1024RoundTripsTenThousandPlaintexts) {
  const KeyPair keys = paillier_keygen(1024, 1);
  EXPECT_EQ(bit_length(keys.pk->plaintext_modulus()), 1024U);
  Rng rng = Rng::derive(1, "roundtrip");
  const BigInt& n = keys.pk->plaintext_modulus();
  for (int i = 0; i < 10000; ++i) {
    const BigInt m = rng.below(n);
    ASSERT_EQ(keys.sk->decrypt(keys.sk->encrypt(m, rng)), m);
  }
}

class SmallPaillierTest : public ::testing::Test {
 protected:
  SmallPaillierTest() : keys_(paillier_keygen(128, 3)), rng_(Rng::derive(3, "small")) {}
  const BigInt& n() const { return keys_.pk->plaintext_modulus(); }
  KeyPair keys_;
  Rng rng_;
};

TEST_F(SmallPaillierTest, Boundaries) {
  EXPECT_EQ(keys_.sk->decrypt(keys_.pk->encrypt(0, rng_)), 0);
  EXPECT_EQ(keys_.sk->decrypt(keys_.pk->encrypt(n() - 1, rng_)), n() - 1);
  EXPECT_THROW(keys_.pk->encrypt(n(), rng_), Error);
  EXPECT_THROW(keys_.pk->encrypt(-1, rng_), Error);
  EXPECT_THROW(keys_.sk->encrypt(n(), rng_), Error);
}

TEST_F(SmallPaillierTest, SecretKeyEncryptionIsBitIdenticalToPublicPath) {
  for (int i = 0; i < 200; ++i) {
    const BigInt m = rng_.below(n());
    Rng a = Rng::derive(9, "equiv", i);
    Rng b = Rng::derive(9, "equiv", i);
    EXPECT_EQ(keys_.pk->encrypt(m, a), keys_.sk->encrypt(m, b));
  }
}

TEST_F(SmallPaillierTest, SecretKeyScalarMulIsBitIdenticalToPublicPath) {
  const OpCounts before = keys_.pk->counters().snapshot();
  for (int i = 0; i < 200; ++i) {
    const Ciphertext c = keys_.pk->encrypt_random(rng_);
    const BigInt k = i < 2 ? BigInt(i) : rng_.below(n());
    EXPECT_EQ(keys_.sk->scalar_mul(c, k), keys_.pk->scalar_mul(c, k));
  }
  EXPECT_EQ((keys_.pk->counters().snapshot() - before).scalar_mul, 400u);
  const Ciphertext c = keys_.pk->encrypt_random(rng_);
  EXPECT_THROW(keys_.sk->scalar_mul(c, n()), Error);
  EXPECT_THROW(keys_.sk->scalar_mul(Ciphertext(BackendId::kMock, 1), 2), Error);
}

TEST_F(SmallPaillierTest, SmallExamples) {
  const auto& pk = *keys_.pk;
  const auto& sk = *keys_.sk;
  EXPECT_EQ(sk.decrypt(pk.add(pk.encrypt(3, rng_), pk.encrypt(4, rng_))), 7);
  const Ciphertext a = pk.encrypt(rng_.below(n()), rng_);
  EXPECT_EQ(sk.decrypt(pk.add(a, pk.neg(a))), 0);
  EXPECT_EQ(sk.decrypt(pk.scalar_mul(pk.encrypt(6, rng_), 7)), 42);
  EXPECT_EQ(sk.decrypt(pk.scalar_mul(a, 1)), sk.decrypt(a));
  EXPECT_EQ(sk.decrypt(pk.scalar_mul(a, 0)), 0);
}

TEST_F(SmallPaillierTest, HomomorphicPropertiesOnRandomPairs) {
  const auto& pk = *keys_.pk;
  const auto& sk = *keys_.sk;
  for (int i = 0; i < 100; ++i) {
    const BigInt x = rng_.below(n()), y = rng_.below(n()), k = rng_.below(n());
    const Ciphertext a = pk.encrypt(x, rng_), b = pk.encrypt(y, rng_);
    EXPECT_EQ(pk.add(a, b), pk.add(b, a));
    EXPECT_EQ(sk.decrypt(pk.add(a, b)), (x + y) % n());
    EXPECT_EQ(sk.decrypt(pk.scalar_mul(a, k)), x * k % n());
    EXPECT_EQ(sk.decrypt(pk.neg(a)), (n() - x) % n());
    // Deterministic: same inputs, same bits.
    EXPECT_EQ(pk.scalar_mul(a, k), pk.scalar_mul(a, k));
    EXPECT_EQ(pk.neg(a), pk.neg(a));
  }
}

TEST_F(SmallPaillierTest, EncryptRandomIsAValidCiphertext) {
  for (int i = 0; i < 50; ++i) {
    const Ciphertext c = keys_.pk->encrypt_random(rng_);
    EXPECT_LT(keys_.sk->decrypt(c), n());
    EXPECT_EQ(keys_.sk->decrypt(keys_.pk->add(c, keys_.pk->neg(c))), 0);
  }
}

TEST_F(SmallPaillierTest, CanonicalSerialization) {
  const Ciphertext c = keys_.pk->encrypt(12345, rng_);
  const Bytes wire = c.serialize();
  EXPECT_EQ(wire[0], static_cast<std::uint8_t>(BackendId::kPaillier));
  EXPECT_EQ(keys_.pk->deserialize(wire), c);
  EXPECT_EQ(keys_.pk->deserialize(wire).serialize(), wire);

  Bytes trailing = wire;
  trailing.push_back(0);
  EXPECT_THROW(keys_.pk->deserialize(trailing), Error);

  Bytes padded = {wire[0]};
  append_u32_be(padded, read_u32_be(wire, 1) + 1);
  padded.push_back(0);
  padded.insert(padded.end(), wire.begin() + 5, wire.end());
  EXPECT_THROW(keys_.pk->deserialize(padded), Error);

  Bytes foreign = wire;
  foreign[0] = static_cast<std::uint8_t>(BackendId::kMock);
  EXPECT_THROW(keys_.pk->deserialize(foreign), Error);
}

TEST_F(SmallPaillierTest, KeyFilesRoundTrip) {
  const KeyPair loaded = key_pair_from_json(keys_.sk->to_json());
  const auto pk = public_key_from_json(keys_.pk->to_json());
  Rng a = Rng::derive(1, "kf"), b = Rng::derive(1, "kf");
  EXPECT_EQ(loaded.pk->encrypt(99, a), pk->encrypt(99, b));
  EXPECT_EQ(loaded.sk->decrypt(pk->encrypt(99, a)), 99);
  EXPECT_THROW(public_key_from_json(nlohmann::json{{"backend", "paillier"}}), Error);
}

TEST(FixedBaseTableTest, MatchesPowm) {
  Rng rng = Rng::derive(1, "fbt");
  const BigInt modulus = from_decimal("1000000000000000000000000000057");
  const BigInt base = 987654321;
  const FixedBaseTable table(base, modulus, 100, 5);
  for (int i = 0; i < 100; ++i) {
    const BigInt e = rng.bits(100);
    EXPECT_EQ(table.pow(e), powm(base, e, modulus));
  }
  EXPECT_THROW(table.pow(BigInt(1) << 100), Error);
}

}  // namespace
}  // namespace skefl::crypto
