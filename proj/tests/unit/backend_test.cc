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

#include <filesystem>
#include <fstream>

#include "gtest/gtest.h"
#include "skefl/crypto/keys.hpp"
#include "skefl/crypto/mock.hpp"
#include "skefl/crypto/paillier.hpp"
#include "skefl/error.hpp"

namespace skefl::crypto {
namespace {

TEST(MockBackendTest, EncryptionIsIdentity) {
  const KeyPair keys = mock_keygen(1000);
  Rng rng = Rng::derive(1, "mock");
  const Ciphertext c = keys.pk->encrypt(123, rng);
  EXPECT_EQ(c.value(), 123);
  EXPECT_EQ(c.backend(), BackendId::kMock);
  EXPECT_EQ(keys.sk->decrypt(c), 123);
  EXPECT_EQ(keys.pk->add(c, keys.pk->encrypt(900, rng)).value(), 23);
  EXPECT_EQ(keys.pk->neg(c).value(), 877);
  EXPECT_EQ(keys.pk->neg(keys.pk->encrypt(0, rng)).value(), 0);
  EXPECT_EQ(keys.pk->scalar_mul(c, 9).value(), 107);
  EXPECT_THROW(keys.pk->encrypt(1000, rng), Error);
}

TEST(MockBackendTest, DefaultModulusIsTwoToTheSixtyFour) {
  EXPECT_EQ(default_mock_modulus(), BigInt(1) << 64);
}

TEST(BackendTest, MixingBackendsIsAnError) {
  const KeyPair mock = mock_keygen(default_mock_modulus());
  Rng rng = Rng::derive(1, "mix");
  const KeyPair paillier = paillier_keygen(128, 1);
  const Ciphertext a = mock.pk->encrypt(1, rng);
  const Ciphertext b = paillier.pk->encrypt(1, rng);
  try {
    mock.pk->add(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBackendMismatch);
  }
  EXPECT_THROW(paillier.sk->decrypt(a), Error);
}

TEST(BackendTest, VectorHelpers) {
  const KeyPair keys = mock_keygen(97);
  Rng rng = Rng::derive(2, "vec");
  const std::vector<BigInt> xs = {1, 2, 3};
  const CiphertextVector a = encrypt_vector(*keys.pk, xs, rng);
  const CiphertextVector b = scalar_mul_vector(*keys.pk, a, 10);
  EXPECT_EQ(decrypt_vector(*keys.sk, add_vectors(*keys.pk, a, b)),
            (std::vector<BigInt>{11, 22, 33}));
  CiphertextVector shorter = a;
  shorter.pop_back();
  try {
    add_vectors(*keys.pk, a, shorter);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthMismatch);
  }
}

TEST(BackendTest, VectorSerializationRoundTrip) {
  const KeyPair keys = paillier_keygen(128, 2);
  Rng rng = Rng::derive(3, "vec");
  const std::vector<BigInt> xs = {0, 5, 77};
  const CiphertextVector v = encrypt_vector(*keys.pk, xs, rng);
  const Bytes wire = serialize(v);
  EXPECT_EQ(keys.pk->deserialize_vector(wire), v);
  EXPECT_EQ(serialize(keys.pk->deserialize_vector(wire)), wire);
  Bytes lying = wire;
  lying[3] = 200;  // claims 200 elements
  EXPECT_THROW(keys.pk->deserialize_vector(lying), Error);
  EXPECT_THROW(keys.pk->deserialize_vector(Bytes{0, 0}), Error);
}

TEST(BackendTest, OpCountersTrackEveryOperation) {
  const KeyPair keys = mock_keygen(97);
  Rng rng = Rng::derive(4, "ops");
  const OpCounts before = keys.pk->counters().snapshot();
  const Ciphertext a = keys.pk->encrypt(1, rng);
  const Ciphertext b = keys.pk->encrypt_random(rng);
  keys.pk->add(a, b);
  keys.pk->sub(a, b);
  keys.pk->scalar_mul(a, 3);
  keys.sk->decrypt(a);
  const OpCounts d = keys.pk->counters().snapshot() - before;
  EXPECT_EQ(d.encrypt, 2U);
  EXPECT_EQ(d.add, 2U);
  EXPECT_EQ(d.neg, 1U);
  EXPECT_EQ(d.scalar_mul, 1U);
  EXPECT_EQ(d.decrypt, 1U);
  EXPECT_EQ(d.public_ops(), 6U);
}

TEST(KeysTest, KeygenDispatchAndFiles) {
  EXPECT_EQ(backend_kind_from_string("mock"), BackendKind::kMock);
  EXPECT_EQ(to_string(BackendKind::kPaillier), "paillier");
  EXPECT_THROW(backend_kind_from_string("ckks"), Error);
  const KeyPair keys = keygen(BackendKind::kPaillier, 128, 11);
  const auto dir = std::filesystem::temp_directory_path() / "skefl_keys_test";
  write_key_files(keys, dir);
  std::ifstream in(dir / "secret_key.json");
  const KeyPair loaded = key_pair_from_json(nlohmann::json::parse(in));
  EXPECT_EQ(loaded.pk->to_json(), keys.pk->to_json());
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace skefl::crypto
