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

#ifndef SKEFL_CRYPTO_MOCK_HPP_
#define SKEFL_CRYPTO_MOCK_HPP_

#include "skefl/crypto/backend.hpp"

namespace skefl::crypto {

// Identity "encryption" over Z_M. Ships for fast tests of everything above
// the crypto layer; hides nothing.
class MockPublicKey final : public PublicKey {
 public:
  explicit MockPublicKey(BigInt modulus);

  BackendId backend() const override { return BackendId::kMock; }
  const BigInt& plaintext_modulus() const override { return modulus_; }
  const BigInt& ciphertext_modulus() const override { return modulus_; }

  Ciphertext encrypt(const BigInt& plaintext, Rng& rng) const override;
  Ciphertext encrypt_random(Rng& rng) const override;
  Ciphertext add(const Ciphertext& a, const Ciphertext& b) const override;
  Ciphertext neg(const Ciphertext& a) const override;
  Ciphertext scalar_mul(const Ciphertext& a, const BigInt& k) const override;
  nlohmann::json to_json() const override;

 private:
  BigInt modulus_;
};

class MockSecretKey final : public SecretKey {
 public:
  explicit MockSecretKey(std::shared_ptr<const MockPublicKey> pk)
      : pk_(std::move(pk)) {}

  BigInt decrypt(const Ciphertext& c) const override;
  Ciphertext encrypt(const BigInt& plaintext, Rng& rng) const override {
    return pk_->encrypt(plaintext, rng);
  }
  const PublicKey& public_key() const override { return *pk_; }
  nlohmann::json to_json() const override;

 private:
  std::shared_ptr<const MockPublicKey> pk_;
};

KeyPair mock_keygen(const BigInt& modulus);
// 2^64: wide enough for S^2 * V_max * n with the default codec.
BigInt default_mock_modulus();

}  // namespace skefl::crypto

#endif  // SKEFL_CRYPTO_MOCK_HPP_
