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

#include "skefl/crypto/mock.hpp"

#include "skefl/error.hpp"

namespace skefl::crypto {

MockPublicKey::MockPublicKey(BigInt modulus) : modulus_(std::move(modulus)) {
  require(modulus_ >= 2, ErrorCode::kConfiguration, "mock ring needs M >= 2");
}

Ciphertext MockPublicKey::encrypt(const BigInt& plaintext, Rng& /*rng*/) const {
  check_plaintext(plaintext);
  counters().count_encrypt();
  return Ciphertext(BackendId::kMock, plaintext);
}

Ciphertext MockPublicKey::encrypt_random(Rng& rng) const {
  counters().count_encrypt();
  return Ciphertext(BackendId::kMock, rng.below(modulus_));
}

Ciphertext MockPublicKey::add(const Ciphertext& a, const Ciphertext& b) const {
  check_operand(a);
  check_operand(b);
  counters().count_add();
  BigInt sum = a.value() + b.value();
  if (sum >= modulus_) sum -= modulus_;
  return Ciphertext(BackendId::kMock, std::move(sum));
}

Ciphertext MockPublicKey::neg(const Ciphertext& a) const {
  check_operand(a);
  counters().count_neg();
  return Ciphertext(BackendId::kMock,
                    sgn(a.value()) == 0 ? BigInt(0) : BigInt(modulus_ - a.value()));
}

Ciphertext MockPublicKey::scalar_mul(const Ciphertext& a, const BigInt& k) const {
  check_operand(a);
  check_plaintext(k);
  counters().count_scalar_mul();
  return Ciphertext(BackendId::kMock, a.value() * k % modulus_);
}

nlohmann::json MockPublicKey::to_json() const {
  return {{"backend", "mock"}, {"modulus", to_decimal(modulus_)}};
}

BigInt MockSecretKey::decrypt(const Ciphertext& c) const {
  if (c.backend() != BackendId::kMock) {
    fail(ErrorCode::kBackendMismatch, "expected a mock ciphertext");
  }
  require(sgn(c.value()) >= 0 && c.value() < pk_->plaintext_modulus(),
          ErrorCode::kRange, "ciphertext outside the ring");
  pk_->counters().count_decrypt();
  return c.value();
}

nlohmann::json MockSecretKey::to_json() const { return pk_->to_json(); }

KeyPair mock_keygen(const BigInt& modulus) {
  auto pk = std::make_shared<const MockPublicKey>(modulus);
  auto sk = std::make_shared<const MockSecretKey>(pk);
  return KeyPair{pk, sk};
}

BigInt default_mock_modulus() {
  BigInt m = 1;
  m <<= 64;
  return m;
}

}  // namespace skefl::crypto
