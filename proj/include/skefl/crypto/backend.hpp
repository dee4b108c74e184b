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

#ifndef SKEFL_CRYPTO_BACKEND_HPP_
#define SKEFL_CRYPTO_BACKEND_HPP_

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "nlohmann/json.hpp"
#include "skefl/bigint.hpp"
#include "skefl/rng.hpp"

namespace skefl::crypto {

enum class BackendId : std::uint8_t {
  kMock = 0x01,
  kPaillier = 0x02,
};

std::string_view to_string(BackendId id);

// One encrypted ring element. The wire form is canonical:
//   backend byte | u32 big-endian length | minimal big-endian magnitude
class Ciphertext {
 public:
  Ciphertext() = default;
  Ciphertext(BackendId backend, BigInt value)
      : backend_(backend), value_(std::move(value)) {}

  BackendId backend() const { return backend_; }
  const BigInt& value() const { return value_; }

  Bytes serialize() const;
  void append_to(Bytes& out) const;

  friend bool operator==(const Ciphertext& a, const Ciphertext& b) {
    return a.backend_ == b.backend_ && a.value_ == b.value_;
  }

 private:
  BackendId backend_ = BackendId::kMock;
  BigInt value_;
};

using CiphertextVector = std::vector<Ciphertext>;

// u32 big-endian element count followed by each element's wire form.
Bytes serialize(const CiphertextVector& vector);

struct OpCounts {
  std::uint64_t encrypt = 0;
  std::uint64_t add = 0;
  std::uint64_t neg = 0;
  std::uint64_t scalar_mul = 0;
  std::uint64_t decrypt = 0;

  // Everything evaluated under the public key: fresh encryptions plus the
  // homomorphic add / neg / scalar_mul. Decryption is reported separately.
  std::uint64_t public_ops() const { return encrypt + add + neg + scalar_mul; }
  OpCounts operator-(const OpCounts& other) const;
};

class OpCounters {
 public:
  void count_encrypt() { encrypt_.fetch_add(1, std::memory_order_relaxed); }
  void count_add() { add_.fetch_add(1, std::memory_order_relaxed); }
  void count_neg() { neg_.fetch_add(1, std::memory_order_relaxed); }
  void count_scalar_mul() { scalar_mul_.fetch_add(1, std::memory_order_relaxed); }
  void count_decrypt() { decrypt_.fetch_add(1, std::memory_order_relaxed); }
  OpCounts snapshot() const;

 private:
  std::atomic<std::uint64_t> encrypt_{0};
  std::atomic<std::uint64_t> add_{0};
  std::atomic<std::uint64_t> neg_{0};
  std::atomic<std::uint64_t> scalar_mul_{0};
  std::atomic<std::uint64_t> decrypt_{0};
};

// Anything that can produce fresh ciphertexts. Both halves of a key pair do:
// the secret half may use its factorization to go faster but must return the
// exact same ciphertext for the same generator state.
class Encryptor {
 public:
  virtual ~Encryptor() = default;
  virtual Ciphertext encrypt(const BigInt& plaintext, Rng& rng) const = 0;
};

// Public half of an additively homomorphic scheme over Z_M. Homomorphic
// operations are deterministic: equal inputs give bit-identical outputs.
class PublicKey : public Encryptor {
 public:
  virtual BackendId backend() const = 0;
  // M, the plaintext ring size.
  virtual const BigInt& plaintext_modulus() const = 0;
  // Upper bound (exclusive) on ciphertext values.
  virtual const BigInt& ciphertext_modulus() const = 0;

  // A fresh encryption of a uniformly random plaintext, without the caller
  // learning (or needing) that plaintext.
  virtual Ciphertext encrypt_random(Rng& rng) const = 0;
  virtual Ciphertext add(const Ciphertext& a, const Ciphertext& b) const = 0;
  virtual Ciphertext neg(const Ciphertext& a) const = 0;
  virtual Ciphertext scalar_mul(const Ciphertext& a, const BigInt& k) const = 0;
  virtual nlohmann::json to_json() const = 0;

  Ciphertext sub(const Ciphertext& a, const Ciphertext& b) const {
    return add(a, neg(b));
  }

  // Parses one wire-form ciphertext. Rejects foreign backends, trailing
  // bytes, non-minimal magnitudes and values outside the ciphertext space,
  // so serialize(deserialize(b)) == b whenever it returns.
  Ciphertext deserialize(std::span<const std::uint8_t> bytes) const;
  CiphertextVector deserialize_vector(std::span<const std::uint8_t> bytes) const;

  OpCounters& counters() const { return counters_; }

  // kBackendMismatch / kRange unless c belongs to this key's ciphertext space.
  void check_operand(const Ciphertext& c) const;
  // kRange unless 0 <= value < M.
  void check_plaintext(const BigInt& value) const;

 private:
  Ciphertext parse_one(std::span<const std::uint8_t> bytes,
                       std::size_t& offset) const;

  mutable OpCounters counters_;
};

class SecretKey : public Encryptor {
 public:
  virtual BigInt decrypt(const Ciphertext& c) const = 0;
  virtual const PublicKey& public_key() const = 0;
  // Same result as public_key().scalar_mul; backends may use the trapdoor to
  // get there faster.
  virtual Ciphertext scalar_mul(const Ciphertext& a, const BigInt& k) const {
    return public_key().scalar_mul(a, k);
  }
  virtual nlohmann::json to_json() const = 0;
};

struct KeyPair {
  std::shared_ptr<const PublicKey> pk;
  std::shared_ptr<const SecretKey> sk;
};

// Element-wise helpers used by every layer above the backend.
CiphertextVector encrypt_vector(const Encryptor& encryptor,
                                std::span<const BigInt> plaintexts, Rng& rng);
std::vector<BigInt> decrypt_vector(const SecretKey& sk,
                                   const CiphertextVector& vector);
CiphertextVector add_vectors(const PublicKey& pk, const CiphertextVector& a,
                             const CiphertextVector& b);
CiphertextVector scalar_mul_vector(const PublicKey& pk,
                                   const CiphertextVector& a, const BigInt& k);
CiphertextVector scalar_mul_vector(const SecretKey& sk,
                                   const CiphertextVector& a, const BigInt& k);

}  // namespace skefl::crypto

#endif  // SKEFL_CRYPTO_BACKEND_HPP_
