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

#ifndef SKEFL_CRYPTO_PAILLIER_HPP_
#define SKEFL_CRYPTO_PAILLIER_HPP_

#include <cstddef>
#include <memory>
#include <mutex>
#include <vector>

#include "skefl/crypto/backend.hpp"

namespace skefl::crypto {

// base^e mod modulus for a fixed base, via a table of base^(d * 2^(w*i)).
// Costs one modular multiplication per w-bit window of the exponent. Entries
// are kept in Montgomery form on raw limbs, so a step is a multiply and a
// REDC with no division. The modulus must be odd.
class FixedBaseTable {
 public:
  FixedBaseTable(const BigInt& base, const BigInt& modulus,
                 std::size_t exponent_bits, unsigned window_bits = 8);

  // Requires 0 <= exponent < 2^exponent_bits.
  BigInt pow(const BigInt& exponent) const;

 private:
  // out = a * b / R mod modulus; scratch holds 2 * limbs_. out may alias a.
  void mont_mul(mp_limb_t* out, const mp_limb_t* a, const mp_limb_t* b,
                mp_limb_t* scratch) const;
  const mp_limb_t* entry(std::size_t window, std::size_t digit) const {
    return table_.data() + ((window << window_bits_) + digit) * limbs_;
  }

  BigInt modulus_;
  std::size_t limbs_;
  std::vector<mp_limb_t> mod_limbs_;
  mp_limb_t neg_inv_ = 0;           // -modulus^-1 mod 2^64
  std::vector<mp_limb_t> one_;      // R mod modulus
  std::size_t windows_;
  unsigned window_bits_;
  std::vector<mp_limb_t> table_;    // windows_ x 2^window_bits_ entries
};

// Paillier with g = N + 1 and the Damgard-Jurik-Nielsen randomizer: the
// public key carries hs = (-x^2)^N mod N^2 and a fresh encryption is
//   (1 + m N) * hs^alpha mod N^2,  alpha uniform in [0, 2^ceil(k/2)).
// hs^alpha = (h^alpha)^N, so every ciphertext has the textbook form g^m r^N.
class PaillierPublicKey final : public PublicKey {
 public:
  PaillierPublicKey(BigInt n, BigInt hs);

  BackendId backend() const override { return BackendId::kPaillier; }
  const BigInt& plaintext_modulus() const override { return n_; }
  const BigInt& ciphertext_modulus() const override { return n_squared_; }

  Ciphertext encrypt(const BigInt& plaintext, Rng& rng) const override;
  Ciphertext encrypt_random(Rng& rng) const override;
  Ciphertext add(const Ciphertext& a, const Ciphertext& b) const override;
  Ciphertext neg(const Ciphertext& a) const override;
  Ciphertext scalar_mul(const Ciphertext& a, const BigInt& k) const override;
  nlohmann::json to_json() const override;

  const BigInt& n() const { return n_; }
  const BigInt& n_squared() const { return n_squared_; }
  const BigInt& hs() const { return hs_; }
  std::size_t alpha_bits() const { return alpha_bits_; }

  // (1 + m N) * randomizer mod N^2; shared by both encryption paths.
  Ciphertext assemble(const BigInt& plaintext, const BigInt& randomizer) const;

 private:
  BigInt n_;
  BigInt n_squared_;
  BigInt hs_;
  std::size_t alpha_bits_;
};

// Decrypts with CRT over p^2 and q^2. Its encrypt() evaluates hs^alpha with
// fixed-base tables modulo p^2 and q^2 and recombines; the result is
// bit-identical to PaillierPublicKey::encrypt for the same generator state.
class PaillierSecretKey final : public SecretKey {
 public:
  PaillierSecretKey(BigInt p, BigInt q, BigInt hs);

  BigInt decrypt(const Ciphertext& c) const override;
  Ciphertext encrypt(const BigInt& plaintext, Rng& rng) const override;
  // c^k mod p^2 and mod q^2, recombined.
  Ciphertext scalar_mul(const Ciphertext& a, const BigInt& k) const override;
  const PublicKey& public_key() const override { return *public_key_; }
  std::shared_ptr<const PaillierPublicKey> shared_public_key() const {
    return public_key_;
  }
  nlohmann::json to_json() const override;

  const BigInt& p() const { return p_; }
  const BigInt& q() const { return q_; }

 private:
  struct CrtTables {
    std::unique_ptr<FixedBaseTable> mod_p2;
    std::unique_ptr<FixedBaseTable> mod_q2;
  };
  const CrtTables& tables() const;
  BigInt crt_combine(const BigInt& mod_p2, const BigInt& mod_q2) const;

  BigInt p_, q_;
  BigInt p_squared_, q_squared_;
  BigInt hp_, hq_;          // L_p(g^(p-1) mod p^2)^-1 mod p, same for q
  BigInt q_inv_p_;          // q^-1 mod p
  BigInt q2_inv_p2_;        // (q^2)^-1 mod p^2
  std::shared_ptr<const PaillierPublicKey> public_key_;
  mutable std::once_flag tables_once_;
  mutable CrtTables tables_;
};

// modulus_bits must be one of 128 (test), 1024 or 2048; anything else is a
// configuration error. Deterministic in the generator state.
KeyPair paillier_keygen(std::size_t modulus_bits, Rng& rng);
KeyPair paillier_keygen(std::size_t modulus_bits, std::uint64_t seed);

// Test-only: builds a key from caller-chosen primes (e.g. 11 and 13).
KeyPair paillier_from_primes(const BigInt& p, const BigInt& q, Rng& rng);

}  // namespace skefl::crypto

#endif  // SKEFL_CRYPTO_PAILLIER_HPP_
