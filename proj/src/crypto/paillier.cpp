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

#include "skefl/crypto/paillier.hpp"

#include <algorithm>

#include "skefl/error.hpp"

namespace skefl::crypto {
namespace {

BigInt mod_inverse(const BigInt& value, const BigInt& modulus) {
  BigInt out;
  if (mpz_invert(out.get_mpz_t(), value.get_mpz_t(), modulus.get_mpz_t()) == 0) {
    fail(ErrorCode::kRange, "value is not invertible modulo the ciphertext space");
  }
  return out;
}

BigInt powm(const BigInt& base, const BigInt& exponent, const BigInt& modulus) {
  BigInt out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(),
           modulus.get_mpz_t());
  return out;
}

BigInt gcd(const BigInt& a, const BigInt& b) {
  BigInt out;
  mpz_gcd(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

// L_p(x) = (x - 1) / p
BigInt l_function(const BigInt& x, const BigInt& p) { return (x - 1) / p; }

BigInt random_prime(std::size_t bits, Rng& rng) {
  for (;;) {
    BigInt candidate = rng.bits(bits);
    // Top two bits set so the product of two such primes has exactly 2*bits.
    mpz_setbit(candidate.get_mpz_t(), bits - 1);
    mpz_setbit(candidate.get_mpz_t(), bits - 2);
    mpz_setbit(candidate.get_mpz_t(), 0);
    BigInt prime;
    mpz_nextprime(prime.get_mpz_t(), candidate.get_mpz_t());
    if (bit_length(prime) == bits) return prime;
  }
}

BigInt make_hs(const BigInt& n, Rng& rng) {
  BigInt x = rng.below(n);
  while (sgn(x) == 0 || gcd(x, n) != 1) x = rng.below(n);
  BigInt h = n - (x * x % n);
  return powm(h, n, n * n);
}

}  // namespace

namespace {

std::vector<mp_limb_t> to_limbs(const BigInt& x, std::size_t limbs) {
  std::vector<mp_limb_t> out(limbs, 0);
  for (std::size_t i = 0; i < limbs; ++i) out[i] = mpz_getlimbn(x.get_mpz_t(), i);
  return out;
}

BigInt from_limbs(const mp_limb_t* limbs, std::size_t count) {
  BigInt x;
  mp_limb_t* dst = mpz_limbs_write(x.get_mpz_t(), static_cast<mp_size_t>(count));
  std::copy(limbs, limbs + count, dst);
  mpz_limbs_finish(x.get_mpz_t(), static_cast<mp_size_t>(count));
  return x;
}

}  // namespace

FixedBaseTable::FixedBaseTable(const BigInt& base, const BigInt& modulus,
                               std::size_t exponent_bits, unsigned window_bits)
    : modulus_(modulus),
      limbs_(mpz_size(modulus.get_mpz_t())),
      windows_((exponent_bits + window_bits - 1) / window_bits),
      window_bits_(window_bits) {
  require(window_bits >= 1 && window_bits <= 16, ErrorCode::kConfiguration,
          "fixed-base window must be 1..16 bits");
  require(modulus_ > 1 && mpz_odd_p(modulus_.get_mpz_t()) != 0, ErrorCode::kConfiguration,
          "fixed-base modulus must be odd");
  mod_limbs_ = to_limbs(modulus_, limbs_);
  // Newton iteration for m0^-1 mod 2^64; m0 * m0 = 1 mod 8 seeds 3 bits.
  const mp_limb_t m0 = mod_limbs_[0];
  mp_limb_t inv = m0;
  for (int i = 0; i < 5; ++i) inv *= 2 - m0 * inv;
  neg_inv_ = -inv;

  const BigInt r = BigInt(1) << (64 * limbs_);
  one_ = to_limbs(r % modulus_, limbs_);
  BigInt b = base % modulus_;
  if (sgn(b) < 0) b += modulus_;
  std::vector<mp_limb_t> window_base = to_limbs(b * r % modulus_, limbs_);

  const std::size_t digits = std::size_t{1} << window_bits_;
  table_.resize(windows_ * digits * limbs_);
  std::vector<mp_limb_t> scratch(2 * limbs_);
  for (std::size_t w = 0; w < windows_; ++w) {
    mp_limb_t* row = table_.data() + w * digits * limbs_;
    std::copy(one_.begin(), one_.end(), row);
    for (std::size_t d = 1; d < digits; ++d) {
      mont_mul(row + d * limbs_, row + (d - 1) * limbs_, window_base.data(), scratch.data());
    }
    mont_mul(window_base.data(), row + (digits - 1) * limbs_, window_base.data(),
             scratch.data());
  }
}

void FixedBaseTable::mont_mul(mp_limb_t* out, const mp_limb_t* a, const mp_limb_t* b,
                              mp_limb_t* scratch) const {
  const auto n = static_cast<mp_size_t>(limbs_);
  const mp_limb_t* m = mod_limbs_.data();
  mpn_mul_n(scratch, a, b, n);
  // Word-by-word REDC. The carry out of row i belongs at limb i + n; it is
  // parked in limb i (zero by then) and added in one pass at the end.
  for (mp_size_t i = 0; i < n; ++i) {
    const mp_limb_t u = scratch[i] * neg_inv_;
    scratch[i] = mpn_addmul_1(scratch + i, m, n, u);
  }
  const mp_limb_t carry = mpn_add_n(out, scratch + n, scratch, n);
  if (carry != 0 || mpn_cmp(out, m, n) >= 0) mpn_sub_n(out, out, m, n);
}

BigInt FixedBaseTable::pow(const BigInt& exponent) const {
  require(sgn(exponent) >= 0 && bit_length(exponent) <= windows_ * window_bits_,
          ErrorCode::kRange, "exponent wider than the fixed-base table");
  std::vector<mp_limb_t> acc(one_);
  std::vector<mp_limb_t> scratch(2 * limbs_);
  const mpz_srcptr e = exponent.get_mpz_t();
  const std::size_t e_limbs = mpz_size(e);
  const mp_limb_t digit_mask = (mp_limb_t{1} << window_bits_) - 1;
  for (std::size_t w = 0; w < windows_; ++w) {
    const std::size_t bit = w * window_bits_;
    const std::size_t limb = bit / 64;
    const unsigned shift = bit % 64;
    if (limb >= e_limbs) break;
    mp_limb_t digit = mpz_getlimbn(e, static_cast<mp_size_t>(limb)) >> shift;
    if (shift + window_bits_ > 64 && limb + 1 < e_limbs) {
      digit |= mpz_getlimbn(e, static_cast<mp_size_t>(limb + 1)) << (64 - shift);
    }
    digit &= digit_mask;
    if (digit != 0) mont_mul(acc.data(), acc.data(), entry(w, digit), scratch.data());
  }
  // Leave Montgomery form: multiply by plain 1.
  std::vector<mp_limb_t> plain_one(limbs_, 0);
  plain_one[0] = 1;
  mont_mul(acc.data(), acc.data(), plain_one.data(), scratch.data());
  return from_limbs(acc.data(), limbs_);
}

PaillierPublicKey::PaillierPublicKey(BigInt n, BigInt hs)
    : n_(std::move(n)), hs_(std::move(hs)) {
  require(n_ > 3 && mpz_odd_p(n_.get_mpz_t()) != 0, ErrorCode::kConfiguration,
          "Paillier modulus must be an odd composite");
  n_squared_ = n_ * n_;
  require(sgn(hs_) > 0 && hs_ < n_squared_, ErrorCode::kConfiguration,
          "randomizer base outside Z_{N^2}");
  alpha_bits_ = (bit_length(n_) + 1) / 2;
}

Ciphertext PaillierPublicKey::assemble(const BigInt& plaintext,
                                       const BigInt& randomizer) const {
  BigInt c = (1 + plaintext * n_) % n_squared_;
  c = c * randomizer % n_squared_;
  return Ciphertext(BackendId::kPaillier, std::move(c));
}

Ciphertext PaillierPublicKey::encrypt(const BigInt& plaintext, Rng& rng) const {
  check_plaintext(plaintext);
  counters().count_encrypt();
  const BigInt alpha = rng.bits(alpha_bits_);
  return assemble(plaintext, powm(hs_, alpha, n_squared_));
}

Ciphertext PaillierPublicKey::encrypt_random(Rng& rng) const {
  // (1+N)^m r^N with m uniform in Z_N and r uniform in Z_N^* is a uniform
  // element of Z_{N^2}^*, so sampling that group directly is a fresh
  // encryption of a uniformly random plaintext.
  counters().count_encrypt();
  BigInt c = rng.below(n_squared_);
  while (sgn(c) == 0 || gcd(c, n_) != 1) c = rng.below(n_squared_);
  return Ciphertext(BackendId::kPaillier, std::move(c));
}

Ciphertext PaillierPublicKey::add(const Ciphertext& a, const Ciphertext& b) const {
  check_operand(a);
  check_operand(b);
  counters().count_add();
  return Ciphertext(BackendId::kPaillier, a.value() * b.value() % n_squared_);
}

Ciphertext PaillierPublicKey::neg(const Ciphertext& a) const {
  check_operand(a);
  counters().count_neg();
  return Ciphertext(BackendId::kPaillier, mod_inverse(a.value(), n_squared_));
}

Ciphertext PaillierPublicKey::scalar_mul(const Ciphertext& a, const BigInt& k) const {
  check_operand(a);
  check_plaintext(k);
  counters().count_scalar_mul();
  return Ciphertext(BackendId::kPaillier, powm(a.value(), k, n_squared_));
}

nlohmann::json PaillierPublicKey::to_json() const {
  return {{"backend", "paillier"}, {"n", to_decimal(n_)}, {"hs", to_decimal(hs_)}};
}

PaillierSecretKey::PaillierSecretKey(BigInt p, BigInt q, BigInt hs)
    : p_(std::move(p)), q_(std::move(q)) {
  require(p_ != q_, ErrorCode::kConfiguration, "Paillier primes must differ");
  require(mpz_probab_prime_p(p_.get_mpz_t(), 30) > 0 &&
              mpz_probab_prime_p(q_.get_mpz_t(), 30) > 0,
          ErrorCode::kConfiguration, "Paillier factors must be prime");
  const BigInt n = p_ * q_;
  require(gcd(n, (p_ - 1) * (q_ - 1)) == 1, ErrorCode::kConfiguration,
          "gcd(N, phi(N)) must be 1");
  p_squared_ = p_ * p_;
  q_squared_ = q_ * q_;
  const BigInt g = n + 1;
  hp_ = mod_inverse(l_function(powm(g, p_ - 1, p_squared_), p_) % p_, p_);
  hq_ = mod_inverse(l_function(powm(g, q_ - 1, q_squared_), q_) % q_, q_);
  q_inv_p_ = mod_inverse(q_, p_);
  q2_inv_p2_ = mod_inverse(q_squared_, p_squared_);
  public_key_ = std::make_shared<const PaillierPublicKey>(n, std::move(hs));
}

BigInt PaillierSecretKey::decrypt(const Ciphertext& c) const {
  const PaillierPublicKey& pk = *public_key_;
  if (c.backend() != BackendId::kPaillier) {
    fail(ErrorCode::kBackendMismatch, "expected a paillier ciphertext");
  }
  require(sgn(c.value()) >= 0 && c.value() < pk.n_squared(), ErrorCode::kRange,
          "ciphertext outside the ciphertext space");
  pk.counters().count_decrypt();
  const BigInt mp =
      l_function(powm(c.value() % p_squared_, p_ - 1, p_squared_), p_) * hp_ % p_;
  const BigInt mq =
      l_function(powm(c.value() % q_squared_, q_ - 1, q_squared_), q_) * hq_ % q_;
  BigInt h = (mp - mq) * q_inv_p_ % p_;
  if (sgn(h) < 0) h += p_;
  return mq + h * q_;
}

const PaillierSecretKey::CrtTables& PaillierSecretKey::tables() const {
  std::call_once(tables_once_, [this] {
    const PaillierPublicKey& pk = *public_key_;
    tables_.mod_p2 = std::make_unique<FixedBaseTable>(pk.hs() % p_squared_,
                                                      p_squared_, pk.alpha_bits(), 11);
    tables_.mod_q2 = std::make_unique<FixedBaseTable>(pk.hs() % q_squared_,
                                                      q_squared_, pk.alpha_bits(), 11);
  });
  return tables_;
}

BigInt PaillierSecretKey::crt_combine(const BigInt& mod_p2, const BigInt& mod_q2) const {
  BigInt t = (mod_p2 - mod_q2) * q2_inv_p2_ % p_squared_;
  if (sgn(t) < 0) t += p_squared_;
  return mod_q2 + t * q_squared_;
}

Ciphertext PaillierSecretKey::encrypt(const BigInt& plaintext, Rng& rng) const {
  const PaillierPublicKey& pk = *public_key_;
  require(sgn(plaintext) >= 0 && plaintext < pk.n(), ErrorCode::kRange,
          "plaintext outside [0, M)");
  pk.counters().count_encrypt();
  const BigInt alpha = rng.bits(pk.alpha_bits());
  const CrtTables& t = tables();
  return pk.assemble(plaintext, crt_combine(t.mod_p2->pow(alpha), t.mod_q2->pow(alpha)));
}

Ciphertext PaillierSecretKey::scalar_mul(const Ciphertext& a, const BigInt& k) const {
  const PaillierPublicKey& pk = *public_key_;
  pk.check_operand(a);
  pk.check_plaintext(k);
  pk.counters().count_scalar_mul();
  return Ciphertext(BackendId::kPaillier,
                    crt_combine(powm(a.value() % p_squared_, k, p_squared_),
                                powm(a.value() % q_squared_, k, q_squared_)));
}

nlohmann::json PaillierSecretKey::to_json() const {
  return {{"backend", "paillier"},
          {"p", to_decimal(p_)},
          {"q", to_decimal(q_)},
          {"hs", to_decimal(public_key_->hs())}};
}

KeyPair paillier_keygen(std::size_t modulus_bits, Rng& rng) {
  if (modulus_bits != 128 && modulus_bits != 1024 && modulus_bits != 2048) {
    fail(ErrorCode::kConfiguration,
         "unsupported Paillier modulus size " + std::to_string(modulus_bits) +
             " (expected 128, 1024 or 2048)");
  }
  const std::size_t half = modulus_bits / 2;
  BigInt p = random_prime(half, rng);
  BigInt q = random_prime(half, rng);
  while (q == p) q = random_prime(half, rng);
  return paillier_from_primes(p, q, rng);
}

KeyPair paillier_keygen(std::size_t modulus_bits, std::uint64_t seed) {
  Rng rng = Rng::derive(seed, "keygen/paillier", modulus_bits);
  return paillier_keygen(modulus_bits, rng);
}

KeyPair paillier_from_primes(const BigInt& p, const BigInt& q, Rng& rng) {
  const BigInt n = p * q;
  auto sk = std::make_shared<const PaillierSecretKey>(p, q, make_hs(n, rng));
  return KeyPair{sk->shared_public_key(), sk};
}

}  // namespace skefl::crypto
