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

#include "skefl/crypto/codec.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "skefl/error.hpp"
#include "skefl/kernels.hpp"

namespace skefl::crypto {

FixedPointCodec::FixedPointCodec(std::int64_t scale, BigInt modulus, double v_max)
    : scale_(scale), modulus_(std::move(modulus)), v_max_(v_max) {
  require(scale_ >= 1, ErrorCode::kConfiguration, "codec scale must be >= 1");
  require(std::isfinite(v_max_) && v_max_ > 0, ErrorCode::kConfiguration,
          "codec V_max must be positive");
  require(v_max_ * static_cast<double>(scale_) < kernels::kQuantizeLimit,
          ErrorCode::kConfiguration, "V_max * S exceeds the quantizer range");
  const BigInt span = 2 * BigInt(static_cast<long>(std::ceil(v_max_))) *
                      BigInt(static_cast<long>(scale_));
  require(modulus_ > span, ErrorCode::kConfiguration,
          "ring too small: M must exceed 2 * S * V_max");
  half_modulus_ = modulus_ / 2;
}

std::size_t FixedPointCodec::bit_length() const { return skefl::bit_length(modulus_); }

BigInt FixedPointCodec::encode(double x) const {
  const double one[1] = {x};
  return encode(std::span<const double>(one))[0];
}

std::vector<BigInt> FixedPointCodec::encode(std::span<const double> xs) const {
  for (double x : xs) {
    if (!std::isfinite(x) || std::fabs(x) > v_max_) {
      fail(ErrorCode::kRange,
           "value " + std::to_string(x) + " exceeds V_max = " + std::to_string(v_max_));
    }
  }
  std::vector<std::int64_t> quantized(xs.size());
  kernels::active().quantize(xs, static_cast<double>(scale_), quantized);
  std::vector<BigInt> out;
  out.reserve(xs.size());
  for (std::int64_t v : quantized) {
    BigInt pt(static_cast<long>(v));
    if (v < 0) pt += modulus_;
    out.push_back(std::move(pt));
  }
  return out;
}

std::int64_t FixedPointCodec::centered(const BigInt& pt) const {
  require(sgn(pt) >= 0 && pt < modulus_, ErrorCode::kRange, "plaintext outside [0, M)");
  const BigInt lifted = pt > half_modulus_ ? BigInt(pt - modulus_) : pt;
  require(mpz_fits_slong_p(lifted.get_mpz_t()) != 0, ErrorCode::kRange,
          "decoded magnitude exceeds 64 bits (ring wraparound?)");
  return lifted.get_si();
}

double FixedPointCodec::decode(const BigInt& pt, int scale_power) const {
  const BigInt one[1] = {pt};
  return decode(std::span<const BigInt>(one), scale_power)[0];
}

std::vector<double> FixedPointCodec::decode(std::span<const BigInt> pts,
                                            int scale_power) const {
  require(scale_power == 1 || scale_power == 2, ErrorCode::kConfiguration,
          "decode supports scale powers 1 and 2");
  std::vector<std::int64_t> lifted;
  lifted.reserve(pts.size());
  for (const BigInt& pt : pts) lifted.push_back(centered(pt));
  const double scale = static_cast<double>(scale_);
  const double divisor = scale_power == 1 ? scale : scale * scale;
  std::vector<double> out(pts.size());
  kernels::active().dequantize(lifted, divisor, out);
  return out;
}

BigInt FixedPointCodec::ratio(std::uint64_t part, std::uint64_t total) const {
  require(total > 0, ErrorCode::kConfiguration, "total sample count N must be > 0");
  require(part <= total, ErrorCode::kRange, "N_i exceeds N");
  const BigInt numerator = from_u64(part) * BigInt(static_cast<long>(scale_));
  const BigInt denominator = from_u64(total);
  BigInt quotient, remainder;
  mpz_fdiv_qr(quotient.get_mpz_t(), remainder.get_mpz_t(), numerator.get_mpz_t(),
              denominator.get_mpz_t());
  const int cmp_half = cmp(2 * remainder, denominator);
  if (cmp_half > 0 || (cmp_half == 0 && mpz_odd_p(quotient.get_mpz_t()) != 0)) {
    quotient += 1;
  }
  return quotient;
}

bool FixedPointCodec::fits(std::size_t parties) const {
  const BigInt s(static_cast<long>(scale_));
  const BigInt bound = 2 * s * s * BigInt(static_cast<long>(std::ceil(v_max_))) *
                       BigInt(static_cast<unsigned long>(parties));
  return modulus_ > bound;
}

void FixedPointCodec::require_capacity(std::size_t parties) const {
  require(fits(parties), ErrorCode::kConfiguration,
          "ring of " + std::to_string(bit_length()) + " bits cannot hold the sum of " +
              std::to_string(parties) + " weighted values without wraparound");
}

}  // namespace skefl::crypto
