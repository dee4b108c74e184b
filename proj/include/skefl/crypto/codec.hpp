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

#ifndef SKEFL_CRYPTO_CODEC_HPP_
#define SKEFL_CRYPTO_CODEC_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "skefl/bigint.hpp"

namespace skefl::crypto {

// Fixed-point encoding of reals into Z_M: x -> round_half_even(x * S) mod M,
// negatives represented as M - |.|. Decoding lifts to the centered
// representative in (-M/2, M/2] and divides by S^k, where k counts how many
// encoded factors were multiplied together (1 for a plain value, 2 for a
// weighted value).
class FixedPointCodec {
 public:
  static constexpr std::int64_t kDefaultScale = 1'000'000;
  static constexpr double kDefaultVMax = 1000.0;

  FixedPointCodec(std::int64_t scale, BigInt modulus,
                  double v_max = kDefaultVMax);

  std::int64_t scale() const { return scale_; }
  const BigInt& modulus() const { return modulus_; }
  double v_max() const { return v_max_; }
  std::size_t bit_length() const;

  BigInt encode(double x) const;
  std::vector<BigInt> encode(std::span<const double> xs) const;
  double decode(const BigInt& pt, int scale_power = 1) const;
  std::vector<double> decode(std::span<const BigInt> pts,
                             int scale_power = 1) const;

  // round_half_even(part * S / total), computed exactly in integers.
  BigInt ratio(std::uint64_t part, std::uint64_t total) const;

  // M > 2 * S^2 * V_max * parties: a sum of `parties` weighted values never
  // wraps around the ring.
  bool fits(std::size_t parties) const;
  void require_capacity(std::size_t parties) const;

 private:
  std::int64_t centered(const BigInt& pt) const;

  std::int64_t scale_;
  BigInt modulus_;
  BigInt half_modulus_;
  double v_max_;
};

}  // namespace skefl::crypto

#endif  // SKEFL_CRYPTO_CODEC_HPP_
