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

#ifndef SKEFL_RNG_HPP_
#define SKEFL_RNG_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

#include "skefl/bigint.hpp"

namespace skefl {

using Digest32 = std::array<std::uint8_t, 32>;

Digest32 sha256(std::span<const std::uint8_t> data);
std::string to_hex(std::span<const std::uint8_t> data);
// Throws Error(kParse) on malformed input.
Digest32 digest_from_hex(std::string_view hex);

// Counter-mode ChaCha20 keystream used as a deterministic generator. Every
// stream is addressed by a 32-byte key; derive() builds that key from the
// experiment seed plus a label and two stream coordinates (typically party
// and round), so independent streams never share keystream.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(const Digest32& key);

  static Rng derive(std::uint64_t seed, std::string_view label,
                    std::uint64_t a = 0, std::uint64_t b = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return next_u64(); }

  void fill(std::span<std::uint8_t> out);
  std::uint64_t next_u64();
  // Uniform in [0, bound); bound must be nonzero.
  std::uint64_t below(std::uint64_t bound);
  // Uniform in [0, bound) by rejection on the bit length of bound.
  BigInt below(const BigInt& bound);
  // Uniform integer with exactly `bits` random bits (top bit may be zero).
  BigInt bits(std::size_t bits);
  // Uniform double in [0, 1) with 53 bits of precision.
  double uniform();
  // Standard normal via Box-Muller; platform independent unlike <random>.
  double normal();
  bool coin() { return (next_u64() & 1U) != 0; }

 private:
  void refill();

  static constexpr std::size_t kBlockBytes = 64;
  static constexpr std::size_t kBufferBlocks = 16;

  Digest32 key_;
  std::uint64_t counter_ = 0;
  std::array<std::uint8_t, kBlockBytes * kBufferBlocks> buffer_{};
  std::size_t offset_ = kBlockBytes * kBufferBlocks;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

// Fisher-Yates with our own generator; std::shuffle is not portable across
// standard library implementations.
template <typename T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace skefl

#endif  // SKEFL_RNG_HPP_
