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

#include "skefl/rng.hpp"

#include <sodium.h>

#include <cmath>
#include <numbers>

#include "skefl/error.hpp"

namespace skefl {
namespace {

void ensure_sodium() {
  static const int status = sodium_init();
  require(status >= 0, ErrorCode::kConfiguration, "libsodium failed to initialize");
}

void append_u64_be(Bytes& out, std::uint64_t value) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(value >> shift));
  }
}

}  // namespace

Digest32 sha256(std::span<const std::uint8_t> data) {
  ensure_sodium();
  Digest32 out{};
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

std::string to_hex(std::span<const std::uint8_t> data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t byte : data) {
    out.push_back(kDigits[byte >> 4]);
    out.push_back(kDigits[byte & 0x0f]);
  }
  return out;
}

Digest32 digest_from_hex(std::string_view hex) {
  require(hex.size() == 64, ErrorCode::kParse, "sha256 hex must be 64 characters");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  Digest32 out{};
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = nibble(hex[2 * i]);
    const int lo = nibble(hex[2 * i + 1]);
    require(hi >= 0 && lo >= 0, ErrorCode::kParse, "invalid hex digit");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

Rng::Rng(const Digest32& key) : key_(key) { ensure_sodium(); }

Rng Rng::derive(std::uint64_t seed, std::string_view label, std::uint64_t a,
                std::uint64_t b) {
  Bytes material;
  append_u64_be(material, seed);
  material.insert(material.end(), label.begin(), label.end());
  material.push_back(0);
  append_u64_be(material, a);
  append_u64_be(material, b);
  return Rng(sha256(material));
}

void Rng::refill() {
  static const std::array<std::uint8_t, kBlockBytes * kBufferBlocks> kZeros{};
  static const std::array<std::uint8_t, crypto_stream_chacha20_NONCEBYTES> kNonce{};
  crypto_stream_chacha20_xor_ic(buffer_.data(), kZeros.data(), buffer_.size(),
                                kNonce.data(), counter_, key_.data());
  counter_ += kBufferBlocks;
  offset_ = 0;
}

void Rng::fill(std::span<std::uint8_t> out) {
  std::size_t written = 0;
  while (written < out.size()) {
    if (offset_ == buffer_.size()) refill();
    const std::size_t take = std::min(out.size() - written, buffer_.size() - offset_);
    std::copy_n(buffer_.begin() + static_cast<std::ptrdiff_t>(offset_), take,
                out.begin() + static_cast<std::ptrdiff_t>(written));
    offset_ += take;
    written += take;
  }
}

std::uint64_t Rng::next_u64() {
  std::array<std::uint8_t, 8> raw{};
  fill(raw);
  std::uint64_t value = 0;
  for (std::uint8_t byte : raw) value = (value << 8) | byte;
  return value;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  require(bound != 0, ErrorCode::kRange, "Rng::below needs a positive bound");
  // Rejection zone keeps the result exactly uniform.
  const std::uint64_t limit = max() - (max() % bound + 1) % bound;
  std::uint64_t value = next_u64();
  while (value > limit) value = next_u64();
  return value % bound;
}

BigInt Rng::bits(std::size_t count) {
  if (count == 0) return BigInt(0);
  Bytes raw((count + 7) / 8);
  fill(raw);
  const std::size_t excess = raw.size() * 8 - count;
  raw[0] &= static_cast<std::uint8_t>(0xff >> excess);
  return from_bytes_be(raw);
}

BigInt Rng::below(const BigInt& bound) {
  require(sgn(bound) > 0, ErrorCode::kRange, "Rng::below needs a positive bound");
  const std::size_t width = bit_length(bound);
  BigInt value = bits(width);
  while (value >= bound) value = bits(width);
  return value;
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  has_spare_normal_ = true;
  return radius * std::cos(angle);
}

}  // namespace skefl
