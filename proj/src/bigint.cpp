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

#include "skefl/bigint.hpp"

#include <cctype>

#include "skefl/error.hpp"

namespace skefl {

Bytes to_bytes_be(const BigInt& value) {
  require(sgn(value) >= 0, ErrorCode::kRange, "cannot serialize a negative integer");
  if (sgn(value) == 0) return {};
  const std::size_t size = (mpz_sizeinbase(value.get_mpz_t(), 2) + 7) / 8;
  Bytes out(size);
  std::size_t written = 0;
  mpz_export(out.data(), &written, 1, 1, 1, 0, value.get_mpz_t());
  out.resize(written);
  return out;
}

BigInt from_bytes_be(std::span<const std::uint8_t> bytes) {
  BigInt value;
  if (!bytes.empty()) {
    mpz_import(value.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  }
  return value;
}

std::string to_decimal(const BigInt& value) { return value.get_str(10); }

BigInt from_decimal(const std::string& text) {
  std::size_t start = (!text.empty() && text[0] == '-') ? 1 : 0;
  bool ok = text.size() > start;
  for (std::size_t i = start; ok && i < text.size(); ++i) {
    ok = std::isdigit(static_cast<unsigned char>(text[i])) != 0;
  }
  require(ok, ErrorCode::kParse, "not a decimal integer: '" + text + "'");
  return BigInt(text, 10);
}

BigInt from_u64(std::uint64_t value) {
  BigInt out;
  mpz_import(out.get_mpz_t(), 1, 1, sizeof(value), 0, 0, &value);
  return out;
}

std::uint64_t to_u64(const BigInt& value) {
  require(sgn(value) >= 0 && mpz_sizeinbase(value.get_mpz_t(), 2) <= 64,
          ErrorCode::kRange, "integer does not fit in 64 bits");
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, value.get_mpz_t());
  return out;
}

std::size_t bit_length(const BigInt& value) {
  return sgn(value) == 0 ? 0 : mpz_sizeinbase(value.get_mpz_t(), 2);
}

void append_u32_be(Bytes& out, std::uint32_t value) {
  out.push_back(static_cast<std::uint8_t>(value >> 24));
  out.push_back(static_cast<std::uint8_t>(value >> 16));
  out.push_back(static_cast<std::uint8_t>(value >> 8));
  out.push_back(static_cast<std::uint8_t>(value));
}

std::uint32_t read_u32_be(std::span<const std::uint8_t> bytes, std::size_t offset) {
  require(offset + 4 <= bytes.size(), ErrorCode::kParse, "truncated length field");
  return (std::uint32_t{bytes[offset]} << 24) |
         (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

}  // namespace skefl
