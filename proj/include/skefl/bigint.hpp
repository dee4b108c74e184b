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

#ifndef SKEFL_BIGINT_HPP_
#define SKEFL_BIGINT_HPP_

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace skefl {

using BigInt = mpz_class;
using Bytes = std::vector<std::uint8_t>;

// Minimal big-endian magnitude; zero encodes as the empty string.
Bytes to_bytes_be(const BigInt& value);
BigInt from_bytes_be(std::span<const std::uint8_t> bytes);

std::string to_decimal(const BigInt& value);
// Throws Error(kParse) on anything but an optionally signed decimal integer.
BigInt from_decimal(const std::string& text);

BigInt from_u64(std::uint64_t value);
// Requires 0 <= value < 2^64.
std::uint64_t to_u64(const BigInt& value);
std::size_t bit_length(const BigInt& value);

void append_u32_be(Bytes& out, std::uint32_t value);
std::uint32_t read_u32_be(std::span<const std::uint8_t> bytes, std::size_t offset);

}  // namespace skefl

#endif  // SKEFL_BIGINT_HPP_
