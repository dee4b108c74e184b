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

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "skefl/bigint.hpp"
#include "skefl/error.hpp"
#include "skefl/rng.hpp"

namespace skefl {
namespace {

TEST(BigIntTest, BytesRoundTripIsMinimal) {
  EXPECT_TRUE(to_bytes_be(BigInt(0)).empty());
  EXPECT_EQ(to_bytes_be(BigInt(255)), Bytes({0xff}));
  EXPECT_EQ(to_bytes_be(BigInt(256)), Bytes({0x01, 0x00}));
  const BigInt big = from_decimal("123456789012345678901234567890");
  EXPECT_EQ(from_bytes_be(to_bytes_be(big)), big);
}

TEST(BigIntTest, DecimalParsing) {
  EXPECT_EQ(from_decimal("-42"), BigInt(-42));
  EXPECT_THROW(from_decimal(""), Error);
  EXPECT_THROW(from_decimal("12a"), Error);
  EXPECT_THROW(from_decimal("0x10"), Error);
}

TEST(BigIntTest, U64Conversions) {
  const std::uint64_t v = 0xfedcba9876543210ULL;
  EXPECT_EQ(to_u64(from_u64(v)), v);
  EXPECT_THROW(to_u64(BigInt(-1)), Error);
  EXPECT_EQ(bit_length(from_u64(v)), 64U);
  EXPECT_EQ(bit_length(BigInt(0)), 0U);
}

TEST(BigIntTest, U32BigEndian) {
  Bytes out;
  append_u32_be(out, 0x01020304U);
  EXPECT_EQ(out, Bytes({1, 2, 3, 4}));
  EXPECT_EQ(read_u32_be(out, 0), 0x01020304U);
  EXPECT_THROW(read_u32_be(out, 1), Error);
}

TEST(Sha256Test, KnownVector) {
  const std::string abc = "abc";
  const Digest32 d = sha256(Bytes(abc.begin(), abc.end()));
  EXPECT_EQ(to_hex(d), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(digest_from_hex(to_hex(d)), d);
  EXPECT_THROW(digest_from_hex("abc"), Error);
  EXPECT_THROW(digest_from_hex(std::string(64, 'g')), Error);
}

TEST(RngTest, DeriveIsDeterministicAndSeparatesStreams) {
  Rng a = Rng::derive(7, "x", 1, 2);
  Rng b = Rng::derive(7, "x", 1, 2);
  Rng c = Rng::derive(7, "x", 2, 1);
  Rng d = Rng::derive(7, "y", 1, 2);
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next_u64();
    EXPECT_EQ(va, b.next_u64());
    EXPECT_NE(va, c.next_u64());
    EXPECT_NE(va, d.next_u64());
  }
}

TEST(RngTest, BelowStaysInRangeAndCoversIt) {
  Rng rng = Rng::derive(1, "below");
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const auto v = rng.below(7);
    ASSERT_LT(v, 7U);
    ++hits[v];
  }
  for (int h : hits) EXPECT_GT(h, 800);
  const BigInt bound = from_decimal("1000000000000000000000000");
  for (int i = 0; i < 200; ++i) {
    const BigInt v = rng.below(bound);
    EXPECT_GE(v, 0);
    EXPECT_LT(v, bound);
  }
}

TEST(RngTest, BitsAndUniform) {
  Rng rng = Rng::derive(2, "bits");
  for (int i = 0; i < 100; ++i) {
    EXPECT_LE(bit_length(rng.bits(77)), 77U);
    const double u = rng.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(RngTest, NormalMomentsAreReasonable) {
  Rng rng = Rng::derive(3, "normal");
  double sum = 0, sq = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.05);
  EXPECT_NEAR(sq / n, 1.0, 0.05);
}

TEST(RngTest, ShuffleIsAPermutation) {
  Rng rng = Rng::derive(4, "shuffle");
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  shuffle(std::span<int>(v), rng);
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
  EXPECT_FALSE(std::is_sorted(v.begin(), v.end()));
}

}  // namespace
}  // namespace skefl
