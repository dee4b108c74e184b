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

#include <cmath>
#include <limits>

#include "gtest/gtest.h"
#include "skefl/crypto/codec.hpp"
#include "skefl/crypto/mock.hpp"
#include "skefl/error.hpp"
#include "skefl/rng.hpp"

namespace skefl::crypto {
namespace {

FixedPointCodec default_codec() {
  return FixedPointCodec(FixedPointCodec::kDefaultScale, default_mock_modulus());
}

TEST(CodecTest, SpecExamples) {
  const FixedPointCodec codec = default_codec();
  EXPECT_EQ(codec.encode(0.5), 500000);
  EXPECT_EQ(codec.encode(-1.5), default_mock_modulus() - 1500000);
  EXPECT_NEAR(codec.decode(codec.encode(0.1)), 0.1, 1e-6);
  EXPECT_EQ(codec.bit_length(), 65U);
}

TEST(CodecTest, RoundTripErrorWithinOneOverS) {
  const FixedPointCodec codec = default_codec();
  Rng rng = Rng::derive(1, "codec");
  for (int i = 0; i < 10000; ++i) {
    const double x = (2 * rng.uniform() - 1) * codec.v_max();
    ASSERT_LE(std::fabs(codec.decode(codec.encode(x)) - x), 1e-6) << x;
  }
  EXPECT_EQ(codec.decode(codec.encode(1000.0)), 1000.0);
  EXPECT_EQ(codec.decode(codec.encode(-1000.0)), -1000.0);
}

TEST(CodecTest, EncodeRejectsOutOfRange) {
  const FixedPointCodec codec = default_codec();
  for (double bad : {1000.5, -1e9, std::nan(""), std::numeric_limits<double>::infinity()}) {
    try {
      codec.encode(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kRange);
    }
  }
}

TEST(CodecTest, RatioRoundsHalfToEven) {
  const FixedPointCodec codec = default_codec();
  EXPECT_EQ(codec.ratio(1, 3), 333333);
  EXPECT_EQ(codec.ratio(2, 3), 666667);
  EXPECT_EQ(codec.ratio(5, 5), 1000000);
  EXPECT_EQ(codec.ratio(1, 2), 500000);
  EXPECT_EQ(codec.ratio(1, 2000000), 0);  // 0.5 rounds to even 0
  EXPECT_EQ(codec.ratio(3, 2000000), 2);  // 1.5 rounds to even 2
  EXPECT_EQ(codec.ratio(5, 2000000), 2);  // 2.5 rounds to even 2
  EXPECT_THROW(codec.ratio(1, 0), Error);
  EXPECT_THROW(codec.ratio(4, 3), Error);
}

TEST(CodecTest, WeightedDecodeUsesScaleSquared) {
  const FixedPointCodec codec = default_codec();
  const BigInt w = codec.ratio(1, 2);
  const BigInt weighted = w * codec.encode(-3.0) % codec.modulus();
  EXPECT_NEAR(codec.decode(weighted, 2), -1.5, 1e-12);
  EXPECT_THROW(codec.decode(weighted, 3), Error);
}

TEST(CodecTest, CapacityCheck) {
  const FixedPointCodec codec = default_codec();
  EXPECT_TRUE(codec.fits(9000));
  EXPECT_FALSE(codec.fits(10000));
  EXPECT_THROW(codec.require_capacity(10000), Error);
  EXPECT_THROW(FixedPointCodec(1000000, 1000), Error);  // M below 2 S V_max
  EXPECT_THROW(FixedPointCodec(0, default_mock_modulus()), Error);
  EXPECT_THROW(FixedPointCodec(1000000000, default_mock_modulus(), 1e7), Error);
}

TEST(CodecTest, DecodeRejectsWraparound) {
  const FixedPointCodec codec(1000000, BigInt(1) << 200);
  EXPECT_THROW(codec.decode(BigInt(1) << 150), Error);
  EXPECT_THROW(codec.decode(BigInt(1) << 200), Error);
}

}  // namespace
}  // namespace skefl::crypto
