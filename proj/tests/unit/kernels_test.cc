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
#include <cstring>
#include <limits>
#include <vector>

#include "gtest/gtest.h"
#include "skefl/kernels.hpp"
#include "skefl/rng.hpp"

namespace skefl::kernels {
namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

std::vector<double> random_doubles(std::size_t n, double lo, double hi, Rng& rng) {
  std::vector<double> out(n);
  for (double& v : out) v = lo + (hi - lo) * rng.uniform();
  return out;
}

TEST(KernelsTest, ScalarQuantizeRoundsHalfToEven) {
  const std::vector<double> x = {0.5, 1.5, 2.5, -0.5, -1.5, -2.5, 0.4999999, 3.0};
  std::vector<std::int64_t> out(x.size());
  scalar().quantize(x, 1.0, out);
  EXPECT_EQ(out, (std::vector<std::int64_t>{0, 2, 2, 0, -2, -2, 0, 3}));
}

TEST(KernelsTest, ScalarDequantizeFullRange) {
  const std::vector<std::int64_t> v = {std::numeric_limits<std::int64_t>::min(),
                                       std::numeric_limits<std::int64_t>::max(), -1, 0,
                                       (std::int64_t{1} << 53) + 1};
  std::vector<double> out(v.size());
  scalar().dequantize(v, 1.0, out);
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_TRUE(same_bits(out[i], static_cast<double>(v[i])));
  }
}

TEST(KernelsTest, DotMatchesLongDoubleOracle) {
  Rng rng = Rng::derive(1, "dot");
  const auto x = random_doubles(1001, -1, 1, rng);
  const auto y = random_doubles(1001, -1, 1, rng);
  long double exact = 0;
  for (std::size_t i = 0; i < x.size(); ++i) exact += static_cast<long double>(x[i]) * y[i];
  EXPECT_NEAR(scalar().dot(x, y), static_cast<double>(exact), 1e-12);
}

TEST(KernelsTest, ActiveHonoursScalarPin) {
  // The env var is read once; this only checks the selected table is valid.
  const KernelTable& t = active();
  EXPECT_TRUE(t.isa == Isa::kScalar || t.isa == Isa::kAvx2);
  EXPECT_EQ(to_string(Isa::kAvx2), "avx2");
}

class Avx2EquivalenceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    if (avx2() == nullptr) GTEST_SKIP() << "AVX2 variant unavailable";
  }
};

TEST_F(Avx2EquivalenceTest, QuantizeIsBitIdentical) {
  Rng rng = Rng::derive(2, "quantize");
  for (std::size_t n : {0, 1, 3, 4, 5, 17, 1000}) {
    auto x = random_doubles(n, -1000, 1000, rng);
    // Exact ties and large magnitudes near the quantizer limit.
    if (n >= 5) {
      x[0] = 0.5e-6;
      x[1] = -2.5e-6;
      x[2] = 1000.0;
      x[3] = -1000.0;
      x[4] = 1.5e-6;
    }
    std::vector<std::int64_t> a(n), b(n);
    scalar().quantize(x, 1e6, a);
    avx2()->quantize(x, 1e6, b);
    EXPECT_EQ(a, b) << "n=" << n;
  }
  std::vector<double> ties;
  for (int k = -40; k <= 40; ++k) ties.push_back(k + 0.5);
  std::vector<std::int64_t> a(ties.size()), b(ties.size());
  scalar().quantize(ties, 1.0, a);
  avx2()->quantize(ties, 1.0, b);
  EXPECT_EQ(a, b);
}

TEST_F(Avx2EquivalenceTest, DequantizeIsBitIdentical) {
  Rng rng = Rng::derive(3, "dequantize");
  for (std::size_t n : {1, 4, 7, 1003}) {
    std::vector<std::int64_t> v(n);
    for (auto& e : v) e = static_cast<std::int64_t>(rng.next_u64());
    v[0] = std::numeric_limits<std::int64_t>::min();
    std::vector<double> a(n), b(n);
    scalar().dequantize(v, 1e12, a);
    avx2()->dequantize(v, 1e12, b);
    for (std::size_t i = 0; i < n; ++i) ASSERT_TRUE(same_bits(a[i], b[i])) << i;
  }
}

TEST_F(Avx2EquivalenceTest, AxpyAndDotAreBitIdentical) {
  Rng rng = Rng::derive(4, "axpy");
  for (std::size_t n : {0, 1, 2, 3, 4, 9, 64, 1001}) {
    const auto x = random_doubles(n, -3, 3, rng);
    auto y1 = random_doubles(n, -3, 3, rng);
    auto y2 = y1;
    scalar().axpy(0.37, x, y1);
    avx2()->axpy(0.37, x, y2);
    for (std::size_t i = 0; i < n; ++i) ASSERT_TRUE(same_bits(y1[i], y2[i]));
    EXPECT_TRUE(same_bits(scalar().dot(x, y1), avx2()->dot(x, y1))) << "n=" << n;
  }
}

}  // namespace
}  // namespace skefl::kernels
