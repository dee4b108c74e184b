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

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "kernels_internal.hpp"

namespace skefl::kernels {
namespace {

// 2^52 + 2^51: adding it to an integral double |r| < 2^51 places r in the low
// mantissa bits, so the bit pattern minus the magic's pattern is r as int64.
constexpr double kRoundMagic = 6755399441055744.0;

void quantize_avx2(std::span<const double> x, double scale,
                   std::span<std::int64_t> out) {
  const std::size_t n = x.size();
  const __m256d vscale = _mm256_set1_pd(scale);
  const __m256d vmagic = _mm256_set1_pd(kRoundMagic);
  const __m256i vmagic_bits = _mm256_castpd_si256(vmagic);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_mul_pd(_mm256_loadu_pd(&x[i]), vscale);
    v = _mm256_round_pd(v, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    const __m256i bits = _mm256_castpd_si256(_mm256_add_pd(v, vmagic));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(&out[i]),
                        _mm256_sub_epi64(bits, vmagic_bits));
  }
  for (; i < n; ++i) {
    out[i] = static_cast<std::int64_t>(std::nearbyint(x[i] * scale));
  }
}

// Exact int64 -> double for the full range: the high half is biased into a
// double with exponent 2^84, the low half into 2^52, and the single final
// addition performs the only rounding (same as cvtsi2sd).
inline __m256d int64_to_double(__m256i v) {
  const __m256i magic_lo = _mm256_castpd_si256(_mm256_set1_pd(4503599627370496.0));  // 2^52
  const __m256i magic_hi = _mm256_set1_epi64x(0x4530000080000000LL);
  // 2^84 + 2^63 + 2^52
  const __m256d magic_all =
      _mm256_castsi256_pd(_mm256_set1_epi64x(0x4530000080100000LL));
  __m256i hi = _mm256_srli_epi64(v, 32);
  hi = _mm256_xor_si256(hi, magic_hi);
  const __m256i lo = _mm256_blend_epi32(magic_lo, v, 0b01010101);
  const __m256d hi_d = _mm256_sub_pd(_mm256_castsi256_pd(hi), magic_all);
  return _mm256_add_pd(hi_d, _mm256_castsi256_pd(lo));
}

void dequantize_avx2(std::span<const std::int64_t> v, double divisor,
                     std::span<double> out) {
  const std::size_t n = v.size();
  const __m256d vdiv = _mm256_set1_pd(divisor);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i raw =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(&v[i]));
    _mm256_storeu_pd(&out[i], _mm256_div_pd(int64_to_double(raw), vdiv));
  }
  for (; i < n; ++i) out[i] = static_cast<double>(v[i]) / divisor;
}

void axpy_avx2(double a, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d product = _mm256_mul_pd(va, _mm256_loadu_pd(&x[i]));
    _mm256_storeu_pd(&y[i], _mm256_add_pd(_mm256_loadu_pd(&y[i]), product));
  }
  for (; i < n; ++i) {
    const double product = a * x[i];
    y[i] = y[i] + product;
  }
}

double dot_avx2(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d product =
        _mm256_mul_pd(_mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i]));
    acc = _mm256_add_pd(acc, product);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) {
    const double product = x[i] * y[i];
    sum = sum + product;
  }
  return sum;
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{Isa::kAvx2, quantize_avx2, dequantize_avx2,
                                 axpy_avx2, dot_avx2};
  return &table;
}

}  // namespace skefl::kernels
