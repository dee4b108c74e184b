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

#ifndef SKEFL_KERNELS_HPP_
#define SKEFL_KERNELS_HPP_

#include <cstdint>
#include <span>
#include <string_view>

// Data-parallel inner loops shared by the fixed-point codec, the FedAvg
// oracle and the synthetic trainer. Each kernel has a scalar reference and,
// on x86-64, an AVX2 variant; both produce bit-identical results (no FMA
// contraction, fixed 4-lane reduction order), so the choice of variant never
// changes a transcript.
namespace skefl::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view to_string(Isa isa);

struct KernelTable {
  Isa isa;
  // out[i] = round_half_even(x[i] * scale). Requires |x[i] * scale| < 2^51.
  void (*quantize)(std::span<const double> x, double scale,
                   std::span<std::int64_t> out);
  // out[i] = double(v[i]) / divisor, full int64 range.
  void (*dequantize)(std::span<const std::int64_t> v, double divisor,
                     std::span<double> out);
  // y[i] += a * x[i]
  void (*axpy)(double a, std::span<const double> x, std::span<double> y);
  // Four interleaved partial sums, combined as (s0 + s1) + (s2 + s3), then
  // the tail in order.
  double (*dot)(std::span<const double> x, std::span<const double> y);
};

const KernelTable& scalar();
// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2.
const KernelTable* avx2();

// Best available table. SKEFL_ISA=scalar in the environment pins the scalar
// reference.
const KernelTable& active();

inline constexpr double kQuantizeLimit = 2251799813685248.0;  // 2^51

}  // namespace skefl::kernels

#endif  // SKEFL_KERNELS_HPP_
