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
#include <cstddef>

#include "kernels_internal.hpp"

namespace skefl::kernels {
namespace {

void quantize_scalar(std::span<const double> x, double scale,
                     std::span<std::int64_t> out) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = static_cast<std::int64_t>(std::nearbyint(x[i] * scale));
  }
}

void dequantize_scalar(std::span<const std::int64_t> v, double divisor,
                       std::span<double> out) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = static_cast<double>(v[i]) / divisor;
  }
}

void axpy_scalar(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double product = a * x[i];
    y[i] = y[i] + product;
  }
}

double dot_scalar(std::span<const double> x, std::span<const double> y) {
  double lanes[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t blocked = x.size() / 4 * 4;
  for (std::size_t i = 0; i < blocked; i += 4) {
    for (std::size_t k = 0; k < 4; ++k) {
      const double product = x[i + k] * y[i + k];
      lanes[k] = lanes[k] + product;
    }
  }
  double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (std::size_t i = blocked; i < x.size(); ++i) {
    const double product = x[i] * y[i];
    sum = sum + product;
  }
  return sum;
}

}  // namespace

const KernelTable& scalar() {
  static const KernelTable table{Isa::kScalar, quantize_scalar,
                                 dequantize_scalar, axpy_scalar, dot_scalar};
  return table;
}

}  // namespace skefl::kernels
