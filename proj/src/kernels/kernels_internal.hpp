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

#ifndef SKEFL_SRC_KERNELS_INTERNAL_HPP_
#define SKEFL_SRC_KERNELS_INTERNAL_HPP_

#include "skefl/kernels.hpp"

namespace skefl::kernels {

// Defined in kernels_avx2.cpp, which is the only TU built with -mavx2.
const KernelTable* avx2_table();

}  // namespace skefl::kernels

#endif  // SKEFL_SRC_KERNELS_INTERNAL_HPP_
