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

#ifndef SKEFL_FL_WORKLOAD_HPP_
#define SKEFL_FL_WORKLOAD_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nlohmann/json.hpp"

namespace skefl::fl {

struct ModelVector {
  std::vector<double> weights;
  std::uint32_t owner = 0;
  std::uint64_t sample_count = 0;
};

// Sum_i (N_i / N) W_i, computed in long double. Throws kConfiguration on an
// empty list or N = 0 and kLengthMismatch on ragged models.
ModelVector fedavg_oracle(std::span<const ModelVector> models);

struct TaskParams {
  std::size_t clients = 3;
  std::size_t dims = 9;  // model length is dims + 1 (bias last)
  std::uint64_t samples_per_client = 500;
  std::uint64_t test_samples = 2000;
  // 1 gives every client the global 50/50 class mix; 0 gives each client a
  // single class (alternating by client index).
  double alpha = 1.0;
  double margin = 0.1;
  std::uint64_t seed = 1;

  nlohmann::json to_json() const;
};

struct Dataset {
  std::vector<double> features;  // row-major, rows x dims
  std::vector<double> labels;    // 0 or 1
  std::size_t dims = 0;

  std::size_t rows() const { return labels.size(); }
  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * dims, dims};
  }
};

// Two linearly separable classes: points are standard normal, labelled by a
// hidden hyperplane, and points closer than `margin` to it are resampled.
struct SyntheticTask {
  TaskParams params;
  std::vector<double> true_weights;  // dims entries, unit norm
  std::vector<Dataset> clients;      // index 0 holds client 1
  Dataset test;

  std::size_t model_length() const { return params.dims + 1; }
  std::uint64_t total_samples() const;
};

SyntheticTask make_task(const TaskParams& params);

struct TrainParams {
  std::size_t epochs = 10;
  double lr = 0.05;
  double momentum = 0.8;
  std::size_t batch = 50;
  double clip = 1000.0;  // |w| bound, the codec's V_max
};

// Mini-batch SGD with momentum on the logistic loss, starting from `start`.
// Batch order comes from Rng::derive(seed, "train", client, round), so the
// result is a pure function of its arguments.
ModelVector local_train(std::span<const double> start, const Dataset& data,
                        std::uint32_t client, std::uint64_t round,
                        const TrainParams& params, std::uint64_t seed);

double accuracy(std::span<const double> weights, const Dataset& data);

std::string to_csv(std::span<const ModelVector> models);

}  // namespace skefl::fl

#endif  // SKEFL_FL_WORKLOAD_HPP_
