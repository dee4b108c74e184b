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

#include "skefl/fl_workload.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "skefl/error.hpp"
#include "skefl/kernels.hpp"
#include "skefl/rng.hpp"

namespace skefl::fl {

ModelVector fedavg_oracle(std::span<const ModelVector> models) {
  require(!models.empty(), ErrorCode::kConfiguration, "FedAvg of no models");
  const std::size_t m = models[0].weights.size();
  std::uint64_t total = 0;
  for (const ModelVector& w : models) {
    require(w.weights.size() == m, ErrorCode::kLengthMismatch,
            "FedAvg over models of different lengths");
    total += w.sample_count;
  }
  require(total > 0, ErrorCode::kConfiguration, "total sample count N must be > 0");
  std::vector<long double> acc(m, 0.0L);
  for (const ModelVector& w : models) {
    const long double frac =
        static_cast<long double>(w.sample_count) / static_cast<long double>(total);
    for (std::size_t k = 0; k < m; ++k) acc[k] += frac * w.weights[k];
  }
  ModelVector out;
  out.sample_count = total;
  out.weights.assign(acc.begin(), acc.end());
  return out;
}

nlohmann::json TaskParams::to_json() const {
  return {{"clients", clients},           {"dims", dims},
          {"samples_per_client", samples_per_client},
          {"test_samples", test_samples}, {"alpha", alpha},
          {"margin", margin},             {"seed", seed}};
}

std::uint64_t SyntheticTask::total_samples() const {
  std::uint64_t total = 0;
  for (const Dataset& d : clients) total += d.rows();
  return total;
}

namespace {

// Draws a point with the requested label, at least `margin` from the plane.
void sample_point(const std::vector<double>& w, double label, double margin,
                  Rng& rng, std::vector<double>& out) {
  const std::size_t d = w.size();
  std::vector<double> x(d);
  for (;;) {
    for (double& v : x) v = rng.normal();
    const double score = kernels::active().dot(x, w);
    if (std::fabs(score) < margin) continue;
    if ((score > 0) != (label > 0.5)) {
      // Reflecting through the plane keeps the distribution and the margin.
      for (std::size_t k = 0; k < d; ++k) x[k] -= 2.0 * score * w[k];
    }
    out.insert(out.end(), x.begin(), x.end());
    return;
  }
}

Dataset make_dataset(const std::vector<double>& w, std::uint64_t rows,
                     double positive_rate, double margin, Rng& rng) {
  Dataset data;
  data.dims = w.size();
  data.features.reserve(rows * w.size());
  data.labels.reserve(rows);
  for (std::uint64_t i = 0; i < rows; ++i) {
    const double label = rng.uniform() < positive_rate ? 1.0 : 0.0;
    sample_point(w, label, margin, rng, data.features);
    data.labels.push_back(label);
  }
  return data;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

SyntheticTask make_task(const TaskParams& params) {
  require(params.clients >= 1 && params.dims >= 1, ErrorCode::kConfiguration,
          "task needs at least one client and one dimension");
  require(params.alpha >= 0.0 && params.alpha <= 1.0, ErrorCode::kConfiguration,
          "non-IID alpha must lie in [0, 1]");
  require(params.samples_per_client > 0, ErrorCode::kConfiguration,
          "clients need at least one sample");
  SyntheticTask task;
  task.params = params;
  Rng rng = Rng::derive(params.seed, "task/plane");
  task.true_weights.resize(params.dims);
  for (double& v : task.true_weights) v = rng.normal();
  const double norm = std::sqrt(kernels::active().dot(task.true_weights, task.true_weights));
  for (double& v : task.true_weights) v /= norm;

  for (std::size_t c = 0; c < params.clients; ++c) {
    Rng client_rng = Rng::derive(params.seed, "task/client", c + 1);
    const double skewed = c % 2 == 0 ? 1.0 : 0.0;
    const double rate = params.alpha * 0.5 + (1.0 - params.alpha) * skewed;
    task.clients.push_back(make_dataset(task.true_weights, params.samples_per_client, rate,
                                        params.margin, client_rng));
  }
  Rng test_rng = Rng::derive(params.seed, "task/test");
  task.test =
      make_dataset(task.true_weights, params.test_samples, 0.5, params.margin, test_rng);
  return task;
}

ModelVector local_train(std::span<const double> start, const Dataset& data,
                        std::uint32_t client, std::uint64_t round,
                        const TrainParams& params, std::uint64_t seed) {
  const std::size_t d = data.dims;
  require(start.size() == d + 1, ErrorCode::kLengthMismatch,
          "model length must be dims + 1");
  require(params.lr > 0 && params.batch > 0 && params.clip > 0, ErrorCode::kConfiguration,
          "training hyperparameters must be positive");
  const kernels::KernelTable& k = kernels::active();
  std::vector<double> w(start.begin(), start.end());
  std::vector<double> velocity(d + 1, 0.0);
  std::vector<double> grad(d + 1, 0.0);
  std::vector<std::size_t> order(data.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = Rng::derive(seed, "train", client, round);
  const std::span<const double> weights(w.data(), d);

  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    shuffle(std::span<std::size_t>(order), rng);
    for (std::size_t begin = 0; begin < order.size(); begin += params.batch) {
      const std::size_t end = std::min(order.size(), begin + params.batch);
      std::fill(grad.begin(), grad.end(), 0.0);
      const std::span<double> grad_w(grad.data(), d);
      for (std::size_t b = begin; b < end; ++b) {
        const auto x = data.row(order[b]);
        const double err = sigmoid(k.dot(x, weights) + w[d]) - data.labels[order[b]];
        k.axpy(err, x, grad_w);
        grad[d] += err;
      }
      const double inv = 1.0 / static_cast<double>(end - begin);
      for (std::size_t j = 0; j <= d; ++j) {
        velocity[j] = params.momentum * velocity[j] + grad[j] * inv;
        w[j] -= params.lr * velocity[j];
      }
    }
  }
  for (double& v : w) v = std::clamp(v, -params.clip, params.clip);
  return ModelVector{std::move(w), client, data.rows()};
}

double accuracy(std::span<const double> weights, const Dataset& data) {
  require(weights.size() == data.dims + 1, ErrorCode::kLengthMismatch,
          "model length must be dims + 1");
  if (data.rows() == 0) return 0.0;
  const std::span<const double> w = weights.first(data.dims);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const double score = kernels::active().dot(data.row(i), w) + weights[data.dims];
    if ((score > 0) == (data.labels[i] > 0.5)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.rows());
}

std::string to_csv(std::span<const ModelVector> models) {
  std::ostringstream out;
  out.precision(17);
  out << "owner,sample_count,index,weight\n";
  for (const ModelVector& w : models) {
    for (std::size_t k = 0; k < w.weights.size(); ++k) {
      out << w.owner << ',' << w.sample_count << ',' << k << ',' << w.weights[k] << '\n';
    }
  }
  return out.str();
}

}  // namespace skefl::fl
