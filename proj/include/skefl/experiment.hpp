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

#ifndef SKEFL_EXPERIMENT_HPP_
#define SKEFL_EXPERIMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlohmann/json.hpp"
#include "skefl/crypto/keys.hpp"

namespace skefl::experiment {

struct ExperimentConfig {
  std::size_t n = 3;
  std::size_t f = 1;
  std::size_t m = 10;
  std::size_t rounds = 5;
  crypto::BackendKind backend = crypto::BackendKind::kMock;
  std::size_t key_bits = 1024;
  std::int64_t scale = 1'000'000;
  double v_max = 1000.0;
  std::uint64_t seed = 1;

  // Workload.
  double alpha = 1.0;
  // Share of clients sampled per round. Only used when n > 10; smaller
  // federations run every client every round.
  double client_fraction = 0.1;
  std::uint64_t samples_per_client = 500;
  std::uint64_t test_samples = 2000;
  std::size_t epochs = 10;
  double lr = 0.05;
  double momentum = 0.8;
  std::size_t batch = 50;

  // attack
  std::uint64_t trials = 10000;
  // bench
  std::vector<std::size_t> sweep_m = {1000, 2000, 4000};
  std::vector<std::size_t> sweep_n = {3, 5, 7};
  std::size_t repetitions = 3;

  // Throws kConfiguration on 2f + 1 > n, zero sizes, bad fractions, etc.
  void validate() const;
  // Clients taking part in each round.
  std::size_t participants() const;
  // (n + 1)(f + 2) / S, the per-element aggregation tolerance.
  double epsilon() const;

  // Keys sorted, every field present: equal configs serialize identically.
  nlohmann::json to_json() const;
  std::string canonical() const { return to_json().dump(); }
  std::string hash() const;
  // Missing keys keep their defaults; unknown keys throw kParse.
  static ExperimentConfig from_json(const nlohmann::json& j);
};

// "m=1000,2000,4000" or "n=3,7,15" into the matching sweep field.
void apply_sweep(ExperimentConfig& config, std::string_view spec);

// Layers, lowest first: defaults, SKEFL_SEED (env_seed), the config file,
// then flag overrides (same keys as the file).
ExperimentConfig resolve_config(const std::optional<std::filesystem::path>& file,
                                const nlohmann::json& overrides,
                                const char* env_seed);

struct Report {
  std::string command;
  // Primary output: JSON lines (run) or one JSON document (attack, verify).
  std::vector<nlohmann::json> lines;
  std::string csv;  // bench only
  nlohmann::json summary;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
  void check(bool condition, const std::string& what);
  // stdout form: JSON lines, or the CSV for bench.
  std::string render() const;
};

// Removes every timing field, recursively, for reproducibility checks.
nlohmann::json strip_timings(const nlohmann::json& j);

// `out` receives transcripts, models and the report files when set.
Report cmd_run(const ExperimentConfig& config,
               const std::optional<std::filesystem::path>& out = std::nullopt);
Report cmd_attack(const ExperimentConfig& config);
Report cmd_verify(const ExperimentConfig& config);
Report cmd_bench(const ExperimentConfig& config);

void write_report(const Report& report, const ExperimentConfig& config,
                  const std::filesystem::path& dir);

}  // namespace skefl::experiment

#endif  // SKEFL_EXPERIMENT_HPP_
