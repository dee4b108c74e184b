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

// skefl {run|attack|verify|bench} --config path [overrides]
//
// Exit codes: 0 all in-run assertions held, 1 an assertion failed,
// 2 bad configuration or usage.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"
#include "skefl/error.hpp"
#include "skefl/experiment.hpp"

namespace {

namespace ex = skefl::experiment;

struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> out;
  std::optional<std::size_t> n, f, m, rounds, key_bits, epochs, batch, reps;
  std::optional<std::string> backend;
  std::optional<std::int64_t> scale;
  std::optional<std::uint64_t> seed, trials, samples;
  std::optional<double> alpha, fraction, lr, momentum;
  std::vector<std::string> sweeps;
};

void add_flags(CLI::App& cmd, Flags& fl) {
  cmd.add_option("--config", fl.config, "JSON experiment config")->check(CLI::ExistingFile);
  cmd.add_option("--out", fl.out, "directory for reports and transcripts");
  cmd.add_option("--n", fl.n, "clients");
  cmd.add_option("--f", fl.f, "collusion bound");
  cmd.add_option("--m", fl.m, "model length");
  cmd.add_option("--rounds", fl.rounds, "training rounds");
  cmd.add_option("--backend", fl.backend, "paillier or mock");
  cmd.add_option("--key-bits", fl.key_bits, "Paillier modulus size");
  cmd.add_option("--scale", fl.scale, "fixed-point scale S");
  cmd.add_option("--seed", fl.seed, "seed (falls back to SKEFL_SEED)");
  cmd.add_option("--alpha", fl.alpha, "non-IID knob, 1 = IID");
  cmd.add_option("--fraction", fl.fraction, "clients per round when n > 10");
  cmd.add_option("--samples", fl.samples, "training samples per client");
  cmd.add_option("--epochs", fl.epochs, "local epochs");
  cmd.add_option("--lr", fl.lr, "learning rate");
  cmd.add_option("--momentum", fl.momentum, "SGD momentum");
  cmd.add_option("--batch", fl.batch, "minibatch size");
  cmd.add_option("--trials", fl.trials, "distinguishing game trials");
  cmd.add_option("--reps", fl.reps, "bench repetitions (>= 3)");
  cmd.add_option("--sweep", fl.sweeps, "bench sweep, e.g. m=1000,2000,4000");
}

template <typename T>
void put(nlohmann::json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

ex::ExperimentConfig build_config(const Flags& fl) {
  nlohmann::json o = nlohmann::json::object();
  put(o, "n", fl.n);
  put(o, "f", fl.f);
  put(o, "m", fl.m);
  put(o, "rounds", fl.rounds);
  put(o, "backend", fl.backend);
  put(o, "key_bits", fl.key_bits);
  put(o, "scale", fl.scale);
  put(o, "seed", fl.seed);
  put(o, "alpha", fl.alpha);
  put(o, "client_fraction", fl.fraction);
  put(o, "samples_per_client", fl.samples);
  put(o, "epochs", fl.epochs);
  put(o, "lr", fl.lr);
  put(o, "momentum", fl.momentum);
  put(o, "batch", fl.batch);
  put(o, "trials", fl.trials);
  put(o, "repetitions", fl.reps);
  std::optional<std::filesystem::path> file;
  if (fl.config) file = *fl.config;
  ex::ExperimentConfig config = ex::resolve_config(file, o, std::getenv("SKEFL_SEED"));
  for (const std::string& s : fl.sweeps) ex::apply_sweep(config, s);
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Skefl secure aggregation experiments"};
  app.require_subcommand(1);
  Flags flags;
  std::vector<std::pair<std::string, CLI::App*>> commands;
  for (const char* name : {"run", "attack", "verify", "bench"}) {
    CLI::App* cmd = app.add_subcommand(name);
    add_flags(*cmd, flags);
    commands.emplace_back(name, cmd);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  std::string command;
  for (const auto& [name, cmd] : commands) {
    if (cmd->parsed()) command = name;
  }

  try {
    const ex::ExperimentConfig config = build_config(flags);
    std::optional<std::filesystem::path> out;
    if (flags.out) out = *flags.out;

    ex::Report report;
    if (command == "run") {
      report = ex::cmd_run(config, out);
    } else if (command == "attack") {
      report = ex::cmd_attack(config);
    } else if (command == "verify") {
      report = ex::cmd_verify(config);
    } else {
      report = ex::cmd_bench(config);
    }

    if (out) {
      ex::write_report(report, config, *out);
    } else {
      std::cout << report.render();
    }
    for (const std::string& failure : report.failures) {
      std::cerr << "skefl " << command << ": FAIL " << failure << "\n";
    }
    return report.ok() ? 0 : 1;
  } catch (const skefl::Error& e) {
    std::cerr << "skefl " << command << ": " << e.what() << "\n";
    return 2;
  }
}
