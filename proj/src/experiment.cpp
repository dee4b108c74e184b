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

#include "skefl/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <numeric>
#include <set>
#include <sstream>

#include "skefl/adversary.hpp"
#include "skefl/atss.hpp"
#include "skefl/crypto/codec.hpp"
#include "skefl/error.hpp"
#include "skefl/fl_workload.hpp"
#include "skefl/protocol.hpp"
#include "skefl/rng.hpp"
#include "skefl/sim_net.hpp"

namespace skefl::experiment {
namespace {

namespace fs = std::filesystem;
using atss::ClientId;
using crypto::BackendKind;
using crypto::CiphertextVector;
using crypto::FixedPointCodec;
using crypto::KeyPair;
using fl::ModelVector;
using net::MessageKind;
using protocol::Federation;
using protocol::RoundConfig;
using protocol::RoundResult;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "alpha",   "backend",  "batch",         "client_fraction", "epochs",
      "f",       "key_bits", "lr",            "m",               "momentum",
      "n",       "repetitions", "rounds",     "samples_per_client", "scale",
      "seed",    "sweep_m",  "sweep_n",       "test_samples",    "trials",
      "v_max"};
  return keys;
}

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("config field '") + key + "': " + e.what());
  }
}

std::uint64_t parse_u64(std::string_view text, const std::string& what) {
  std::uint64_t value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  require(ec == std::errc() && ptr == end && !text.empty(), ErrorCode::kParse,
          what + ": not an unsigned integer: '" + std::string(text) + "'");
  return value;
}

void merge_layer(nlohmann::json& base, const nlohmann::json& layer, const std::string& source) {
  if (layer.is_null()) return;
  require(layer.is_object(), ErrorCode::kParse, source + " must be a JSON object");
  for (const auto& [key, value] : layer.items()) {
    require(known_keys().count(key) != 0, ErrorCode::kParse,
            source + ": unknown field '" + key + "'");
    base[key] = value;
  }
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  require(a.size() == b.size(), ErrorCode::kLengthMismatch, "model length mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

// Median wall time of `reps` calls after one untimed warm-up call; `setup`
// runs untimed before each call.
double median_ms(std::size_t reps, const std::function<void()>& setup,
                 const std::function<void()>& body) {
  if (setup) setup();
  body();
  std::vector<double> samples;
  for (std::size_t r = 0; r < reps; ++r) {
    if (setup) setup();
    const auto start = std::chrono::steady_clock::now();
    body();
    samples.push_back(elapsed_ms(start));
  }
  return median(std::move(samples));
}

KeyPair make_keys(const ExperimentConfig& c) {
  return crypto::keygen(c.backend, c.key_bits, c.seed);
}

FixedPointCodec make_codec(const ExperimentConfig& c, const KeyPair& keys) {
  return FixedPointCodec(c.scale, keys.pk->plaintext_modulus(), c.v_max);
}

RoundConfig round_config(std::size_t n, std::size_t f, std::size_t m, std::uint64_t seed,
                         bool decrypt) {
  RoundConfig rc;
  rc.n = n;
  rc.f = f;
  rc.m = m;
  rc.seed = seed;
  rc.decrypt_global = decrypt;
  return rc;
}

// Uniform weights in [-1, 1] and sample counts in [1, 1000].
std::vector<ModelVector> random_models(std::size_t n, std::size_t m, Rng& rng) {
  std::vector<ModelVector> models(n);
  for (std::size_t i = 0; i < n; ++i) {
    models[i].owner = static_cast<std::uint32_t>(i + 1);
    models[i].sample_count = 1 + rng.below(1000);
    models[i].weights.resize(m);
    for (double& w : models[i].weights) w = 2.0 * rng.uniform() - 1.0;
  }
  return models;
}

std::uint64_t total_samples(const std::vector<ModelVector>& models) {
  std::uint64_t total = 0;
  for (const ModelVector& mv : models) total += mv.sample_count;
  return total;
}

// Global client ids (1-based, sorted) taking part in `round`.
std::vector<ClientId> sample_cohort(const ExperimentConfig& c, std::uint64_t round) {
  std::vector<ClientId> ids(c.n);
  std::iota(ids.begin(), ids.end(), ClientId{1});
  const std::size_t k = c.participants();
  if (k == c.n) return ids;
  Rng rng = Rng::derive(c.seed, "cohort", round);
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(ids[i], ids[i + rng.below(ids.size() - i)]);
  }
  ids.resize(k);
  std::sort(ids.begin(), ids.end());
  return ids;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::kConfiguration,
          "cannot write " + path.string());
  out << text;
}

std::uint64_t kind_count(const net::RoundTranscript& t, MessageKind kind) {
  return t.stats(kind).count;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

void ExperimentConfig::validate() const {
  auto check = [](bool ok, const std::string& what) {
    require(ok, ErrorCode::kConfiguration, what);
  };
  check(n >= 1, "n must be >= 1");
  check(2 * f + 1 <= n, "2f + 1 <= n violated: n = " + std::to_string(n) +
                            ", f = " + std::to_string(f));
  check(m >= 1, "m must be >= 1");
  check(rounds >= 1, "rounds must be >= 1");
  if (backend == BackendKind::kPaillier) {
    check(key_bits == 128 || key_bits == 1024 || key_bits == 2048,
          "key_bits must be one of 128, 1024, 2048");
  }
  check(scale >= 1, "scale must be >= 1");
  check(v_max > 0 && std::isfinite(v_max), "v_max must be positive");
  check(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0, 1]");
  check(client_fraction > 0.0 && client_fraction <= 1.0,
        "client_fraction must lie in (0, 1]");
  check(samples_per_client >= 1, "samples_per_client must be >= 1");
  check(test_samples >= 1, "test_samples must be >= 1");
  check(lr > 0.0, "lr must be positive");
  check(momentum >= 0.0 && momentum < 1.0, "momentum must lie in [0, 1)");
  check(batch >= 1, "batch must be >= 1");
  check(trials >= 1, "trials must be >= 1");
  check(repetitions >= 3, "repetitions must be >= 3");
  check(!sweep_m.empty() && !sweep_n.empty(), "sweeps must not be empty");
  for (std::size_t v : sweep_m) check(v >= 1, "sweep_m entries must be >= 1");
  for (std::size_t v : sweep_n) check(v >= 1, "sweep_n entries must be >= 1");
}

std::size_t ExperimentConfig::participants() const {
  if (n <= 10) return n;
  const auto sampled = static_cast<std::size_t>(std::ceil(client_fraction * n));
  return std::min(n, std::max(2 * f + 1, sampled));
}

double ExperimentConfig::epsilon() const {
  return static_cast<double>((n + 1) * (f + 2)) / static_cast<double>(scale);
}

nlohmann::json ExperimentConfig::to_json() const {
  return {{"n", n},
          {"f", f},
          {"m", m},
          {"rounds", rounds},
          {"backend", crypto::to_string(backend)},
          {"key_bits", key_bits},
          {"scale", scale},
          {"v_max", v_max},
          {"seed", seed},
          {"alpha", alpha},
          {"client_fraction", client_fraction},
          {"samples_per_client", samples_per_client},
          {"test_samples", test_samples},
          {"epochs", epochs},
          {"lr", lr},
          {"momentum", momentum},
          {"batch", batch},
          {"trials", trials},
          {"sweep_m", sweep_m},
          {"sweep_n", sweep_n},
          {"repetitions", repetitions}};
}

std::string ExperimentConfig::hash() const {
  const std::string text = canonical();
  return to_hex(sha256({reinterpret_cast<const std::uint8_t*>(text.data()), text.size()}));
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  require(j.is_object(), ErrorCode::kParse, "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    require(known_keys().count(key) != 0, ErrorCode::kParse,
            "unknown config field '" + key + "'");
  }
  ExperimentConfig c;
  read_field(j, "n", c.n);
  read_field(j, "f", c.f);
  read_field(j, "m", c.m);
  read_field(j, "rounds", c.rounds);
  std::string backend = crypto::to_string(c.backend);
  read_field(j, "backend", backend);
  try {
    c.backend = crypto::backend_kind_from_string(backend);
  } catch (const Error& e) {
    fail(ErrorCode::kParse, e.what());
  }
  read_field(j, "key_bits", c.key_bits);
  read_field(j, "scale", c.scale);
  read_field(j, "v_max", c.v_max);
  read_field(j, "seed", c.seed);
  read_field(j, "alpha", c.alpha);
  read_field(j, "client_fraction", c.client_fraction);
  read_field(j, "samples_per_client", c.samples_per_client);
  read_field(j, "test_samples", c.test_samples);
  read_field(j, "epochs", c.epochs);
  read_field(j, "lr", c.lr);
  read_field(j, "momentum", c.momentum);
  read_field(j, "batch", c.batch);
  read_field(j, "trials", c.trials);
  read_field(j, "sweep_m", c.sweep_m);
  read_field(j, "sweep_n", c.sweep_n);
  read_field(j, "repetitions", c.repetitions);
  return c;
}

void apply_sweep(ExperimentConfig& config, std::string_view spec) {
  const std::size_t eq = spec.find('=');
  require(eq != std::string_view::npos, ErrorCode::kParse,
          "sweep must look like m=1000,2000 or n=3,7");
  const std::string_view axis = spec.substr(0, eq);
  require(axis == "m" || axis == "n", ErrorCode::kParse,
          "sweep axis must be m or n, got '" + std::string(axis) + "'");
  std::vector<std::size_t> values;
  std::string_view rest = spec.substr(eq + 1);
  while (true) {
    const std::size_t comma = rest.find(',');
    values.push_back(parse_u64(rest.substr(0, comma), "sweep value"));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  (axis == "m" ? config.sweep_m : config.sweep_n) = std::move(values);
}

ExperimentConfig resolve_config(const std::optional<fs::path>& file,
                                const nlohmann::json& overrides, const char* env_seed) {
  nlohmann::json merged = ExperimentConfig{}.to_json();
  if (env_seed != nullptr && *env_seed != '\0') {
    merged["seed"] = parse_u64(env_seed, "SKEFL_SEED");
  }
  if (file) {
    std::ifstream in(*file);
    require(static_cast<bool>(in), ErrorCode::kConfiguration,
            "cannot open config " + file->string());
    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::kParse, file->string() + ": " + e.what());
    }
    merge_layer(merged, parsed, file->string());
  }
  merge_layer(merged, overrides, "overrides");
  ExperimentConfig config = ExperimentConfig::from_json(merged);
  config.validate();
  return config;
}

// ---------------------------------------------------------------------------
// Reports

void Report::check(bool condition, const std::string& what) {
  if (!condition) failures.push_back(what);
}

std::string Report::render() const {
  if (command == "bench") return csv;
  std::string out;
  for (const nlohmann::json& line : lines) out += line.dump() + "\n";
  return out;
}

nlohmann::json strip_timings(const nlohmann::json& j) {
  if (j.is_array()) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& v : j) out.push_back(strip_timings(v));
    return out;
  }
  if (!j.is_object()) return j;
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [key, value] : j.items()) {
    if (key.size() >= 3 && key.compare(key.size() - 3, 3, "_ms") == 0) continue;
    out[key] = strip_timings(value);
  }
  return out;
}

void write_report(const Report& report, const ExperimentConfig& config, const fs::path& dir) {
  fs::create_directories(dir);
  nlohmann::json cfg = config.to_json();
  write_text(dir / "config.json",
             nlohmann::json{{"config", cfg}, {"hash", config.hash()}}.dump(2) + "\n");
  const std::string name = report.command == "run" ? "rounds.jsonl"
                           : report.command == "bench" ? "bench.csv"
                                                       : report.command + ".json";
  write_text(dir / name, report.render());
  nlohmann::json summary = report.summary;
  summary["ok"] = report.ok();
  summary["failures"] = report.failures;
  write_text(dir / "summary.json", summary.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// run

Report cmd_run(const ExperimentConfig& c, const std::optional<fs::path>& out) {
  c.validate();
  require(c.m >= 2, ErrorCode::kConfiguration,
          "run trains a linear model with at least one feature: m >= 2");
  Report report;
  report.command = "run";

  fl::TaskParams tp;
  tp.clients = c.n;
  tp.dims = c.m - 1;
  tp.samples_per_client = c.samples_per_client;
  tp.test_samples = c.test_samples;
  tp.alpha = c.alpha;
  tp.seed = c.seed;
  const fl::SyntheticTask task = fl::make_task(tp);

  fl::TrainParams train;
  train.epochs = c.epochs;
  train.lr = c.lr;
  train.momentum = c.momentum;
  train.batch = c.batch;
  train.clip = c.v_max;

  const KeyPair keys = make_keys(c);
  const FixedPointCodec codec = make_codec(c, keys);
  const std::size_t k = c.participants();
  const double eps = c.epsilon();

  std::unique_ptr<Federation> standing;
  if (k == c.n) {
    standing = std::make_unique<Federation>(round_config(c.n, c.f, c.m, c.seed, true), keys, codec);
  }
  if (out) {
    fs::create_directories(*out / "transcripts");
    fs::create_directories(*out / "models");
  }

  std::vector<double> enc(c.m, 0.0);
  std::vector<double> plain(c.m, 0.0);
  double worst_oracle_diff = 0.0;
  double worst_traj = 0.0;
  std::string global_csv = "round,pipeline,index,weight\n";
  for (std::uint64_t r = 0; r < c.rounds; ++r) {
    const std::vector<ClientId> cohort = sample_cohort(c, r);
    std::unique_ptr<Federation> temp;
    Federation* fed = standing.get();
    if (fed == nullptr) {
      temp = std::make_unique<Federation>(round_config(k, c.f, c.m, c.seed, true), keys, codec);
      temp->set_next_round(r);
      fed = temp.get();
    }

    std::vector<ModelVector> enc_models;
    std::vector<ModelVector> plain_models;
    for (std::size_t j = 0; j < cohort.size(); ++j) {
      const fl::Dataset& data = task.clients[cohort[j] - 1];
      enc_models.push_back(fl::local_train(enc, data, cohort[j], r, train, c.seed));
      plain_models.push_back(fl::local_train(plain, data, cohort[j], r, train, c.seed));
      // Federation ids are cohort positions.
      enc_models.back().owner = plain_models.back().owner = static_cast<std::uint32_t>(j + 1);
    }

    const RoundResult result = fed->run_round(enc_models);
    const ModelVector oracle = fl::fedavg_oracle(enc_models);
    plain = fl::fedavg_oracle(plain_models).weights;
    enc = result.global_model;

    const double oracle_diff = max_abs_diff(enc, oracle.weights);
    const double traj = max_abs_diff(enc, plain);
    worst_oracle_diff = std::max(worst_oracle_diff, oracle_diff);
    worst_traj = std::max(worst_traj, traj);
    const double traj_tol = static_cast<double>(r + 1) * eps;

    nlohmann::json line = result.to_json();
    line["participants"] = cohort;
    line["epsilon"] = eps;
    line["oracle_max_abs_diff"] = oracle_diff;
    line["trajectory_max_abs_diff"] = traj;
    line["trajectory_tolerance"] = traj_tol;
    line["accuracy_encrypted"] = fl::accuracy(enc, task.test);
    line["accuracy_plaintext"] = fl::accuracy(plain, task.test);
    report.lines.push_back(std::move(line));

    const std::string tag = "round " + std::to_string(r);
    const protocol::MessageCounts expected{k * c.f, k, k};
    report.check(result.msg_counts == expected,
                 tag + ": message counts differ from (k f, k, k) with k = " + std::to_string(k));
    report.check(oracle_diff <= eps, tag + ": aggregate differs from the FedAvg oracle by " +
                                 std::to_string(oracle_diff) + " > epsilon");
    report.check(traj <= traj_tol, tag + ": encrypted trajectory drifted " +
                                       std::to_string(traj) + " from plaintext FedAvg");

    if (out) {
      const net::RoundTranscript t = fed->network().transcript(r);
      const std::string stem = "round_" + std::to_string(r);
      write_text(*out / "transcripts" / (stem + ".csv"), t.to_csv());
      write_text(*out / "transcripts" / (stem + ".json"), t.to_json().dump(2) + "\n");
      write_text(*out / "models" / (stem + ".csv"), fl::to_csv(enc_models));
    }
    for (std::size_t i = 0; i < c.m; ++i) {
      char row[128];
      std::snprintf(row, sizeof(row), "%llu,encrypted,%zu,%.17g\n",
                    static_cast<unsigned long long>(r), i, enc[i]);
      global_csv += row;
      std::snprintf(row, sizeof(row), "%llu,plaintext,%zu,%.17g\n",
                    static_cast<unsigned long long>(r), i, plain[i]);
      global_csv += row;
    }
  }
  if (out) write_text(*out / "global_models.csv", global_csv);

  report.summary = {{"command", "run"},
                    {"config", c.to_json()},
                    {"config_hash", c.hash()},
                    {"participants_per_round", k},
                    {"epsilon", eps},
                    {"max_oracle_diff", worst_oracle_diff},
                    {"max_trajectory_diff", worst_traj},
                    {"final_accuracy_encrypted", fl::accuracy(enc, task.test)},
                    {"final_accuracy_plaintext", fl::accuracy(plain, task.test)}};
  return report;
}

// ---------------------------------------------------------------------------
// attack

Report cmd_attack(const ExperimentConfig& c) {
  c.validate();
  Report report;
  report.command = "attack";

  adversary::GameConfig g;
  g.n = c.n;
  g.f = c.f;
  g.m = c.m;
  g.trials = c.trials;
  g.backend = c.backend;
  g.key_bits = c.key_bits;
  g.seed = c.seed;
  const adversary::GameResult game = adversary::distinguishing_game(g);

  adversary::GameConfig sanity_cfg = g;
  sanity_cfg.garbling = false;
  const adversary::GameResult sanity = adversary::distinguishing_game(sanity_cfg);

  nlohmann::json doc = game.to_json();
  doc["sanity"] = sanity.to_json();
  report.check(game.pass(), "distinguishing advantage " + std::to_string(game.advantage()) +
                                " exceeds the 4 sigma bound " + std::to_string(game.bound()));
  // Without sk the unprotected run is as opaque as the protected one, so the
  // sanity run only shows power when the coalition can decrypt.
  if (sanity_cfg.has_sk()) {
    report.check(sanity.accuracy() >= 0.99,
                 "no-garbling sanity accuracy " + std::to_string(sanity.accuracy()) + " < 0.99");
  }

  nlohmann::json recon = nlohmann::json::array();
  if (c.f >= 1 && c.n <= 7) {
    for (const auto& u : adversary::exhaustive_reconstruction(c.n, c.f, c.trials, c.seed)) {
      recon.push_back(u.to_json());
      std::string who;
      for (ClientId id : u.colluders) who += (who.empty() ? "" : ",") + std::to_string(id);
      report.check(u.exact_recoveries == 0, "coalition {" + who + "} recovered the victim model");
      report.check(u.pass(), "coalition {" + who + "} residual not uniform, p = " +
                                 std::to_string(u.p_value));
    }
  }
  doc["reconstruction"] = recon;
  report.lines.push_back(doc);
  report.summary = {{"command", "attack"},
                    {"config", c.to_json()},
                    {"config_hash", c.hash()},
                    {"accuracy", game.accuracy()},
                    {"advantage", game.advantage()},
                    {"bound", game.bound()},
                    {"sanity_accuracy", sanity.accuracy()},
                    {"coalitions_tested", recon.size()}};
  return report;
}

// ---------------------------------------------------------------------------
// verify

Report cmd_verify(const ExperimentConfig& c) {
  c.validate();
  Report report;
  report.command = "verify";

  const KeyPair keys = make_keys(c);
  const FixedPointCodec codec = make_codec(c, keys);
  Federation fed(round_config(c.n, c.f, c.m, c.seed, false), keys, codec);
  Rng rng = Rng::derive(c.seed, "task/verify");
  const std::vector<ModelVector> models = random_models(c.n, c.m, rng);
  fed.run_round(models);

  const crypto::PublicKey& pk = *keys.pk;
  nlohmann::json matrix = nlohmann::json::array();
  std::uint64_t cases = 0;
  auto record = [&](ClientId owner, ClientId verifier, const std::string& scenario,
                    bool expected, bool verdict, nlohmann::json extra) {
    ++cases;
    nlohmann::json row = {{"owner", owner},       {"verifier", verifier},
                          {"scenario", scenario}, {"expected", expected ? 1 : 0},
                          {"verdict", verdict ? 1 : 0}, {"pass", expected == verdict}};
    row.update(extra);
    matrix.push_back(std::move(row));
    report.check(expected == verdict, scenario + " for owner " + std::to_string(owner) +
                                          ": verdict " + std::to_string(verdict ? 1 : 0));
  };
  // Verification traffic generated by one collect_shares call.
  auto collect = [&](ClientId owner, ClientId verifier, std::uint64_t round,
                     std::uint64_t& requests, std::uint64_t& responses) {
    const net::RoundTranscript before = fed.network().transcript(round);
    std::vector<Bytes> payloads = fed.collect_shares(owner, verifier, round);
    const net::RoundTranscript after = fed.network().transcript(round);
    requests = kind_count(after, MessageKind::kVerifyRequest) -
               kind_count(before, MessageKind::kVerifyRequest);
    responses = kind_count(after, MessageKind::kVerifyResponse) -
                kind_count(before, MessageKind::kVerifyResponse);
    return payloads;
  };

  for (ClientId owner = 1; owner <= c.n; ++owner) {
    const atss::ShareSet& set = fed.client(owner).own_shares(0);
    // A holder verifies; the owner's own pick when f = 0.
    const ClientId verifier = set.recipients.front();
    std::uint64_t requests = 0;
    std::uint64_t responses = 0;
    const std::vector<Bytes> honest = collect(owner, verifier, 0, requests, responses);
    const atss::ShareDigest digest = fed.published_digest(owner, 0);

    record(owner, verifier, "honest", true, atss::verify_serialized(pk, digest, honest),
           {{"requests", requests}, {"responses", responses}});
    report.check(requests == c.f && responses == c.f,
                 "verification of owner " + std::to_string(owner) + " cost " +
                     std::to_string(requests) + " requests and " + std::to_string(responses) +
                     " responses, expected f each");

    std::vector<Bytes> flipped = honest;
    Bytes& victim = flipped[rng.below(flipped.size())];
    const std::size_t byte = rng.below(victim.size());
    const unsigned bit = static_cast<unsigned>(rng.below(8));
    victim[byte] ^= static_cast<std::uint8_t>(1U << bit);
    record(owner, verifier, "bit_flip", false, atss::verify_serialized(pk, digest, flipped),
           {{"byte", byte}, {"bit", bit}});

    std::vector<Bytes> missing = honest;
    const std::size_t dropped = rng.below(missing.size());
    missing.erase(missing.begin() + static_cast<std::ptrdiff_t>(dropped));
    record(owner, verifier, "missing_share", false,
           atss::verify_serialized(pk, digest, missing), {{"dropped", dropped}});

    if (c.n >= 2) {
      const ClientId other = owner % c.n + 1;
      record(owner, verifier, "wrong_owner_digest", false,
             atss::verify_serialized(pk, fed.published_digest(other, 0), honest),
             {{"digest_owner", other}});
    }

    if (c.f >= 1) {
      const atss::ShareSet& fresh = fed.resplit(owner, owner, 0, 1);
      const ClientId verifier1 = fresh.recipients.front();
      std::uint64_t req1 = 0;
      std::uint64_t resp1 = 0;
      const std::vector<Bytes> renewed = collect(owner, verifier1, 1, req1, resp1);
      const atss::ShareDigest digest1 = fed.published_digest(owner, 1);
      record(owner, verifier1, "resplit_honest", true,
             atss::verify_serialized(pk, digest1, renewed),
             {{"requests", req1}, {"responses", resp1}});
      std::vector<Bytes> mixed = renewed;
      mixed.front() = honest.front();
      record(owner, verifier1, "stale_round_mix", false,
             atss::verify_serialized(pk, digest1, mixed), nlohmann::json::object());
    }
  }

  report.lines.push_back({{"config_hash", c.hash()}, {"cases", cases}, {"matrix", matrix}});
  report.summary = {{"command", "verify"},
                    {"config", c.to_json()},
                    {"config_hash", c.hash()},
                    {"cases", cases}};
  return report;
}

// ---------------------------------------------------------------------------
// bench

namespace {

struct BenchRow {
  std::string op;
  char sweep = 'm';
  std::size_t n = 0;
  std::size_t f = 0;
  std::size_t m = 0;
  double median_ms = 0.0;
  std::optional<std::uint64_t> public_ops;
  std::optional<double> ratio_prev;  // vs the previous sweep point
  std::optional<double> overhead;    // encrypted over plaintext round time
};

std::string format_optional(const std::optional<double>& v) {
  if (!v) return "";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", *v);
  return buf;
}

bool doubled(std::size_t from, std::size_t to) { return to == 2 * from || to == 2 * from + 1; }

struct PointTimings {
  double split = 0, merge = 0, dist = 0, aggr = 0, round_enc = 0, round_plain = 0;
  std::uint64_t ops = 0;
};

PointTimings time_point(const ExperimentConfig& c, const KeyPair& keys,
                        const FixedPointCodec& codec, std::size_t n, std::size_t f,
                        std::size_t m) {
  const crypto::PublicKey& pk = *keys.pk;
  PointTimings t;
  const std::size_t reps = c.repetitions;

  Rng ctv_rng = Rng::derive(c.seed, "bench/ctv", n, m);
  CiphertextVector ctv;
  ctv.reserve(m);
  for (std::size_t i = 0; i < m; ++i) ctv.push_back(pk.encrypt_random(ctv_rng));
  Rng split_rng = Rng::derive(c.seed, "bench/split", n, m);
  atss::ShareSet set;
  t.split = median_ms(reps, nullptr, [&] {
    set = atss::split(pk, ctv, atss::SplitParams{1, 0, n, f}, split_rng);
  });
  t.merge = median_ms(reps, nullptr, [&] { (void)atss::merge(pk, set.shares); });

  Rng model_rng = Rng::derive(c.seed, "bench/models", n, m);
  const std::vector<ModelVector> models = random_models(n, m, model_rng);
  const std::uint64_t total = total_samples(models);
  const RoundConfig rc = round_config(n, f, m, c.seed, true);

  std::unique_ptr<Federation> scratch;
  t.dist = median_ms(
      reps, [&] { scratch = std::make_unique<Federation>(rc, keys, codec); },
      [&] { scratch->client(1).distribute(0, models[0], total, scratch->network()); });

  // Round time including local training, against plain FedAvg on the same
  // training work.
  fl::TaskParams tp;
  tp.clients = n;
  tp.dims = m > 1 ? m - 1 : 1;
  tp.samples_per_client = c.samples_per_client;
  tp.test_samples = 1;
  tp.seed = c.seed;
  const fl::SyntheticTask task = fl::make_task(tp);
  fl::TrainParams train;
  train.epochs = c.epochs;
  train.lr = c.lr;
  train.momentum = c.momentum;
  train.batch = c.batch;
  train.clip = c.v_max;
  const std::vector<double> start(tp.dims + 1, 0.0);
  auto train_all = [&] {
    std::vector<ModelVector> trained;
    for (std::size_t i = 0; i < n; ++i) {
      trained.push_back(fl::local_train(start, task.clients[i], static_cast<std::uint32_t>(i + 1),
                                        0, train, c.seed));
      trained.back().weights.resize(m);
    }
    return trained;
  };

  Federation fed(rc, keys, codec);
  t.round_enc = median_ms(reps, nullptr, [&] {
    const std::vector<ModelVector> trained = train_all();
    t.ops = fed.run_round(trained).ops.public_ops();
  });
  t.round_plain = median_ms(reps, nullptr, [&] { (void)fl::fedavg_oracle(train_all()); });
  const std::uint64_t last = fed.next_round() - 1;
  t.aggr = median_ms(reps, nullptr, [&] { (void)fed.server().aggregate(last); });
  return t;
}

}  // namespace

Report cmd_bench(const ExperimentConfig& c) {
  c.validate();
  Report report;
  report.command = "bench";
  const KeyPair keys = make_keys(c);
  const FixedPointCodec codec = make_codec(c, keys);

  std::vector<BenchRow> rows;
  nlohmann::json split_ratios = nlohmann::json::array();
  nlohmann::json ops_ratios = nlohmann::json::array();
  auto add_point = [&](char sweep, std::size_t n, std::size_t f, std::size_t m,
                       const PointTimings& t, const PointTimings* prev) {
    auto row = [&](const std::string& op, double ms) {
      BenchRow r;
      r.op = op;
      r.sweep = sweep;
      r.n = n;
      r.f = f;
      r.m = m;
      r.median_ms = ms;
      return r;
    };
    BenchRow split = row("atss_split", t.split);
    if (prev != nullptr) split.ratio_prev = t.split / prev->split;
    rows.push_back(split);
    rows.push_back(row("atss_merge", t.merge));
    rows.push_back(row("skefl_dist", t.dist));
    rows.push_back(row("skefl_aggr", t.aggr));
    rows.push_back(row("round_plaintext", t.round_plain));
    BenchRow round = row("round_encrypted", t.round_enc);
    round.public_ops = t.ops;
    round.overhead = t.round_enc / t.round_plain;
    if (prev != nullptr) round.ratio_prev = static_cast<double>(t.ops) / prev->ops;
    rows.push_back(round);
  };

  std::optional<PointTimings> prev;
  std::size_t prev_m = 0;
  for (std::size_t m : c.sweep_m) {
    const PointTimings t = time_point(c, keys, codec, c.n, c.f, m);
    add_point('m', c.n, c.f, m, t, prev ? &*prev : nullptr);
    if (prev && m == 2 * prev_m) {
      const double ratio = t.split / prev->split;
      split_ratios.push_back({{"from", prev_m}, {"to", m}, {"ratio", ratio}});
      report.check(ratio >= 1.5 && ratio <= 2.5,
                   "atss_split time ratio " + std::to_string(ratio) + " for m " +
                       std::to_string(prev_m) + " -> " + std::to_string(m) +
                       " outside [1.5, 2.5]");
    }
    prev = t;
    prev_m = m;
  }

  prev.reset();
  std::size_t prev_n = 0;
  for (std::size_t n : c.sweep_n) {
    const std::size_t f = (n - 1) / 2;
    const PointTimings t = time_point(c, keys, codec, n, f, c.m);
    add_point('n', n, f, c.m, t, prev ? &*prev : nullptr);
    if (prev && doubled(prev_n, n)) {
      const double ratio = static_cast<double>(t.ops) / prev->ops;
      ops_ratios.push_back({{"from", prev_n}, {"to", n}, {"ratio", ratio}});
      report.check(ratio >= 3.0 && ratio <= 5.0,
                   "homomorphic op ratio " + std::to_string(ratio) + " for n " +
                       std::to_string(prev_n) + " -> " + std::to_string(n) +
                       " outside [3, 5]");
    }
    prev = t;
    prev_n = n;
  }

  std::ostringstream csv;
  csv << "op,sweep,backend,n,f,m,reps,median_ms,public_ops,ratio_prev,overhead\n";
  for (const BenchRow& r : rows) {
    char ms[64];
    std::snprintf(ms, sizeof(ms), "%.6f", r.median_ms);
    csv << r.op << ',' << r.sweep << ',' << crypto::to_string(c.backend) << ',' << r.n << ','
        << r.f << ',' << r.m << ',' << c.repetitions << ',' << ms << ','
        << (r.public_ops ? std::to_string(*r.public_ops) : "") << ','
        << format_optional(r.ratio_prev) << ',' << format_optional(r.overhead) << '\n';
  }
  report.csv = csv.str();
  report.summary = {{"command", "bench"},
                    {"config", c.to_json()},
                    {"config_hash", c.hash()},
                    {"split_ratios", split_ratios},
                    {"op_ratios", ops_ratios}};
  return report;
}

}  // namespace skefl::experiment
