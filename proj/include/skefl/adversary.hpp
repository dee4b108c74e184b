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

#ifndef SKEFL_ADVERSARY_HPP_
#define SKEFL_ADVERSARY_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nlohmann/json.hpp"
#include "skefl/crypto/backend.hpp"
#include "skefl/crypto/codec.hpp"
#include "skefl/crypto/keys.hpp"
#include "skefl/sim_net.hpp"

// Semi-honest coalitions of the server and up to f clients: what they
// observe, what they can reconstruct from it, and how well they distinguish
// two candidate models.
namespace skefl::adversary {

using ClientId = std::uint32_t;

struct AdversaryView {
  std::set<ClientId> colluders;
  std::optional<ClientId> victim;
  // Everything the server sends or receives, plus the bulletin board.
  std::vector<net::Message> server_view;
  // Everything sent to or from a colluding client (that the server did not
  // already see).
  std::vector<net::Message> client_views;
  // Colluders share the single secret key; a server-only coalition has none.
  std::shared_ptr<const crypto::SecretKey> sk;
  // Harness-only cheat: the victim's self-kept share, which no honest run
  // ever exposes.
  std::optional<crypto::CiphertextVector> granted_self_share;

  // Share messages authored by `owner` that the coalition observed.
  std::vector<crypto::CiphertextVector> shares_from(ClientId owner,
                                                    const crypto::PublicKey& pk) const;
};

// Throws kInvalidGame when the victim is a colluder or the server id is
// listed as a colluder.
AdversaryView collect_view(const net::RoundTranscript& transcript,
                           const std::set<ClientId>& colluders,
                           std::optional<ClientId> victim,
                           std::shared_ptr<const crypto::SecretKey> sk);

struct ReconstructionOutcome {
  std::size_t shares_used = 0;
  std::vector<BigInt> recovered;  // ring elements; empty if no share was seen
  std::vector<BigInt> residual;   // recovered - truth mod M
  bool exact = false;             // recovered == truth
  double max_abs_residual = 0.0;  // decoded (scale S^2), real units

  nlohmann::json to_json() const;
};

// Merges every victim share in the view (plus the granted self share, if
// any) and decrypts. `truth` is the victim's weighted plaintext vector.
ReconstructionOutcome reconstruction_attack(const AdversaryView& view, ClientId victim,
                                            const crypto::PublicKey& pk,
                                            const crypto::FixedPointCodec& codec,
                                            const std::vector<BigInt>& truth);

// Pearson chi-square of `counts` against the uniform distribution; returns
// the upper-tail p-value.
double chi_square_uniform_p(const std::vector<std::uint64_t>& counts, double* statistic = nullptr);

struct UniformityResult {
  std::size_t n = 0;
  std::size_t f = 0;
  std::set<ClientId> colluders;
  std::uint64_t rounds = 0;   // protocol rounds run
  std::uint64_t samples = 0;  // rounds in which the coalition saw >= 1 victim share
  std::uint64_t exact_recoveries = 0;
  std::array<std::uint64_t, 8> buckets{};  // low three bits of the recovery
  double chi2 = 0.0;
  double p_value = 0.0;

  bool pass(double alpha = 0.01) const { return exact_recoveries == 0 && p_value > alpha; }
  nlohmann::json to_json() const;
};

// Runs full mock-backend rounds (victim = client 1, m = 1) until the
// coalition has seen at least one victim share in `samples` rounds, and tests
// the recovered plaintexts for uniformity.
UniformityResult reconstruction_uniformity(std::size_t n, std::size_t f,
                                           const std::set<ClientId>& colluders,
                                           std::uint64_t samples, std::uint64_t seed);

// Every f-subset of {2..n} as the coalition.
std::vector<UniformityResult> exhaustive_reconstruction(std::size_t n, std::size_t f,
                                                        std::uint64_t samples,
                                                        std::uint64_t seed);

struct GameConfig {
  std::size_t n = 3;
  std::size_t f = 1;
  std::size_t m = 4;
  std::uint64_t trials = 10000;
  bool garbling = true;
  crypto::BackendKind backend = crypto::BackendKind::kMock;
  std::size_t key_bits = 1024;
  std::uint64_t seed = 1;
  // Candidate models; generated from the seed when empty.
  std::vector<double> w_a;
  std::vector<double> w_b;
  // The coalition holds sk unless it is the server alone (f = 0).
  std::optional<bool> adversary_has_sk;

  bool has_sk() const { return adversary_has_sk.value_or(f > 0); }
  nlohmann::json to_json() const;
};

struct GameResult {
  GameConfig config;
  std::uint64_t trials = 0;
  std::uint64_t correct = 0;
  std::uint64_t decided = 0;  // trials where the view settled the guess
  std::uint64_t decided_correct = 0;
  std::vector<std::uint8_t> guesses;  // o per trial, 1 = W_a, 2 = W_b

  double accuracy() const;
  double advantage() const;
  // 4 sigma of a fair coin over `trials` draws: 4 / (2 sqrt(T)).
  double bound() const;
  bool pass() const { return advantage() <= bound(); }
  nlohmann::json to_json() const;
};

// Per trial a fair coin picks which of W_a, W_b the victim (client 1)
// trains. With n >= 2 an honest partner (client 2, same sample count) trains
// the other one, so the global model is the same under both outcomes and
// only the protocol messages can tell them apart. Remaining honest clients
// train fixed models known to the adversary; the colluders are the f
// highest-indexed clients. The adversary guesses by maximum likelihood over
// its view; see the implementation for the exact strategy. Throws
// kInvalidGame if W_a == W_b.
GameResult distinguishing_game(const GameConfig& config);

}  // namespace skefl::adversary

#endif  // SKEFL_ADVERSARY_HPP_
