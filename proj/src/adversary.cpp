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

#include "skefl/adversary.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <map>
#include <string>

#include "skefl/crypto/mock.hpp"
#include "skefl/error.hpp"
#include "skefl/protocol.hpp"

namespace skefl::adversary {

using crypto::CiphertextVector;
using net::Message;
using net::MessageKind;

namespace {

std::vector<BigInt> ring_add(const std::vector<BigInt>& a, const std::vector<BigInt>& b,
                             const BigInt& modulus) {
  std::vector<BigInt> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = (a[k] + b[k]) % modulus;
  return out;
}

std::vector<BigInt> ring_sub(const std::vector<BigInt>& a, const std::vector<BigInt>& b,
                             const BigInt& modulus) {
  std::vector<BigInt> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    out[k] = (a[k] - b[k]) % modulus;
    if (sgn(out[k]) < 0) out[k] += modulus;
  }
  return out;
}

std::vector<BigInt> ring_zero(std::size_t m) { return std::vector<BigInt>(m, BigInt(0)); }

double centered_real(const BigInt& value, const BigInt& modulus, double divisor) {
  BigInt lifted = value;
  if (lifted > modulus / 2) lifted -= modulus;
  return lifted.get_d() / divisor;
}

}  // namespace

std::vector<CiphertextVector> AdversaryView::shares_from(ClientId owner,
                                                         const crypto::PublicKey& pk) const {
  std::vector<CiphertextVector> out;
  for (const auto* list : {&server_view, &client_views}) {
    for (const Message& msg : *list) {
      if (msg.kind == MessageKind::kShare && msg.sender == owner) {
        out.push_back(pk.deserialize_vector(msg.payload));
      }
    }
  }
  return out;
}

AdversaryView collect_view(const net::RoundTranscript& transcript,
                           const std::set<ClientId>& colluders,
                           std::optional<ClientId> victim,
                           std::shared_ptr<const crypto::SecretKey> sk) {
  for (ClientId c : colluders) {
    require(net::is_client(c), ErrorCode::kInvalidGame,
            "only clients can be listed as colluders");
  }
  if (victim) {
    require(colluders.count(*victim) == 0, ErrorCode::kInvalidGame,
            "victim " + std::to_string(*victim) + " cannot be a colluder");
  }
  AdversaryView view;
  view.colluders = colluders;
  view.victim = victim;
  view.sk = std::move(sk);
  for (const Message& msg : transcript.messages) {
    if (msg.sender == net::kServer || msg.receiver == net::kServer ||
        msg.receiver == net::kBulletin) {
      view.server_view.push_back(msg);
    } else if (colluders.count(msg.sender) != 0 || colluders.count(msg.receiver) != 0) {
      view.client_views.push_back(msg);
    }
  }
  return view;
}

nlohmann::json ReconstructionOutcome::to_json() const {
  return {{"shares_used", shares_used},
          {"exact", exact},
          {"max_abs_residual", max_abs_residual}};
}

ReconstructionOutcome reconstruction_attack(const AdversaryView& view, ClientId victim,
                                            const crypto::PublicKey& pk,
                                            const crypto::FixedPointCodec& codec,
                                            const std::vector<BigInt>& truth) {
  ReconstructionOutcome out;
  std::vector<CiphertextVector> shares = view.shares_from(victim, pk);
  if (view.granted_self_share) shares.push_back(*view.granted_self_share);
  out.shares_used = shares.size();
  if (shares.empty() || !view.sk) return out;
  const CiphertextVector merged = atss::merge(pk, shares);
  out.recovered = crypto::decrypt_vector(*view.sk, merged);
  require(out.recovered.size() == truth.size(), ErrorCode::kLengthMismatch,
          "truth vector has the wrong length");
  out.residual = ring_sub(out.recovered, truth, codec.modulus());
  out.exact = true;
  const double s = static_cast<double>(codec.scale());
  for (const BigInt& r : out.residual) {
    out.exact = out.exact && sgn(r) == 0;
    out.max_abs_residual =
        std::max(out.max_abs_residual, std::fabs(centered_real(r, codec.modulus(), s * s)));
  }
  return out;
}

double chi_square_uniform_p(const std::vector<std::uint64_t>& counts, double* statistic) {
  require(counts.size() >= 2, ErrorCode::kConfiguration, "chi-square needs >= 2 buckets");
  std::uint64_t total = 0;
  for (std::uint64_t c : counts) total += c;
  require(total > 0, ErrorCode::kConfiguration, "chi-square of an empty sample");
  const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
  double stat = 0.0;
  for (std::uint64_t c : counts) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  if (statistic) *statistic = stat;
  const boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

nlohmann::json UniformityResult::to_json() const {
  return {{"n", n},
          {"f", f},
          {"colluders", colluders},
          {"rounds", rounds},
          {"samples", samples},
          {"exact_recoveries", exact_recoveries},
          {"buckets", buckets},
          {"chi2", chi2},
          {"p_value", p_value},
          {"pass", pass()}};
}

UniformityResult reconstruction_uniformity(std::size_t n, std::size_t f,
                                           const std::set<ClientId>& colluders,
                                           std::uint64_t samples, std::uint64_t seed) {
  require(colluders.size() <= f, ErrorCode::kInvalidGame,
          "coalition larger than the collusion bound f");
  require(!colluders.empty(), ErrorCode::kInvalidGame,
          "a coalition without clients never observes a share");
  const crypto::KeyPair keys = crypto::mock_keygen(crypto::default_mock_modulus());
  const crypto::FixedPointCodec codec(crypto::FixedPointCodec::kDefaultScale,
                                      keys.pk->plaintext_modulus());
  UniformityResult result;
  result.n = n;
  result.f = f;
  result.colluders = colluders;
  Rng rng = Rng::derive(seed, "recon", n, f);
  while (result.samples < samples) {
    protocol::RoundConfig config;
    config.n = n;
    config.f = f;
    config.m = 1;
    config.seed = rng.next_u64();
    config.decrypt_global = false;
    std::vector<fl::ModelVector> models(n);
    for (std::size_t i = 0; i < n; ++i) {
      models[i] = fl::ModelVector{{2.0 * rng.uniform() - 1.0},
                                  static_cast<std::uint32_t>(i + 1), 100};
    }
    protocol::Federation fed(config, keys, codec);
    fed.run_round(models);
    ++result.rounds;
    const AdversaryView view =
        collect_view(fed.network().transcript(0), colluders, ClientId{1}, keys.sk);
    const std::vector<BigInt> truth =
        crypto::decrypt_vector(*keys.sk, fed.client(1).weighted_vector(0));
    const ReconstructionOutcome outcome =
        reconstruction_attack(view, 1, *keys.pk, codec, truth);
    if (outcome.shares_used == 0) continue;
    ++result.samples;
    result.exact_recoveries += outcome.exact ? 1 : 0;
    ++result.buckets[mpz_get_ui(outcome.recovered[0].get_mpz_t()) & 7U];
  }
  result.p_value = chi_square_uniform_p(
      std::vector<std::uint64_t>(result.buckets.begin(), result.buckets.end()), &result.chi2);
  return result;
}

std::vector<UniformityResult> exhaustive_reconstruction(std::size_t n, std::size_t f,
                                                        std::uint64_t samples,
                                                        std::uint64_t seed) {
  std::vector<UniformityResult> out;
  if (f == 0) return out;  // no client can collude
  const std::size_t others = n - 1;
  // Bitmask over clients 2..n; keep masks with exactly f bits.
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << others); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) != f) continue;
    std::set<ClientId> colluders;
    for (std::size_t b = 0; b < others; ++b) {
      if ((mask >> b) & 1U) colluders.insert(static_cast<ClientId>(b + 2));
    }
    out.push_back(reconstruction_uniformity(n, f, colluders, samples, seed + mask));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Distinguishing game

nlohmann::json GameConfig::to_json() const {
  return {{"n", n},
          {"f", f},
          {"m", m},
          {"trials", trials},
          {"garbling", garbling},
          {"backend", crypto::to_string(backend)},
          {"key_bits", key_bits},
          {"seed", seed},
          {"adversary_has_sk", has_sk()}};
}

double GameResult::accuracy() const {
  return trials == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(trials);
}

double GameResult::advantage() const { return std::fabs(accuracy() - 0.5); }

double GameResult::bound() const {
  return trials == 0 ? 0.0 : 4.0 / (2.0 * std::sqrt(static_cast<double>(trials)));
}

nlohmann::json GameResult::to_json() const {
  return {{"config", config.to_json()},
          {"T", trials},
          {"accuracy", accuracy()},
          {"advantage", advantage()},
          {"bound", bound()},
          {"decided", decided},
          {"decided_correct", decided_correct},
          {"pass", pass()}};
}

namespace {

// Everything the coalition knows before the round starts: the public
// setup, every model except the victim/partner pair, and the two
// candidates.
struct GameSetup {
  GameConfig config;
  crypto::KeyPair keys;
  std::unique_ptr<crypto::FixedPointCodec> codec;
  std::set<ClientId> colluders;
  std::vector<ClientId> honest;
  std::vector<std::vector<double>> fixed_models;  // index i for client i + 1
  // expected[h][i]: weight_i * encode(model_i) under hypothesis h.
  std::array<std::vector<std::vector<BigInt>>, 2> expected;

  static constexpr std::uint64_t kSamples = 100;

  const std::vector<double>& model_of(ClientId c, int h) const {
    if (c == 1) return h == 0 ? config.w_a : config.w_b;
    if (c == 2 && config.n >= 2) return h == 0 ? config.w_b : config.w_a;
    return fixed_models[c - 1];
  }
};

std::vector<BigInt> weighted_plaintext(const std::vector<double>& model, const BigInt& weight,
                                       const crypto::FixedPointCodec& codec) {
  std::vector<BigInt> out = codec.encode(model);
  for (BigInt& v : out) v = v * weight % codec.modulus();
  return out;
}

std::vector<BigInt> sum_decrypted(const std::vector<Message>& msgs,
                                  const crypto::SecretKey& sk, const crypto::PublicKey& pk,
                                  std::size_t m, const BigInt& modulus) {
  std::vector<BigInt> acc = ring_zero(m);
  for (const Message& msg : msgs) {
    acc = ring_add(acc, crypto::decrypt_vector(sk, pk.deserialize_vector(msg.payload)), modulus);
  }
  return acc;
}

// Maximum likelihood with the secret key. Three sources of evidence:
//  1. The victim's shares the coalition saw. Their sum matches a candidate
//     only if every share was seen (no garbling, or a leaked self share).
//  2. Garbled sums of honest clients. With sk the coalition decrypts each
//     honest client's garbled sum and strips the shares it sent there; for
//     any set H of honest clients that trade shares only among themselves
//     (and with the coalition), sum_{j in H} of what is left plus the
//     shares H sent to the coalition equals sum_{i in H} weighted W_i. The
//     coalition cannot see which sets are closed, so it tries them all; an
//     open set matches a candidate only by a ring collision.
//  3. Otherwise a coin.
std::optional<int> guess_with_key(const GameSetup& s, const AdversaryView& view) {
  const crypto::PublicKey& pk = *s.keys.pk;
  const crypto::SecretKey& sk = *view.sk;
  const BigInt& modulus = s.codec->modulus();
  const std::size_t m = s.config.m;

  std::vector<Message> victim_shares;
  for (const auto* list : {&view.server_view, &view.client_views}) {
    for (const Message& msg : *list) {
      if (msg.kind == MessageKind::kShare && msg.sender == 1) victim_shares.push_back(msg);
    }
  }
  if (!victim_shares.empty()) {
    const std::vector<BigInt> sum = sum_decrypted(victim_shares, sk, pk, m, modulus);
    const bool h0 = sum == s.expected[0][0];
    const bool h1 = sum == s.expected[1][0];
    if (h0 != h1) return h0 ? 0 : 1;
  }

  std::map<ClientId, std::vector<BigInt>> residue;  // Y_j + c_j per honest j
  for (ClientId j : s.honest) residue[j] = ring_zero(m);
  bool have_garbled = false;
  for (const Message& msg : view.server_view) {
    if (msg.kind != MessageKind::kGarbled || residue.count(msg.sender) == 0) continue;
    have_garbled = true;
    residue[msg.sender] = ring_add(
        residue[msg.sender], crypto::decrypt_vector(sk, pk.deserialize_vector(msg.payload)),
        modulus);
  }
  if (!have_garbled) return std::nullopt;
  for (const Message& msg : view.client_views) {
    if (msg.kind != MessageKind::kShare) continue;
    const std::vector<BigInt> plain =
        crypto::decrypt_vector(sk, pk.deserialize_vector(msg.payload));
    if (view.colluders.count(msg.sender) != 0 && residue.count(msg.receiver) != 0) {
      residue[msg.receiver] = ring_sub(residue[msg.receiver], plain, modulus);
    } else if (residue.count(msg.sender) != 0 && view.colluders.count(msg.receiver) != 0) {
      residue[msg.sender] = ring_add(residue[msg.sender], plain, modulus);
    }
  }

  const std::size_t h = s.honest.size();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << h); ++mask) {
    bool has_victim = false;
    bool has_partner = false;
    std::vector<BigInt> observed = ring_zero(m);
    std::array<std::vector<BigInt>, 2> predicted{ring_zero(m), ring_zero(m)};
    for (std::size_t b = 0; b < h; ++b) {
      if (((mask >> b) & 1U) == 0) continue;
      const ClientId j = s.honest[b];
      has_victim = has_victim || j == 1;
      has_partner = has_partner || (j == 2 && s.config.n >= 2);
      observed = ring_add(observed, residue[j], modulus);
      for (int hyp = 0; hyp < 2; ++hyp) {
        predicted[hyp] = ring_add(predicted[hyp], s.expected[hyp][j - 1], modulus);
      }
    }
    if (has_victim == has_partner) continue;  // no information about the coin
    const bool h0 = observed == predicted[0];
    const bool h1 = observed == predicted[1];
    if (h0 != h1) return h0 ? 0 : 1;
  }
  return std::nullopt;
}

// Without the key: a naive Bayes classifier over cheap ciphertext features
// (Jacobi symbol modulo N for Paillier, low bits), trained on chosen
// plaintexts encrypted under pk exactly as the victim would.
class FeatureClassifier {
 public:
  FeatureClassifier(const GameSetup& s, std::uint64_t training) : setup_(s) {
    Rng rng = Rng::derive(s.config.seed, "game/train");
    const crypto::PublicKey& pk = *s.keys.pk;
    const std::uint64_t total = s.config.n * GameSetup::kSamples;
    const BigInt weight = protocol::fedavg_weight(GameSetup::kSamples, total, *s.codec);
    for (int h = 0; h < 2; ++h) {
      const std::vector<BigInt> plain = s.codec->encode(s.model_of(1, h));
      for (std::uint64_t t = 0; t < training; ++t) {
        const CiphertextVector c = crypto::scalar_mul_vector(
            pk, crypto::encrypt_vector(pk, plain, rng), weight);
        for (std::size_t k = 0; k < c.size(); ++k) ++counts_[h][k][feature(c[k])];
      }
    }
  }

  std::optional<int> guess(const CiphertextVector& c) const {
    double llr = 0.0;
    for (std::size_t k = 0; k < c.size() && k < counts_[0].size(); ++k) {
      const std::size_t f = feature(c[k]);
      llr += std::log((counts_[0][k][f] + 1.0) / (counts_[1][k][f] + 1.0));
    }
    if (llr > 0) return 0;
    if (llr < 0) return 1;
    return std::nullopt;
  }

 private:
  static constexpr std::size_t kFeatures = 8;

  std::size_t feature(const crypto::Ciphertext& c) const {
    const auto low = static_cast<std::size_t>(mpz_get_ui(c.value().get_mpz_t()));
    if (c.backend() != crypto::BackendId::kPaillier) return low & 7U;
    const BigInt& n = setup_.keys.pk->plaintext_modulus();
    const BigInt reduced = c.value() % n;
    const int jacobi = mpz_jacobi(reduced.get_mpz_t(), n.get_mpz_t());
    return static_cast<std::size_t>(jacobi + 1) * 2 + (low & 1U);  // {0,2,4} + bit
  }

  const GameSetup& setup_;
  std::array<std::vector<std::array<double, kFeatures>>, 2> counts_{
      std::vector<std::array<double, kFeatures>>(setup_.config.m,
                                                 std::array<double, kFeatures>{}),
      std::vector<std::array<double, kFeatures>>(setup_.config.m,
                                                 std::array<double, kFeatures>{})};
};

std::vector<double> random_model(std::size_t m, Rng& rng) {
  std::vector<double> w(m);
  for (double& v : w) v = 2.0 * rng.uniform() - 1.0;
  return w;
}

}  // namespace

GameResult distinguishing_game(const GameConfig& input) {
  GameSetup s;
  s.config = input;
  GameConfig& config = s.config;
  protocol::RoundConfig round;
  round.n = config.n;
  round.f = config.f;
  round.m = config.m;
  round.garbling = config.garbling;
  round.decrypt_global = false;
  round.validate();
  Rng model_rng = Rng::derive(config.seed, "game/models");
  if (config.w_a.empty()) config.w_a = random_model(config.m, model_rng);
  if (config.w_b.empty()) config.w_b = random_model(config.m, model_rng);
  require(config.w_a.size() == config.m && config.w_b.size() == config.m,
          ErrorCode::kInvalidGame, "candidate models must have length m");
  require(config.w_a != config.w_b, ErrorCode::kInvalidGame,
          "candidate models must differ");

  s.keys = crypto::keygen(config.backend, config.key_bits, config.seed);
  s.codec = std::make_unique<crypto::FixedPointCodec>(crypto::FixedPointCodec::kDefaultScale,
                                                      s.keys.pk->plaintext_modulus());
  for (std::size_t c = config.n - config.f + 1; c <= config.n; ++c) {
    s.colluders.insert(static_cast<ClientId>(c));
  }
  for (ClientId c = 1; c <= config.n; ++c) {
    if (s.colluders.count(c) == 0) s.honest.push_back(c);
    s.fixed_models.push_back(random_model(config.m, model_rng));
  }
  const std::uint64_t total = config.n * GameSetup::kSamples;
  const BigInt weight = protocol::fedavg_weight(GameSetup::kSamples, total, *s.codec);
  for (int h = 0; h < 2; ++h) {
    for (ClientId c = 1; c <= config.n; ++c) {
      s.expected[h].push_back(weighted_plaintext(s.model_of(c, h), weight, *s.codec));
    }
  }
  std::unique_ptr<FeatureClassifier> classifier;
  if (!config.has_sk()) classifier = std::make_unique<FeatureClassifier>(s, 2000);

  GameResult result;
  result.config = config;
  result.guesses.reserve(config.trials);
  for (std::uint64_t t = 0; t < config.trials; ++t) {
    Rng rng = Rng::derive(config.seed, "game/trial", t);
    const int coin = rng.coin() ? 1 : 0;
    round.seed = rng.next_u64();
    std::vector<fl::ModelVector> models;
    for (ClientId c = 1; c <= config.n; ++c) {
      models.push_back(fl::ModelVector{s.model_of(c, coin), c, GameSetup::kSamples});
    }
    protocol::Federation fed(round, s.keys, *s.codec);
    fed.run_round(models);
    const AdversaryView view =
        collect_view(fed.network().transcript(0), s.colluders, ClientId{1},
                     config.has_sk() ? s.keys.sk : nullptr);

    std::optional<int> guess;
    if (view.sk) {
      guess = guess_with_key(s, view);
    } else {
      for (const Message& msg : view.server_view) {
        if (msg.sender == 1 &&
            (msg.kind == MessageKind::kGarbled || msg.kind == MessageKind::kShare)) {
          guess = classifier->guess(s.keys.pk->deserialize_vector(msg.payload));
          break;
        }
      }
    }
    if (guess) {
      ++result.decided;
      if (*guess == coin) ++result.decided_correct;
    }
    const int o = guess.value_or(rng.coin() ? 1 : 0);
    result.guesses.push_back(static_cast<std::uint8_t>(o + 1));
    if (o == coin) ++result.correct;
    ++result.trials;
  }
  return result;
}

}  // namespace skefl::adversary
