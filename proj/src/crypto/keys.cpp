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

#include "skefl/crypto/keys.hpp"

#include <fstream>

#include "skefl/crypto/mock.hpp"
#include "skefl/crypto/paillier.hpp"
#include "skefl/error.hpp"

namespace skefl::crypto {
namespace {

std::string field(const nlohmann::json& j, const char* name) {
  require(j.is_object() && j.contains(name) && j.at(name).is_string(),
          ErrorCode::kParse, std::string("key file is missing '") + name + "'");
  return j.at(name).get<std::string>();
}

}  // namespace

BackendKind backend_kind_from_string(const std::string& name) {
  if (name == "paillier") return BackendKind::kPaillier;
  if (name == "mock") return BackendKind::kMock;
  fail(ErrorCode::kConfiguration, "unknown backend '" + name + "'");
}

std::string to_string(BackendKind kind) {
  return kind == BackendKind::kPaillier ? "paillier" : "mock";
}

KeyPair keygen(BackendKind kind, std::size_t security_bits, std::uint64_t seed) {
  if (kind == BackendKind::kMock) return mock_keygen(default_mock_modulus());
  return paillier_keygen(security_bits, seed);
}

std::shared_ptr<const PublicKey> public_key_from_json(const nlohmann::json& j) {
  const std::string backend = field(j, "backend");
  if (backend == "mock") {
    return std::make_shared<const MockPublicKey>(from_decimal(field(j, "modulus")));
  }
  require(backend == "paillier", ErrorCode::kParse, "unknown backend in key file");
  return std::make_shared<const PaillierPublicKey>(from_decimal(field(j, "n")),
                                                   from_decimal(field(j, "hs")));
}

KeyPair key_pair_from_json(const nlohmann::json& secret) {
  const std::string backend = field(secret, "backend");
  if (backend == "mock") return mock_keygen(from_decimal(field(secret, "modulus")));
  require(backend == "paillier", ErrorCode::kParse, "unknown backend in key file");
  auto sk = std::make_shared<const PaillierSecretKey>(
      from_decimal(field(secret, "p")), from_decimal(field(secret, "q")),
      from_decimal(field(secret, "hs")));
  return KeyPair{sk->shared_public_key(), sk};
}

void write_key_files(const KeyPair& keys, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "public_key.json") << keys.pk->to_json().dump(2) << '\n';
  std::ofstream(dir / "secret_key.json") << keys.sk->to_json().dump(2) << '\n';
}

}  // namespace skefl::crypto
