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

#ifndef SKEFL_CRYPTO_KEYS_HPP_
#define SKEFL_CRYPTO_KEYS_HPP_

#include <cstdint>
#include <filesystem>
#include <string>

#include "nlohmann/json.hpp"
#include "skefl/crypto/backend.hpp"

namespace skefl::crypto {

enum class BackendKind { kPaillier, kMock };

BackendKind backend_kind_from_string(const std::string& name);
std::string to_string(BackendKind kind);

// Trusted-dealer setup. For Paillier, security_bits is the modulus size; the
// mock backend ignores it and uses default_mock_modulus().
KeyPair keygen(BackendKind kind, std::size_t security_bits, std::uint64_t seed);

// Key files are JSON objects with decimal big-integer strings.
std::shared_ptr<const PublicKey> public_key_from_json(const nlohmann::json& j);
KeyPair key_pair_from_json(const nlohmann::json& secret);

void write_key_files(const KeyPair& keys, const std::filesystem::path& dir);

}  // namespace skefl::crypto

#endif  // SKEFL_CRYPTO_KEYS_HPP_
