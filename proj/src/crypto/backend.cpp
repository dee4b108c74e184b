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

#include "skefl/crypto/backend.hpp"

#include <string>

#include "skefl/error.hpp"

namespace skefl::crypto {

std::string_view to_string(BackendId id) {
  switch (id) {
    case BackendId::kMock:
      return "mock";
    case BackendId::kPaillier:
      return "paillier";
  }
  return "unknown";
}

Bytes Ciphertext::serialize() const {
  Bytes out;
  append_to(out);
  return out;
}

void Ciphertext::append_to(Bytes& out) const {
  const Bytes magnitude = to_bytes_be(value_);
  out.push_back(static_cast<std::uint8_t>(backend_));
  append_u32_be(out, static_cast<std::uint32_t>(magnitude.size()));
  out.insert(out.end(), magnitude.begin(), magnitude.end());
}

Bytes serialize(const CiphertextVector& vector) {
  Bytes out;
  append_u32_be(out, static_cast<std::uint32_t>(vector.size()));
  for (const Ciphertext& c : vector) c.append_to(out);
  return out;
}

OpCounts OpCounts::operator-(const OpCounts& other) const {
  return OpCounts{encrypt - other.encrypt, add - other.add, neg - other.neg,
                  scalar_mul - other.scalar_mul, decrypt - other.decrypt};
}

OpCounts OpCounters::snapshot() const {
  return OpCounts{encrypt_.load(std::memory_order_relaxed),
                  add_.load(std::memory_order_relaxed),
                  neg_.load(std::memory_order_relaxed),
                  scalar_mul_.load(std::memory_order_relaxed),
                  decrypt_.load(std::memory_order_relaxed)};
}

void PublicKey::check_operand(const Ciphertext& c) const {
  if (c.backend() != backend()) {
    fail(ErrorCode::kBackendMismatch,
         std::string("expected a ") + std::string(to_string(backend())) +
             " ciphertext, got " + std::string(to_string(c.backend())));
  }
  require(sgn(c.value()) >= 0 && c.value() < ciphertext_modulus(),
          ErrorCode::kRange, "ciphertext outside the ciphertext space");
}

void PublicKey::check_plaintext(const BigInt& value) const {
  require(sgn(value) >= 0 && value < plaintext_modulus(), ErrorCode::kRange,
          "plaintext outside [0, M)");
}

Ciphertext PublicKey::parse_one(std::span<const std::uint8_t> bytes,
                                std::size_t& offset) const {
  require(offset < bytes.size(), ErrorCode::kParse, "truncated ciphertext");
  const auto id = static_cast<BackendId>(bytes[offset]);
  require(id == backend(), ErrorCode::kParse, "ciphertext from another backend");
  const std::uint32_t length = read_u32_be(bytes, offset + 1);
  const std::size_t start = offset + 5;
  require(start + length <= bytes.size(), ErrorCode::kParse,
          "ciphertext magnitude truncated");
  const auto magnitude = bytes.subspan(start, length);
  require(magnitude.empty() || magnitude[0] != 0, ErrorCode::kParse,
          "non-minimal ciphertext magnitude");
  BigInt value = from_bytes_be(magnitude);
  require(value < ciphertext_modulus(), ErrorCode::kParse,
          "ciphertext value outside the ciphertext space");
  offset = start + length;
  return Ciphertext(id, std::move(value));
}

Ciphertext PublicKey::deserialize(std::span<const std::uint8_t> bytes) const {
  std::size_t offset = 0;
  Ciphertext c = parse_one(bytes, offset);
  require(offset == bytes.size(), ErrorCode::kParse, "trailing bytes after ciphertext");
  return c;
}

CiphertextVector PublicKey::deserialize_vector(
    std::span<const std::uint8_t> bytes) const {
  const std::uint32_t count = read_u32_be(bytes, 0);
  // Each element needs at least five bytes, which bounds a hostile count.
  require(count <= (bytes.size() - 4) / 5, ErrorCode::kParse,
          "ciphertext vector count exceeds payload");
  CiphertextVector out;
  out.reserve(count);
  std::size_t offset = 4;
  for (std::uint32_t i = 0; i < count; ++i) out.push_back(parse_one(bytes, offset));
  require(offset == bytes.size(), ErrorCode::kParse,
          "trailing bytes after ciphertext vector");
  return out;
}

CiphertextVector encrypt_vector(const Encryptor& encryptor,
                                std::span<const BigInt> plaintexts, Rng& rng) {
  CiphertextVector out;
  out.reserve(plaintexts.size());
  for (const BigInt& pt : plaintexts) out.push_back(encryptor.encrypt(pt, rng));
  return out;
}

std::vector<BigInt> decrypt_vector(const SecretKey& sk,
                                   const CiphertextVector& vector) {
  std::vector<BigInt> out;
  out.reserve(vector.size());
  for (const Ciphertext& c : vector) out.push_back(sk.decrypt(c));
  return out;
}

CiphertextVector add_vectors(const PublicKey& pk, const CiphertextVector& a,
                             const CiphertextVector& b) {
  require(a.size() == b.size(), ErrorCode::kLengthMismatch,
          "cannot add ciphertext vectors of length " + std::to_string(a.size()) +
              " and " + std::to_string(b.size()));
  CiphertextVector out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(pk.add(a[i], b[i]));
  return out;
}

CiphertextVector scalar_mul_vector(const PublicKey& pk,
                                   const CiphertextVector& a, const BigInt& k) {
  CiphertextVector out;
  out.reserve(a.size());
  for (const Ciphertext& c : a) out.push_back(pk.scalar_mul(c, k));
  return out;
}

CiphertextVector scalar_mul_vector(const SecretKey& sk, const CiphertextVector& a,
                                   const BigInt& k) {
  CiphertextVector out;
  out.reserve(a.size());
  for (const Ciphertext& c : a) out.push_back(sk.scalar_mul(c, k));
  return out;
}

}  // namespace skefl::crypto
