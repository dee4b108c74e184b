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

#ifndef SKEFL_ERROR_HPP_
#define SKEFL_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace skefl {

enum class ErrorCode {
  kConfiguration,
  kRange,
  kBackendMismatch,
  kLengthMismatch,
  kProtocolOrder,
  kIncompleteRound,
  kRouting,
  kAuthorization,
  kInvalidGame,
  kParse,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (and the CLI exit path) can tell configuration mistakes apart from
// protocol violations.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace skefl

#endif  // SKEFL_ERROR_HPP_
