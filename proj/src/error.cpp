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

#include "skefl/error.hpp"

namespace skefl {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfiguration:
      return "configuration error";
    case ErrorCode::kRange:
      return "range error";
    case ErrorCode::kBackendMismatch:
      return "backend mismatch";
    case ErrorCode::kLengthMismatch:
      return "length mismatch";
    case ErrorCode::kProtocolOrder:
      return "protocol-order error";
    case ErrorCode::kIncompleteRound:
      return "incomplete round";
    case ErrorCode::kRouting:
      return "routing error";
    case ErrorCode::kAuthorization:
      return "authorization error";
    case ErrorCode::kInvalidGame:
      return "invalid game";
    case ErrorCode::kParse:
      return "parse error";
  }
  return "error";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace skefl
