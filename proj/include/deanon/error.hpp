// Copyright 2026 The deanon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef DEANON_ERROR_HPP_
#define DEANON_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace deanon {

enum class ErrorCode {
  kInvalidConfig,
  kIndexOutOfRange,
  kLengthMismatch,
  kTooLarge,
  kOverflow,
  kUnmatched,
  kUnknownBound,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

// Raised for violated preconditions. Match failures inside an attack are not
// errors; they are reported through MatchStatus.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidConfig:
      return "InvalidConfig";
    case ErrorCode::kIndexOutOfRange:
      return "IndexOutOfRange";
    case ErrorCode::kLengthMismatch:
      return "LengthMismatch";
    case ErrorCode::kTooLarge:
      return "TooLarge";
    case ErrorCode::kOverflow:
      return "Overflow";
    case ErrorCode::kUnmatched:
      return "Unmatched";
    case ErrorCode::kUnknownBound:
      return "UnknownBound";
    case ErrorCode::kIoError:
      return "IOError";
  }
  return "Unknown";
}

}  // namespace deanon

#endif  // DEANON_ERROR_HPP_
