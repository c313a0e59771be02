// Copyright 2026 The ghzlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ghzlab {

enum class ErrorKind {
  kDimensionMismatch,
  kSize,
  kShift,
  kDomain,
  kEmptyEvent,
  kIncompleteStrategy,
  kInvalidSplit,
  kNoNonzeroCharacter,
  kEmbeddingUndefined,
  kEmpty,
  kParse,
  kUsage,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDimensionMismatch: return "dimension-mismatch";
    case ErrorKind::kSize: return "size";
    case ErrorKind::kShift: return "shift";
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kEmptyEvent: return "empty-event";
    case ErrorKind::kIncompleteStrategy: return "incomplete-strategy";
    case ErrorKind::kInvalidSplit: return "invalid-split";
    case ErrorKind::kNoNonzeroCharacter: return "no-nonzero-character";
    case ErrorKind::kEmbeddingUndefined: return "embedding-undefined";
    case ErrorKind::kEmpty: return "empty";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kUsage: return "usage";
  }
  return "unknown";
}

/// Every failure raised by the library. `kind()` lets callers and tests
/// branch on the category without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ghzlab
