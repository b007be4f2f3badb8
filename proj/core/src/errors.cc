// Copyright 2026 The privfunnel Authors
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

#include "privfunnel/errors.h"

#include "absl/strings/str_cat.h"

namespace privfunnel {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kZeroMarginal:
      return "ZeroMarginal";
    case ErrorKind::kZeroProbabilityContext:
      return "ZeroProbabilityContext";
    case ErrorKind::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorKind::kSchemaMismatch:
      return "SchemaMismatch";
    case ErrorKind::kOutOfRange:
      return "OutOfRange";
    case ErrorKind::kInvalidInput:
      return "InvalidInput";
    case ErrorKind::kInconsistentPrior:
      return "InconsistentPrior";
    case ErrorKind::kUnbounded:
      return "Unbounded";
    case ErrorKind::kInfeasible:
      return "Infeasible";
    case ErrorKind::kDimensionTooLarge:
      return "DimensionTooLarge";
    case ErrorKind::kParseError:
      return "ParseError";
    case ErrorKind::kIoError:
      return "IoError";
    case ErrorKind::kInternal:
      return "Internal";
  }
  return "Unknown";
}

absl::Status MakeError(ErrorKind kind, std::string_view message) {
  std::string text = absl::StrCat(ErrorKindName(kind), ": ", std::string(message));
  switch (kind) {
    case ErrorKind::kOutOfRange:
      return absl::OutOfRangeError(text);
    case ErrorKind::kInfeasible:
    case ErrorKind::kUnbounded:
      return absl::FailedPreconditionError(text);
    case ErrorKind::kDimensionTooLarge:
      return absl::ResourceExhaustedError(text);
    case ErrorKind::kIoError:
      return absl::UnavailableError(text);
    case ErrorKind::kInternal:
      return absl::InternalError(text);
    default:
      return absl::InvalidArgumentError(text);
  }
}

std::string ErrorKindOf(const absl::Status& status) {
  std::string message(status.message());
  size_t colon = message.find(':');
  if (colon == std::string::npos) return "Unknown";
  return message.substr(0, colon);
}

}  // namespace privfunnel
