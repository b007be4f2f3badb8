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

#ifndef PRIVFUNNEL_ERRORS_H_
#define PRIVFUNNEL_ERRORS_H_

#include <string>
#include <string_view>

#include "absl/status/status.h"

namespace privfunnel {

// Every error produced by the library carries a machine-readable kind as the
// leading token of its message, e.g. "Unbounded: ray found at ...".
enum class ErrorKind {
  kZeroMarginal,
  kZeroProbabilityContext,
  kDimensionMismatch,
  kSchemaMismatch,
  kOutOfRange,
  kInvalidInput,
  kInconsistentPrior,
  kUnbounded,
  kInfeasible,
  kDimensionTooLarge,
  kParseError,
  kIoError,
  kInternal,
};

const char* ErrorKindName(ErrorKind kind);

absl::Status MakeError(ErrorKind kind, std::string_view message);

// Returns the kind token of a status created by MakeError, or "Unknown".
std::string ErrorKindOf(const absl::Status& status);

}  // namespace privfunnel

#endif  // PRIVFUNNEL_ERRORS_H_
