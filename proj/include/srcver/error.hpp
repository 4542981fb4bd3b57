// Copyright 2026  srcver authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace srcver {

enum class Errc {
  kDimensionMismatch,
  kZeroVector,
  kNonFinite,
  kEmptyReferenceSet,
  kInsufficientTracks,
  kMissingEmbedding,
  kUnknownTrackId,
  kDuplicateTrackId,
  kMalformedRecord,
  kDegenerateTrialSet,
  kUnsupportedFormat,
  kCorruptFile,
  kEmptyClip,
  kSilentInput,
  kRateMismatch,
  kEmptyIR,
  kCommandFailed,
  kOutputMissing,
  kInvalidArgument,
  kIoError,
};

std::string_view errc_name(Errc code);

// Errors the CLI maps to exit code 3 rather than 2.
bool is_io_error(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string &what);

  Errc code() const noexcept { return code_; }
  // The message without the leading error name.
  const std::string &detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace srcver
