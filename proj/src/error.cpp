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

#include "srcver/error.hpp"

namespace srcver {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kZeroVector: return "ZeroVector";
    case Errc::kNonFinite: return "NonFinite";
    case Errc::kEmptyReferenceSet: return "EmptyReferenceSet";
    case Errc::kInsufficientTracks: return "InsufficientTracks";
    case Errc::kMissingEmbedding: return "MissingEmbedding";
    case Errc::kUnknownTrackId: return "UnknownTrackId";
    case Errc::kDuplicateTrackId: return "DuplicateTrackId";
    case Errc::kMalformedRecord: return "MalformedRecord";
    case Errc::kDegenerateTrialSet: return "DegenerateTrialSet";
    case Errc::kUnsupportedFormat: return "UnsupportedFormat";
    case Errc::kCorruptFile: return "CorruptFile";
    case Errc::kEmptyClip: return "EmptyClip";
    case Errc::kSilentInput: return "SilentInput";
    case Errc::kRateMismatch: return "RateMismatch";
    case Errc::kEmptyIR: return "EmptyIR";
    case Errc::kCommandFailed: return "CommandFailed";
    case Errc::kOutputMissing: return "OutputMissing";
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kIoError: return "IoError";
  }
  return "Unknown";
}

bool is_io_error(Errc code) {
  return code == Errc::kIoError || code == Errc::kCommandFailed ||
         code == Errc::kOutputMissing;
}

Error::Error(Errc code, const std::string &what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what),
      code_(code),
      detail_(what) {}

}  // namespace srcver
