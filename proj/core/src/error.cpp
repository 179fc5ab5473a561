// core/src/error.cpp

// Copyright  2026  LGP Project Authors

// See ../../COPYING for clarification regarding multiple authors
//
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

#include "lgp/error.hpp"

namespace lgp {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZeroVector:
      return "ZeroVector";
    case ErrorCode::kNotPositiveDefinite:
      return "NotPositiveDefinite";
    case ErrorCode::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::kInvalidCount:
      return "InvalidCount";
    case ErrorCode::kInvalidCorrelation:
      return "InvalidCorrelation";
    case ErrorCode::kEmptyInput:
      return "EmptyInput";
    case ErrorCode::kInactiveSpeaker:
      return "InactiveSpeaker";
    case ErrorCode::kIndexOutOfRange:
      return "IndexOutOfRange";
    case ErrorCode::kInvalidSad:
      return "InvalidSad";
    case ErrorCode::kEmptyCoarse:
      return "EmptyCoarse";
    case ErrorCode::kNoSpeech:
      return "NoSpeech";
    case ErrorCode::kEmptyWindow:
      return "EmptyWindow";
    case ErrorCode::kEmptyReference:
      return "EmptyReference";
    case ErrorCode::kRecordingMismatch:
      return "RecordingMismatch";
    case ErrorCode::kParseError:
      return "ParseError";
    case ErrorCode::kNegativeDuration:
      return "NegativeDuration";
    case ErrorCode::kInvertedInterval:
      return "InvertedInterval";
    case ErrorCode::kDimMismatch:
      return "DimMismatch";
  }
  return "Unknown";
}

}  // namespace lgp
