// core/include/lgp/error.hpp

// Copyright  2026  LGP Project Authors

// See ../../../COPYING for clarification regarding multiple authors
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

#ifndef LGP_ERROR_HPP_
#define LGP_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace lgp {

// Every failure the library can signal. One code per contract violation so
// callers and tests can match on the condition rather than on message text.
enum class ErrorCode {
  kZeroVector,
  kNotPositiveDefinite,
  kDimensionMismatch,
  kInvalidCount,
  kInvalidCorrelation,
  kEmptyInput,
  kInactiveSpeaker,
  kIndexOutOfRange,
  kInvalidSad,
  kEmptyCoarse,
  kNoSpeech,
  kEmptyWindow,
  kEmptyReference,
  kRecordingMismatch,
  kParseError,
  kNegativeDuration,
  kInvertedInterval,
  kDimMismatch,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lgp

#endif  // LGP_ERROR_HPP_
