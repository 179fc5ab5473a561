// core/include/lgp/scoring.hpp

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

#ifndef LGP_SCORING_HPP_
#define LGP_SCORING_HPP_

#include <vector>

#include <Eigen/Dense>

#include "lgp/io_formats.hpp"

namespace lgp {

// Diarization error rate. Time is handled as integer milliseconds internally
// so collar and boundary arithmetic is exact.

struct DerOptions {
  double collar = 0.0;        // seconds removed around every reference boundary
  bool score_overlap = true;  // false drops regions with >= 2 reference speakers
};

struct DerBreakdown {
  double missed = 0.0;        // seconds of reference speech with no hypothesis
  double false_alarm = 0.0;   // seconds of hypothesis speech with no reference
  double confusion = 0.0;     // seconds attributed to the wrong speaker
  double scored_total = 0.0;  // reference speaker seconds in scored regions
  double der = 0.0;           // (missed + false_alarm + confusion) / scored_total
};

// Scores one recording. Collar regions around reference segment boundaries
// are excluded, overlapped reference regions optionally so; the speaker
// mapping maximizes matched overlap on the scored timeline; each scored
// instant lands in exactly one of {correct, missed, false alarm, confusion}.
// Throws EmptyReference and RecordingMismatch.
DerBreakdown score_der(const std::vector<RttmRecord>& reference,
                       const std::vector<RttmRecord>& hypothesis,
                       const DerOptions& opts);

// Injective reference-to-hypothesis mapping maximizing the summed overlap.
// overlap(i, j) is the matched duration between reference speaker i and
// hypothesis speaker j and must be nonnegative. Entry -1 marks an unmapped
// reference speaker; zero-overlap pairings are left unmapped. Ties between
// optimal mappings resolve to the lexicographically smallest pair set.
std::vector<int> optimal_mapping(const Eigen::MatrixXd& overlap);

// Pools per-recording breakdowns time-weighted: components add, the rate is
// recomputed from the sums.
DerBreakdown aggregate_der(const std::vector<DerBreakdown>& parts);

}  // namespace lgp

#endif  // LGP_SCORING_HPP_
