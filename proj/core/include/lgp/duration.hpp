// core/include/lgp/duration.hpp

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

#ifndef LGP_DURATION_HPP_
#define LGP_DURATION_HPP_

#include <limits>

namespace lgp {

// Correlation-corrected effective sample counts. Successive embeddings from
// one speaker share channel state, so a cluster of N segments carries fewer
// than N independent observations; these functions quantify how many.

struct DurationConfig {
  // Correlation between successive channel draws, in [0, 1].
  double r = 0.9;
  // Target segment count per file. Counts observed in files longer than this
  // are scaled down before the correlation correction. Infinity disables the
  // scaling (N0 = N).
  double n0 = std::numeric_limits<double>::infinity();
};

// Exact formula: N / (1 + 2 * sum_{j=1}^{N-1} ((N-j)/N) r^j). Requires an
// integer count n >= 1. Result lies in [1, N].
double neff_discrete(int n, double r);

// Large-N limiting form ((1-r)/(1+r)) N. Degenerates to 0 at r = 1, which is
// why the continuous form below exists. Requires n >= 1.
double neff_limit(double n, double r);

// min(N, ((1-r)N + 2r)/(1+r)). Defined for real n >= 0 so soft counts from
// responsibilities can be fed in directly. Equals neff_discrete exactly at
// N = 1 and N = 2; monotone nondecreasing in N; result in [0, N].
double neff_continuous(double n, double r);

// n * min(1, N0/file_total). Applied to observed counts before the
// correlation correction; identity when N0 is unbounded or the file is short.
double scale_count(double n, const DurationConfig& cfg, double file_total);

}  // namespace lgp

#endif  // LGP_DURATION_HPP_
