// core/src/duration.cpp

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

#include "lgp/duration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lgp/error.hpp"

namespace lgp {

namespace {

void CheckCorrelation(double r) {
  if (!(r >= 0.0 && r <= 1.0)) {
    throw Error(ErrorCode::kInvalidCorrelation,
                "correlation must lie in [0, 1], got " + std::to_string(r));
  }
}

}  // namespace

double neff_discrete(int n, double r) {
  if (n < 1) {
    throw Error(ErrorCode::kInvalidCount,
                "count must be a positive integer, got " + std::to_string(n));
  }
  CheckCorrelation(r);
  // Accumulate the triangular sum from the smallest terms (largest j) up so
  // the result is as close to the mathematical value as doubles allow.
  double sum = 0.0;
  double nd = static_cast<double>(n);
  for (int j = n - 1; j >= 1; --j) {
    sum += (nd - j) / nd * std::pow(r, j);
  }
  return nd / (1.0 + 2.0 * sum);
}

double neff_limit(double n, double r) {
  if (!(n >= 1.0)) {
    throw Error(ErrorCode::kInvalidCount,
                "count must be at least 1, got " + std::to_string(n));
  }
  CheckCorrelation(r);
  return (1.0 - r) / (1.0 + r) * n;
}

double neff_continuous(double n, double r) {
  if (!(n >= 0.0)) {
    throw Error(ErrorCode::kInvalidCount,
                "count must be nonnegative, got " + std::to_string(n));
  }
  CheckCorrelation(r);
  return std::min(n, ((1.0 - r) * n + 2.0 * r) / (1.0 + r));
}

double scale_count(double n, const DurationConfig& cfg, double file_total) {
  if (!(n >= 0.0)) {
    throw Error(ErrorCode::kInvalidCount,
                "count must be nonnegative, got " + std::to_string(n));
  }
  return n * std::min(1.0, cfg.n0 / file_total);
}

}  // namespace lgp
