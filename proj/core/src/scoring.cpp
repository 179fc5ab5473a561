// core/src/scoring.cpp

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

#include "lgp/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>

#include "lgp/error.hpp"

namespace lgp {

namespace {

using Interval = std::pair<int64_t, int64_t>;  // [start, end) in milliseconds

int64_t ToMs(double seconds) {
  return static_cast<int64_t>(std::llround(seconds * 1000.0));
}

std::vector<Interval> MergeIntervals(std::vector<Interval> intervals) {
  std::sort(intervals.begin(), intervals.end());
  std::vector<Interval> merged;
  for (const Interval& iv : intervals) {
    if (iv.second <= iv.first) continue;
    if (!merged.empty() && iv.first <= merged.back().second) {
      merged.back().second = std::max(merged.back().second, iv.second);
    } else {
      merged.push_back(iv);
    }
  }
  return merged;
}

bool Covers(const std::vector<Interval>& merged, int64_t t) {
  auto it = std::upper_bound(
      merged.begin(), merged.end(), t,
      [](int64_t value, const Interval& iv) { return value < iv.first; });
  if (it == merged.begin()) return false;
  --it;
  return t < it->second;
}

// Per-speaker merged speaking intervals, speakers ordered by name.
std::vector<std::vector<Interval>> SpeakerTimelines(
    const std::vector<RttmRecord>& records, std::vector<std::string>* names) {
  std::map<std::string, std::vector<Interval>> by_name;
  for (const RttmRecord& rec : records) {
    by_name[rec.speaker].push_back(
        {ToMs(rec.onset), ToMs(rec.onset + rec.duration)});
  }
  std::vector<std::vector<Interval>> timelines;
  for (auto& entry : by_name) {
    names->push_back(entry.first);
    timelines.push_back(MergeIntervals(std::move(entry.second)));
  }
  return timelines;
}

// Minimum-cost assignment on a rectangular matrix with rows <= cols,
// shortest augmenting paths with potentials. Returns the column chosen for
// each row.
std::vector<int> AssignMinCost(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  const double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> assigned_row(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    assigned_row[0] = i;
    int j0 = 0;
    std::vector<double> min_reduced(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      int i0 = assigned_row[j0], j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        double reduced = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (reduced < min_reduced[j]) {
          min_reduced[j] = reduced;
          way[j] = j0;
        }
        if (min_reduced[j] < delta) {
          delta = min_reduced[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[assigned_row[j]] += delta;
          v[j] -= delta;
        } else {
          min_reduced[j] -= delta;
        }
      }
      j0 = j1;
    } while (assigned_row[j0] != 0);
    do {
      int j1 = way[j0];
      assigned_row[j0] = assigned_row[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j) {
    if (assigned_row[j] > 0) row_to_col[assigned_row[j] - 1] = j - 1;
  }
  return row_to_col;
}

// Largest attainable overlap sum with the given pairs already fixed and
// their rows/columns unavailable.
double BestTotalWithForced(const Eigen::MatrixXd& gain,
                           const std::vector<std::pair<int, int>>& forced) {
  std::vector<char> row_used(gain.rows(), 0), col_used(gain.cols(), 0);
  double base = 0.0;
  for (const auto& pair : forced) {
    base += gain(pair.first, pair.second);
    row_used[pair.first] = 1;
    col_used[pair.second] = 1;
  }
  std::vector<int> rows, cols;
  for (int i = 0; i < gain.rows(); ++i) {
    if (!row_used[i]) rows.push_back(i);
  }
  for (int j = 0; j < gain.cols(); ++j) {
    if (!col_used[j]) cols.push_back(j);
  }
  if (rows.empty() || cols.empty()) return base;
  bool transpose = rows.size() > cols.size();
  const std::vector<int>& a = transpose ? cols : rows;
  const std::vector<int>& b = transpose ? rows : cols;
  Eigen::MatrixXd sub(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      sub(i, j) = transpose ? gain(b[j], a[i]) : gain(a[i], b[j]);
    }
  }
  // Assignment maximization as minimization against the largest entry.
  double top = sub.maxCoeff();
  Eigen::MatrixXd cost = (top - sub.array()).matrix();
  std::vector<int> match = AssignMinCost(cost);
  double total = base;
  for (std::size_t i = 0; i < match.size(); ++i) {
    if (match[i] >= 0) total += sub(static_cast<Eigen::Index>(i), match[i]);
  }
  return total;
}

}  // namespace

std::vector<int> optimal_mapping(const Eigen::MatrixXd& overlap) {
  std::vector<int> mapping(overlap.rows(), -1);
  if (overlap.rows() == 0 || overlap.cols() == 0) return mapping;
  const double best = BestTotalWithForced(overlap, {});
  const double tolerance = 1e-9 * std::max(1.0, std::abs(best));
  // Fix pairs in index order whenever doing so still attains the optimum;
  // this picks the lexicographically smallest optimal pair set.
  std::vector<std::pair<int, int>> forced;
  std::vector<char> col_used(overlap.cols(), 0);
  for (int i = 0; i < overlap.rows(); ++i) {
    for (int j = 0; j < overlap.cols(); ++j) {
      if (col_used[j] || !(overlap(i, j) > 0.0)) continue;
      forced.push_back({i, j});
      if (BestTotalWithForced(overlap, forced) >= best - tolerance) {
        mapping[i] = j;
        col_used[j] = 1;
        break;
      }
      forced.pop_back();
    }
  }
  return mapping;
}

DerBreakdown score_der(const std::vector<RttmRecord>& reference,
                       const std::vector<RttmRecord>& hypothesis,
                       const DerOptions& opts) {
  if (reference.empty()) {
    throw Error(ErrorCode::kEmptyReference, "reference has no records");
  }
  const std::string& recording = reference.front().recording_id;
  for (const RttmRecord& rec : reference) {
    if (rec.recording_id != recording) {
      throw Error(ErrorCode::kRecordingMismatch,
                  "reference mixes recordings '" + recording + "' and '" +
                      rec.recording_id + "'");
    }
  }
  for (const RttmRecord& rec : hypothesis) {
    if (rec.recording_id != recording) {
      throw Error(ErrorCode::kRecordingMismatch,
                  "hypothesis recording '" + rec.recording_id +
                      "' does not match reference '" + recording + "'");
    }
  }

  std::vector<std::string> ref_names, hyp_names;
  std::vector<std::vector<Interval>> ref_spk =
      SpeakerTimelines(reference, &ref_names);
  std::vector<std::vector<Interval>> hyp_spk =
      SpeakerTimelines(hypothesis, &hyp_names);

  // Regions excluded from scoring: a collar around every reference segment
  // boundary, plus reference overlap regions when those are not scored.
  std::vector<Interval> excluded;
  const int64_t collar_ms = ToMs(opts.collar);
  if (collar_ms > 0) {
    for (const RttmRecord& rec : reference) {
      int64_t onset = ToMs(rec.onset);
      int64_t offset = ToMs(rec.onset + rec.duration);
      excluded.push_back({onset - collar_ms, onset + collar_ms});
      excluded.push_back({offset - collar_ms, offset + collar_ms});
    }
  }
  if (!opts.score_overlap) {
    std::vector<std::pair<int64_t, int>> events;
    for (const auto& timeline : ref_spk) {
      for (const Interval& iv : timeline) {
        events.push_back({iv.first, +1});
        events.push_back({iv.second, -1});
      }
    }
    std::sort(events.begin(), events.end());
    int concurrency = 0;
    int64_t overlap_start = 0;
    for (const auto& event : events) {
      concurrency += event.second;
      if (event.second > 0 && concurrency == 2) {
        overlap_start = event.first;
      } else if (event.second < 0 && concurrency == 1) {
        excluded.push_back({overlap_start, event.first});
      }
    }
  }
  excluded = MergeIntervals(std::move(excluded));

  // Elementary intervals between consecutive boundaries; each lies entirely
  // inside or outside every speaker timeline and every exclusion.
  std::vector<int64_t> boundaries;
  auto add_edges = [&boundaries](const std::vector<std::vector<Interval>>& spk) {
    for (const auto& timeline : spk) {
      for (const Interval& iv : timeline) {
        boundaries.push_back(iv.first);
        boundaries.push_back(iv.second);
      }
    }
  };
  add_edges(ref_spk);
  add_edges(hyp_spk);
  for (const Interval& iv : excluded) {
    boundaries.push_back(iv.first);
    boundaries.push_back(iv.second);
  }
  std::sort(boundaries.begin(), boundaries.end());
  boundaries.erase(std::unique(boundaries.begin(), boundaries.end()),
                   boundaries.end());

  struct Piece {
    int64_t length;
    std::vector<int> refs_on;
    std::vector<int> hyps_on;
  };
  std::vector<Piece> pieces;
  Eigen::MatrixXd overlap =
      Eigen::MatrixXd::Zero(ref_spk.size(), hyp_spk.size());
  for (std::size_t b = 0; b + 1 < boundaries.size(); ++b) {
    int64_t start = boundaries[b], end = boundaries[b + 1];
    int64_t mid = start + (end - start) / 2;
    if (Covers(excluded, mid)) continue;
    Piece piece;
    piece.length = end - start;
    for (std::size_t i = 0; i < ref_spk.size(); ++i) {
      if (Covers(ref_spk[i], mid)) piece.refs_on.push_back(static_cast<int>(i));
    }
    for (std::size_t j = 0; j < hyp_spk.size(); ++j) {
      if (Covers(hyp_spk[j], mid)) piece.hyps_on.push_back(static_cast<int>(j));
    }
    if (piece.refs_on.empty() && piece.hyps_on.empty()) continue;
    for (int i : piece.refs_on) {
      for (int j : piece.hyps_on) {
        overlap(i, j) += static_cast<double>(piece.length);
      }
    }
    pieces.push_back(std::move(piece));
  }

  std::vector<int> mapping = optimal_mapping(overlap);

  int64_t missed = 0, false_alarm = 0, confusion = 0, scored = 0;
  for (const Piece& piece : pieces) {
    auto n_ref = static_cast<int64_t>(piece.refs_on.size());
    auto n_hyp = static_cast<int64_t>(piece.hyps_on.size());
    int64_t matched = 0;
    for (int i : piece.refs_on) {
      if (mapping[i] >= 0 &&
          std::binary_search(piece.hyps_on.begin(), piece.hyps_on.end(),
                             mapping[i])) {
        ++matched;
      }
    }
    scored += n_ref * piece.length;
    missed += std::max<int64_t>(n_ref - n_hyp, 0) * piece.length;
    false_alarm += std::max<int64_t>(n_hyp - n_ref, 0) * piece.length;
    confusion += (std::min(n_ref, n_hyp) - matched) * piece.length;
  }

  DerBreakdown breakdown;
  breakdown.missed = static_cast<double>(missed) / 1000.0;
  breakdown.false_alarm = static_cast<double>(false_alarm) / 1000.0;
  breakdown.confusion = static_cast<double>(confusion) / 1000.0;
  breakdown.scored_total = static_cast<double>(scored) / 1000.0;
  double errors = breakdown.missed + breakdown.false_alarm + breakdown.confusion;
  breakdown.der = (scored == 0 && errors == 0.0)
                      ? 0.0
                      : errors / breakdown.scored_total;
  return breakdown;
}

DerBreakdown aggregate_der(const std::vector<DerBreakdown>& parts) {
  DerBreakdown total;
  for (const DerBreakdown& part : parts) {
    total.missed += part.missed;
    total.false_alarm += part.false_alarm;
    total.confusion += part.confusion;
    total.scored_total += part.scored_total;
  }
  double errors = total.missed + total.false_alarm + total.confusion;
  total.der = (total.scored_total == 0.0 && errors == 0.0)
                  ? 0.0
                  : errors / total.scored_total;
  return total;
}

}  // namespace lgp
