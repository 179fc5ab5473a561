// core/src/two_pass.cpp

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

#include "lgp/two_pass.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lgp/error.hpp"
#include "lgp/synth.hpp"

namespace lgp {

namespace {

constexpr double kTimeEps = 1e-9;

long long ToMillis(double seconds) {
  return std::llround(seconds * 1000.0);
}

void CheckRegions(const std::vector<SadRegion>& sad) {
  if (sad.empty()) {
    throw Error(ErrorCode::kInvalidSad, "no speech regions");
  }
  for (std::size_t i = 0; i < sad.size(); ++i) {
    if (!(sad[i].end > sad[i].start)) {
      throw Error(ErrorCode::kInvalidSad, "region with non-positive length");
    }
    if (i > 0 && sad[i].start < sad[i - 1].end - kTimeEps) {
      throw Error(ErrorCode::kInvalidSad, "regions overlap or are unsorted");
    }
  }
}

void CheckPass(const PassConfig& pass) {
  if (!(pass.step > 0.0) || pass.window < pass.step) {
    throw Error(ErrorCode::kInvalidSad, "window/step must satisfy 0 < step <= window");
  }
}

// Segments restricted to one region, as [first, last) into the flat segment
// list produced by segment_timeline.
struct RegionRun {
  std::size_t first = 0;
  std::size_t last = 0;
};

std::vector<RegionRun> SplitByRegion(const std::vector<SadRegion>& sad,
                                     const std::vector<Segment>& segments) {
  std::vector<RegionRun> runs(sad.size());
  std::size_t pos = 0;
  for (std::size_t r = 0; r < sad.size(); ++r) {
    runs[r].first = pos;
    while (pos < segments.size() &&
           segments[pos].start < sad[r].end - kTimeEps) {
      ++pos;
    }
    runs[r].last = pos;
  }
  return runs;
}

// Tiles each region into step-sized cells (the last cell keeps the
// remainder) and labels every cell by the segment whose midpoint lies
// closest to the cell center, earlier segment on ties. Equal-label
// neighbors merge, so each region comes back as a few labeled spans that
// cover it exactly.
std::vector<LabeledInterval> TileLabels(const std::vector<SadRegion>& sad,
                                        const std::vector<Segment>& segments,
                                        const std::vector<int>& labels,
                                        double step) {
  const std::vector<RegionRun> runs = SplitByRegion(sad, segments);
  std::vector<LabeledInterval> out;
  for (std::size_t r = 0; r < sad.size(); ++r) {
    const double a = sad[r].start;
    const double b = sad[r].end;
    const RegionRun& run = runs[r];
    if (run.first == run.last) {
      continue;
    }
    const int num_tiles =
        std::max(1, static_cast<int>(std::ceil((b - a) / step - kTimeEps)));
    for (int t = 0; t < num_tiles; ++t) {
      const double ts = a + t * step;
      const double te = std::min(ts + step, b);
      const double center = 0.5 * (ts + te);
      std::size_t best = run.first;
      double best_dist = std::numeric_limits<double>::infinity();
      for (std::size_t s = run.first; s < run.last; ++s) {
        const double mid = segments[s].start + 0.5 * segments[s].duration;
        const double dist = std::abs(mid - center);
        if (dist < best_dist - kTimeEps) {
          best_dist = dist;
          best = s;
        }
      }
      const int label = labels[best];
      if (!out.empty() && out.back().label == label &&
          std::abs(out.back().end - ts) < kTimeEps) {
        out.back().end = te;
      } else {
        out.push_back({ts, te, label});
      }
    }
  }
  return out;
}

std::vector<RttmRecord> ToRecords(const std::vector<LabeledInterval>& spans,
                                  const std::string& recording_id) {
  std::vector<RttmRecord> records;
  records.reserve(spans.size());
  for (const LabeledInterval& span : spans) {
    RttmRecord rec;
    rec.recording_id = recording_id;
    rec.onset = span.start;
    rec.duration = span.end - span.start;
    rec.speaker = "spk" + std::to_string(span.label);
    records.push_back(rec);
  }
  return records;
}

Eigen::MatrixXd ProjectSegments(const EmbeddingSource& source,
                                const std::vector<Segment>& segments,
                                const PldaParams& plda) {
  Eigen::MatrixXd z(static_cast<Eigen::Index>(segments.size()), plda.dim());
  for (std::size_t n = 0; n < segments.size(); ++n) {
    z.row(static_cast<Eigen::Index>(n)) =
        project(plda, source.embedding(segments[n].start,
                                       segments[n].duration))
            .transpose();
  }
  return z;
}

std::vector<int> ArgmaxLabels(const Responsibilities& resp) {
  std::vector<int> labels(static_cast<std::size_t>(resp.matrix.rows()));
  for (Eigen::Index n = 0; n < resp.matrix.rows(); ++n) {
    Eigen::Index best = 0;
    resp.matrix.row(n).maxCoeff(&best);
    labels[static_cast<std::size_t>(n)] = static_cast<int>(best);
  }
  return labels;
}

}  // namespace

FrameAggregatorSource::FrameAggregatorSource(Eigen::MatrixXd frames,
                                             double frame_step,
                                             double start_offset)
    : frames_(std::move(frames)),
      frame_step_(frame_step),
      start_offset_(start_offset) {
  if (frames_.rows() == 0 || frames_.cols() == 0) {
    throw Error(ErrorCode::kEmptyInput, "frame matrix is empty");
  }
  if (!(frame_step_ > 0.0)) {
    throw Error(ErrorCode::kInvalidCount, "frame step must be positive");
  }
}

FrameAggregatorSource::FrameAggregatorSource(const EmbeddingTable& table)
    : FrameAggregatorSource(table.rows, table.frame_step, table.start_offset) {
}

Eigen::VectorXd FrameAggregatorSource::embedding(double start,
                                                 double duration) const {
  return window_embedding(frames_, frame_step_, start_offset_, start,
                          duration);
}

void WindowTableSource::add(double start, double duration,
                            Eigen::VectorXd embedding) {
  windows_[{ToMillis(start), ToMillis(duration)}] = std::move(embedding);
}

Eigen::VectorXd WindowTableSource::embedding(double start,
                                             double duration) const {
  const auto it = windows_.find({ToMillis(start), ToMillis(duration)});
  if (it == windows_.end()) {
    throw Error(ErrorCode::kEmptyWindow,
                "no embedding stored for window at " + std::to_string(start));
  }
  return it->second;
}

std::vector<Segment> segment_timeline(const std::vector<SadRegion>& sad,
                                      const PassConfig& pass) {
  CheckRegions(sad);
  CheckPass(pass);
  std::vector<Segment> segments;
  for (const SadRegion& region : sad) {
    const double a = region.start;
    const double b = region.end;
    const std::size_t before = segments.size();
    double t = a;
    while (t + pass.window <= b + kTimeEps) {
      segments.push_back({t, pass.window, {}});
      t += pass.step;
    }
    const double rem = b - t;
    if (rem >= 0.5 * pass.step - kTimeEps && rem > kTimeEps) {
      segments.push_back({t, rem, {}});
    }
    if (segments.size() == before) {
      // Region too short for any window: keep it as a single segment so no
      // speech goes unlabeled.
      segments.push_back({a, b - a, {}});
    }
  }
  return segments;
}

Responsibilities map_labels(const std::vector<LabeledInterval>& coarse,
                            const std::vector<Segment>& fine, int k_active) {
  if (coarse.empty()) {
    throw Error(ErrorCode::kEmptyCoarse, "no coarse intervals to map from");
  }
  if (fine.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no fine segments to map onto");
  }
  if (k_active < 1) {
    throw Error(ErrorCode::kInvalidCount, "need at least one active speaker");
  }
  for (const LabeledInterval& span : coarse) {
    if (span.label < 0 || span.label >= k_active) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "coarse label outside the active speaker set");
    }
    if (!(span.end > span.start)) {
      throw Error(ErrorCode::kInvertedInterval,
                  "coarse interval with non-positive length");
    }
  }

  Responsibilities resp;
  resp.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(fine.size()),
                                      k_active);
  resp.active.assign(static_cast<std::size_t>(k_active), 1);

  for (std::size_t n = 0; n < fine.size(); ++n) {
    const double mid = fine[n].start + 0.5 * fine[n].duration;
    // Last interval starting at or before the midpoint; a midpoint exactly
    // on a shared boundary therefore resolves to the interval that starts
    // there.
    std::size_t idx = 0;
    {
      std::size_t lo = 0;
      std::size_t hi = coarse.size();
      while (lo < hi) {
        const std::size_t m = (lo + hi) / 2;
        if (coarse[m].start <= mid) {
          lo = m + 1;
        } else {
          hi = m;
        }
      }
      idx = (lo == 0) ? 0 : lo - 1;
    }
    if (coarse[idx].start > mid) {
      // Before the first interval: nearest is the first.
    } else if (mid >= coarse[idx].end) {
      // In a gap: nearest interval by edge distance, earlier one on ties.
      const double left = mid - coarse[idx].end;
      if (idx + 1 < coarse.size()) {
        const double right = coarse[idx + 1].start - mid;
        if (right < left) {
          ++idx;
        }
      }
    }
    resp.matrix(static_cast<Eigen::Index>(n), coarse[idx].label) = 1.0;
  }
  return resp;
}

DiarizeResult diarize(const EmbeddingSource& pass1_source,
                      const EmbeddingSource* pass2_source,
                      const std::vector<SadRegion>& sad,
                      const PldaParams& plda, const TwoPassConfig& cfg,
                      const std::string& recording_id) {
  if (sad.empty()) {
    throw Error(ErrorCode::kNoSpeech, "no speech regions for " + recording_id);
  }

  const std::vector<Segment> segs1 = segment_timeline(sad, cfg.pass1);
  const Eigen::MatrixXd z1 = ProjectSegments(pass1_source, segs1, plda);

  ClusterConfig pass1_cfg = cfg.cluster;
  pass1_cfg.max_iterations = cfg.pass1.max_iterations;
  const ClusterResult res1 = cluster(z1, plda.psi, pass1_cfg);

  const std::vector<int> labels1 = ArgmaxLabels(res1.resp);
  const std::vector<LabeledInterval> coarse =
      TileLabels(sad, segs1, labels1, cfg.pass1.step);

  DiarizeResult result;
  result.pass1_log = res1.log;
  for (char flag : res1.resp.active) {
    result.pass1_active += flag ? 1 : 0;
  }

  if (!cfg.pass2_enabled) {
    result.records = ToRecords(coarse, recording_id);
    return result;
  }

  // Pass two clusters over the pass-one survivors only; columns are
  // compacted so pruned speakers cannot reappear.
  std::vector<int> active_ids;
  std::vector<int> col_to_compact(res1.resp.active.size(), -1);
  for (std::size_t k = 0; k < res1.resp.active.size(); ++k) {
    if (res1.resp.active[k]) {
      col_to_compact[k] = static_cast<int>(active_ids.size());
      active_ids.push_back(static_cast<int>(k));
    }
  }
  std::vector<LabeledInterval> compact_coarse = coarse;
  for (LabeledInterval& span : compact_coarse) {
    span.label = col_to_compact[span.label];
  }

  const std::vector<Segment> segs2 = segment_timeline(sad, cfg.pass2);
  const Responsibilities init =
      map_labels(compact_coarse, segs2, static_cast<int>(active_ids.size()));
  std::vector<double> init_weights(active_ids.size());
  for (std::size_t j = 0; j < active_ids.size(); ++j) {
    init_weights[j] = res1.models[static_cast<std::size_t>(active_ids[j])].weight;
  }

  const EmbeddingSource& src2 = pass2_source ? *pass2_source : pass1_source;
  const Eigen::MatrixXd z2 = ProjectSegments(src2, segs2, plda);

  ClusterConfig pass2_cfg = cfg.cluster;
  pass2_cfg.max_iterations = cfg.pass2.max_iterations;
  const ClusterResult res2 =
      cluster(z2, plda.psi, pass2_cfg, &init, &init_weights,
              static_cast<double>(segs1.size()));
  result.pass2_log = res2.log;

  std::vector<int> labels2 = ArgmaxLabels(res2.resp);
  for (int& label : labels2) {
    label = active_ids[static_cast<std::size_t>(label)];
  }
  const std::vector<LabeledInterval> fine =
      TileLabels(sad, segs2, labels2, cfg.pass2.step);
  result.records = ToRecords(fine, recording_id);
  return result;
}

}  // namespace lgp
