// core/include/lgp/two_pass.hpp

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

#ifndef LGP_TWO_PASS_HPP_
#define LGP_TWO_PASS_HPP_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lgp/cluster.hpp"
#include "lgp/io_formats.hpp"
#include "lgp/plda.hpp"

namespace lgp {

// Coarse-then-fine diarization: a first pass on long non-overlapping windows
// fixes the speaker inventory, a short second pass on heavily overlapped
// windows refines the boundaries.

struct Segment {
  double start = 0.0;     // seconds, >= 0
  double duration = 0.0;  // seconds, > 0
  Eigen::VectorXd embedding;
};

struct PassConfig {
  double window = 2.0;  // seconds
  double step = 2.0;    // seconds, 0 < step <= window
  int max_iterations = 20;
};

// Provider of length-normalized embeddings for arbitrary windows. Decouples
// the clustering pipeline from wherever embeddings come from; each pass may
// use its own source.
class EmbeddingSource {
 public:
  virtual ~EmbeddingSource() = default;
  virtual Eigen::VectorXd embedding(double start, double duration) const = 0;
};

// Aggregates frame-level embeddings by window mean plus length
// normalization.
class FrameAggregatorSource final : public EmbeddingSource {
 public:
  FrameAggregatorSource(Eigen::MatrixXd frames, double frame_step,
                        double start_offset);
  explicit FrameAggregatorSource(const EmbeddingTable& table);

  Eigen::VectorXd embedding(double start, double duration) const override;

 private:
  Eigen::MatrixXd frames_;
  double frame_step_;
  double start_offset_;
};

// Precomputed window embeddings, looked up by (start, duration) at
// millisecond resolution. Missing windows throw EmptyWindow.
class WindowTableSource final : public EmbeddingSource {
 public:
  void add(double start, double duration, Eigen::VectorXd embedding);
  Eigen::VectorXd embedding(double start, double duration) const override;

 private:
  std::map<std::pair<long long, long long>, Eigen::VectorXd> windows_;
};

// A contiguous stretch of one speaker on the output timeline, [start, end).
struct LabeledInterval {
  double start = 0.0;
  double end = 0.0;
  int label = 0;
};

// Windows of length `window` placed every `step` seconds inside each speech
// region. A trailing remainder of at least step/2 becomes a final shortened
// segment; a smaller remainder is absorbed into the previous window's labeled
// extent. A region shorter than step/2 still yields one segment covering it.
// Regions must be sorted and non-overlapping (InvalidSad otherwise); returned
// segments carry no embeddings.
std::vector<Segment> segment_timeline(const std::vector<SadRegion>& sad,
                                      const PassConfig& pass);

// One-hot initialization for the fine pass: each fine segment takes the label
// of the coarse interval containing its midpoint, boundary hits resolving to
// the interval that starts there, midpoints in gaps to the nearest interval.
// Labels must lie in [0, k_active).
Responsibilities map_labels(const std::vector<LabeledInterval>& coarse,
                            const std::vector<Segment>& fine, int k_active);

struct TwoPassConfig {
  PassConfig pass1{2.0, 2.0, 20};
  PassConfig pass2{1.25, 0.25, 2};
  bool pass2_enabled = true;
  // Engine knobs shared by both passes; per-pass iteration caps above win.
  ClusterConfig cluster;
};

struct DiarizeResult {
  std::vector<RttmRecord> records;
  std::vector<IterationStats> pass1_log;
  std::vector<IterationStats> pass2_log;
  int pass1_active = 0;  // speakers surviving pass one
};

// Runs both passes and merges the fine labels into RTTM records. Pass two is
// initialized from pass-one labels via map_labels, keeps pass-one weights as
// its initial weights, never adds speakers, and scales enrollment counts
// against the pass-one segment total. Output records are sorted,
// non-overlapping, and cover each speech region exactly.
DiarizeResult diarize(const EmbeddingSource& pass1_source,
                      const EmbeddingSource* pass2_source,
                      const std::vector<SadRegion>& sad,
                      const PldaParams& plda, const TwoPassConfig& cfg,
                      const std::string& recording_id);

}  // namespace lgp

#endif  // LGP_TWO_PASS_HPP_
