// core/src/synth.cpp

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

#include "lgp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lgp/error.hpp"
#include "lgp/plda.hpp"
#include "lgp/random.hpp"

namespace lgp {

namespace {

void CheckPsi(const Eigen::VectorXd& psi) {
  if (psi.size() < 1 || psi.minCoeff() < 0.0) {
    throw Error(ErrorCode::kNotPositiveDefinite,
                "psi entries must be nonnegative");
  }
}

Eigen::MatrixXd DrawSpeakers(Rng& rng, int k, const Eigen::VectorXd& psi) {
  Eigen::VectorXd scale = psi.cwiseSqrt();
  Eigen::MatrixXd y(k, psi.size());
  for (int i = 0; i < k; ++i) {
    for (Eigen::Index d = 0; d < psi.size(); ++d) {
      y(i, d) = rng.Gaussian() * scale(d);
    }
  }
  return y;
}

void ValidateConfig(const SynthConfig& cfg) {
  if (cfg.num_speakers < 1) {
    throw Error(ErrorCode::kInvalidCount, "num_speakers must be positive");
  }
  if (cfg.dim < 1 || cfg.psi.size() != cfg.dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "psi must have length dim = " + std::to_string(cfg.dim));
  }
  CheckPsi(cfg.psi);
  if (!(cfg.r >= 0.0 && cfg.r < 1.0)) {
    throw Error(ErrorCode::kInvalidCorrelation,
                "frame correlation must lie in [0, 1)");
  }
  if (!(cfg.frame_step > 0.0)) {
    throw Error(ErrorCode::kInvalidCount, "frame_step must be positive");
  }
  if (!(cfg.turn_mean > 0.0)) {
    throw Error(ErrorCode::kInvalidCount, "turn_mean must be positive");
  }
  if (!(cfg.file_length >= cfg.turn_mean)) {
    throw Error(ErrorCode::kInvalidCount,
                "file_length must be at least turn_mean");
  }
}

}  // namespace

Eigen::MatrixXd sample_speakers(int k, const Eigen::VectorXd& psi,
                                uint64_t seed) {
  if (k < 1) {
    throw Error(ErrorCode::kInvalidCount, "speaker count must be positive");
  }
  CheckPsi(psi);
  Rng rng(seed);
  return DrawSpeakers(rng, k, psi);
}

Conversation sample_conversation(const SynthConfig& cfg) {
  ValidateConfig(cfg);
  Rng rng(cfg.seed);
  const int k = cfg.num_speakers;
  Eigen::MatrixXd y = DrawSpeakers(rng, k, cfg.psi);

  Conversation conv;
  conv.frame_step = cfg.frame_step;
  double t = 0.0;
  int spk = 0;
  while (t < cfg.file_length) {
    double duration = rng.Exponential(cfg.turn_mean);
    double end = std::min(t + duration, cfg.file_length);
    if (end > t) {
      if (!conv.turns.empty() && conv.turns.back().speaker == spk) {
        conv.turns.back().end = end;  // only reachable with one speaker
      } else {
        conv.turns.push_back({t, end, spk});
      }
      t = end;
    }
    // Jump draw happens every turn to keep the stream layout fixed.
    if (rng.Uniform() < 0.25 && k > 1) {
      int other = static_cast<int>(rng.UniformInt(static_cast<uint64_t>(k - 1)));
      spk = other < spk ? other : other + 1;
    } else {
      spk = (spk + 1) % k;
    }
  }

  const auto frame_count =
      static_cast<Eigen::Index>(std::llround(cfg.file_length / cfg.frame_step));
  conv.frames.resize(frame_count, cfg.dim);
  Eigen::VectorXd channel(cfg.dim);
  for (Eigen::Index d = 0; d < cfg.dim; ++d) channel(d) = rng.Gaussian();
  const double innovation = std::sqrt(1.0 - cfg.r * cfg.r);
  std::size_t turn_index = 0;
  for (Eigen::Index f = 0; f < frame_count; ++f) {
    double frame_time = static_cast<double>(f) * cfg.frame_step;
    while (turn_index + 1 < conv.turns.size() &&
           frame_time >= conv.turns[turn_index].end) {
      ++turn_index;
    }
    if (f > 0) {
      for (Eigen::Index d = 0; d < cfg.dim; ++d) {
        channel(d) = cfg.r * channel(d) + innovation * rng.Gaussian();
      }
    }
    conv.frames.row(f) =
        y.row(conv.turns[turn_index].speaker) + channel.transpose();
  }
  return conv;
}

Eigen::VectorXd window_embedding(const Eigen::MatrixXd& frames,
                                 double frame_step, double start_offset,
                                 double start, double duration) {
  const Eigen::Index total = frames.rows();
  auto first = static_cast<Eigen::Index>(
      std::ceil((start - start_offset) / frame_step - 1e-9));
  auto last = static_cast<Eigen::Index>(
      std::ceil((start + duration - start_offset) / frame_step - 1e-9));
  first = std::max<Eigen::Index>(first, 0);
  last = std::min(last, total);
  if (last <= first) {
    throw Error(ErrorCode::kEmptyWindow,
                "no frames in [" + std::to_string(start) + ", " +
                    std::to_string(start + duration) + ")");
  }
  Eigen::VectorXd mean =
      frames.middleRows(first, last - first).colwise().mean().transpose();
  return length_normalize(mean);
}

Eigen::VectorXd window_embedding(const Conversation& conv, double start,
                                 double duration) {
  return window_embedding(conv.frames, conv.frame_step, 0.0, start, duration);
}

std::vector<RttmRecord> truth_rttm(const Conversation& conv,
                                   const std::string& recording_id) {
  std::vector<RttmRecord> records;
  records.reserve(conv.turns.size());
  for (const Turn& turn : conv.turns) {
    records.push_back({recording_id, turn.start, turn.end - turn.start,
                       "spk" + std::to_string(turn.speaker)});
  }
  return records;
}

CalibratedPlda calibrate_plda(const SynthConfig& cfg,
                              const CalibrationConfig& cal, uint64_t seed) {
  CheckPsi(cfg.psi);
  if (cfg.psi.size() != cfg.dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "psi must have length dim = " + std::to_string(cfg.dim));
  }
  if (!(cfg.r >= 0.0 && cfg.r < 1.0)) {
    throw Error(ErrorCode::kInvalidCorrelation,
                "frame correlation must lie in [0, 1)");
  }
  const int frames_per_window =
      static_cast<int>(std::llround(cal.window / cfg.frame_step));
  if (frames_per_window < 1) {
    throw Error(ErrorCode::kInvalidCount,
                "calibration window shorter than one frame step");
  }
  if (cal.num_speakers < 2 || cal.windows_per_speaker < 2) {
    throw Error(ErrorCode::kInvalidCount,
                "calibration needs at least 2 speakers and 2 windows each");
  }
  if (!(cal.within_smoothing > 0.0)) {
    throw Error(ErrorCode::kInvalidCount, "within_smoothing must be positive");
  }

  Rng rng(seed);
  const Eigen::Index d = cfg.dim;
  Eigen::VectorXd scale = cfg.psi.cwiseSqrt();
  Eigen::MatrixXd means(cal.num_speakers, d);
  Eigen::MatrixXd residuals(
      static_cast<Eigen::Index>(cal.num_speakers) * cal.windows_per_speaker, d);
  const double innovation = std::sqrt(1.0 - cfg.r * cfg.r);
  Eigen::MatrixXd windows(cal.windows_per_speaker, d);
  Eigen::VectorXd y(d), channel(d), acc(d);
  for (int s = 0; s < cal.num_speakers; ++s) {
    for (Eigen::Index i = 0; i < d; ++i) y(i) = rng.Gaussian() * scale(i);
    for (int w = 0; w < cal.windows_per_speaker; ++w) {
      for (Eigen::Index i = 0; i < d; ++i) channel(i) = rng.Gaussian();
      acc = channel;
      for (int f = 1; f < frames_per_window; ++f) {
        for (Eigen::Index i = 0; i < d; ++i) {
          channel(i) = cfg.r * channel(i) + innovation * rng.Gaussian();
        }
        acc += channel;
      }
      Eigen::VectorXd m = y + acc / frames_per_window;
      windows.row(w) = length_normalize(m).transpose();
    }
    Eigen::RowVectorXd mu = windows.colwise().mean();
    means.row(s) = mu;
    residuals.middleRows(
        static_cast<Eigen::Index>(s) * cal.windows_per_speaker,
        cal.windows_per_speaker) = windows.rowwise() - mu;
  }

  CalibratedPlda plda;
  Eigen::MatrixXd centered = means.rowwise() - means.colwise().mean().eval();
  plda.sigma_ac =
      centered.transpose() * centered / static_cast<double>(cal.num_speakers - 1);
  const auto within_dof = static_cast<double>(
      static_cast<long long>(cal.num_speakers) * cal.windows_per_speaker -
      cal.num_speakers);
  plda.sigma_wc =
      cal.within_smoothing * (residuals.transpose() * residuals) / within_dof;
  return plda;
}

}  // namespace lgp
