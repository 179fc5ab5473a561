// core/include/lgp/synth.hpp

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

#ifndef LGP_SYNTH_HPP_
#define LGP_SYNTH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lgp/io_formats.hpp"

namespace lgp {

// Generative oracle. Conversations are sampled from the same model the
// clustering engine assumes: speaker latents from the across-class prior and
// an AR(1) channel on top, so every clustering claim can be tested against
// known ground truth without audio.

struct SynthConfig {
  int num_speakers = 2;
  int dim = 16;
  Eigen::VectorXd psi;       // across-class prior variances, length dim
  double r = 0.0;            // frame-to-frame channel correlation, [0, 1)
  double frame_step = 0.25;  // seconds between frame embeddings
  double turn_mean = 5.0;    // exponential mean turn length, seconds
  double file_length = 60.0; // seconds, >= turn_mean
  uint64_t seed = 0;
};

struct Turn {
  double start = 0.0;
  double end = 0.0;
  int speaker = 0;
};

struct Conversation {
  Eigen::MatrixXd frames;  // one embedding per row, frame k at time k * frame_step
  double frame_step = 0.0;
  std::vector<Turn> turns;  // ground truth; covers [0, file_length) gap-free
};

// k independent latents, each N(0, diag(psi)). Returned as a k x D matrix.
Eigen::MatrixXd sample_speakers(int k, const Eigen::VectorXd& psi,
                                uint64_t seed);

// Samples a full conversation: exponential turn lengths with round-robin
// speaker order plus occasional random jumps, then per frame
// z_t = y_spk(t) + c_t with c_t = r c_{t-1} + sqrt(1 - r^2) e_t and a
// stationary N(0, I) start. Bit-identical output for identical configs.
Conversation sample_conversation(const SynthConfig& cfg);

// Mean of the frames inside [start, start + duration), length normalized.
// Throws EmptyWindow when no frame falls inside.
Eigen::VectorXd window_embedding(const Eigen::MatrixXd& frames,
                                 double frame_step, double start_offset,
                                 double start, double duration);
Eigen::VectorXd window_embedding(const Conversation& conv, double start,
                                 double duration);

// Ground-truth turns as RTTM records; durations sum to file_length.
std::vector<RttmRecord> truth_rttm(const Conversation& conv,
                                   const std::string& recording_id);

// Monte-Carlo estimate of the covariances of normalized window embeddings
// drawn from the generative model. Window aggregation and length
// normalization change the raw model covariances, so downstream clustering
// needs the induced ones, not diag(psi) and I.
struct CalibrationConfig {
  double window = 2.0;            // aggregation window used downstream
  int num_speakers = 1500;        // simulated speakers
  int windows_per_speaker = 8;    // windows drawn per speaker
  // Multiplier on the exported within-class covariance. Values above 1 damp
  // all projected distances, which keeps weight-based speaker selection from
  // carving stable sub-clusters out of one speaker on clean embeddings.
  double within_smoothing = 1.0;
};

struct CalibratedPlda {
  Eigen::MatrixXd sigma_wc;
  Eigen::MatrixXd sigma_ac;
};

CalibratedPlda calibrate_plda(const SynthConfig& cfg,
                              const CalibrationConfig& cal, uint64_t seed);

}  // namespace lgp

#endif  // LGP_SYNTH_HPP_
