// core/include/lgp/cluster.hpp

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

#ifndef LGP_CLUSTER_HPP_
#define LGP_CLUSTER_HPP_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "lgp/duration.hpp"

namespace lgp {

// Leave-one-out Gaussian PLDA clustering. All embeddings here live in the
// diagonalized space: within-class covariance is the identity and the
// across-class prior is diag(psi), so speaker models carry diagonal
// covariances only.

struct SpeakerModel {
  Eigen::VectorXd mean;  // posterior mean
  Eigen::VectorXd cov;   // posterior variance per coordinate, within [0, psi]
  double weight = 1.0;   // mixture weight; 0 marks a pruned speaker
  double eff_count = 0.0;  // effective count after scaling and correlation
};

struct Responsibilities {
  Eigen::MatrixXd matrix;    // segments x speakers; rows sum to 1
  std::vector<char> active;  // per speaker; inactive columns are all zero
};

struct ClusterConfig {
  int max_speakers = 10;
  int max_iterations = 20;
  double posterior_change_tol = 1e-4;
  double prune_threshold = 1e-3;  // must stay below 1/max_speakers
  DurationConfig duration;
  uint64_t seed = 0;
};

struct IterationStats {
  int iteration = 0;  // 1-based
  int active_speakers = 0;
  double max_change = 0.0;  // largest absolute responsibility change
};

struct ClusterResult {
  Responsibilities resp;
  // One entry per speaker slot. Means and covariances are enrolled from the
  // returned responsibilities; weights are the last maximum-likelihood
  // update. Pruned speakers keep weight 0.
  std::vector<SpeakerModel> models;
  std::vector<IterationStats> log;
};

// Hard one-hot assignments from k-means++ seeding and at most 50 Lloyd
// sweeps, deterministic for a given seed. With N <= k every segment gets its
// own cluster and the remaining slots come back inactive; clusters emptied
// during Lloyd sweeps come back inactive too.
Responsibilities kmeans_init(const Eigen::MatrixXd& embeddings, int k,
                             uint64_t seed);

// Posterior speaker model from sufficient statistics. With n_eff =
// neff_continuous(scale_count(soft_count)) and per-coordinate noise variance
// 1/n_eff on the mean estimate: mean = psi/(psi + 1/n_eff) * (mean_sum /
// soft_count) and cov = psi * (1/n_eff) / (psi + 1/n_eff). A nonpositive
// soft_count returns the prior: mean 0, cov psi.
SpeakerModel enroll_speaker(double soft_count, const Eigen::VectorXd& mean_sum,
                            const Eigen::VectorXd& psi,
                            const DurationConfig& duration, double file_total);

// log N(z; mean, I + diag(cov)). Throws InactiveSpeaker when the model has
// been pruned (weight 0).
double log_predictive(const Eigen::VectorXd& z, const SpeakerModel& model);

// Posterior row for segment n: every active speaker is re-enrolled with
// segment n's responsibility removed from its statistics, scored as
// log weight + log_predictive, and the row is normalized with log-sum-exp.
// file_total <= 0 means the segment count itself.
Eigen::VectorXd loo_posteriors(Eigen::Index n,
                               const Eigen::MatrixXd& embeddings,
                               const Responsibilities& resp,
                               const Eigen::VectorXd& psi,
                               const std::vector<double>& weights,
                               const ClusterConfig& cfg,
                               double file_total = 0.0);

// The alternating loop: enroll speakers from the current responsibilities,
// apply the maximum-likelihood weight update with pruning (the top speaker
// always survives, pruned speakers never return), then refresh every row
// with leave-one-out posteriors computed from the frozen statistics. Stops
// after max_iterations or when the largest responsibility change drops below
// posterior_change_tol. init_weights, when given, seeds the weight state that
// the first update replaces.
ClusterResult cluster(const Eigen::MatrixXd& embeddings,
                      const Eigen::VectorXd& psi, const ClusterConfig& cfg,
                      const Responsibilities* init = nullptr,
                      const std::vector<double>* init_weights = nullptr,
                      double file_total = 0.0);

}  // namespace lgp

#endif  // LGP_CLUSTER_HPP_
