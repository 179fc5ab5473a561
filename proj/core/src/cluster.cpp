// core/src/cluster.cpp

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

#include "lgp/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lgp/error.hpp"
#include "lgp/random.hpp"

namespace lgp {

namespace {

constexpr double kProbabilityFloor = 1e-300;
constexpr int kLloydIterations = 50;

void ValidateClusterConfig(const ClusterConfig& cfg) {
  if (cfg.max_speakers < 1) {
    throw Error(ErrorCode::kInvalidCount, "max_speakers must be positive");
  }
  if (cfg.max_iterations < 1) {
    throw Error(ErrorCode::kInvalidCount, "max_iterations must be positive");
  }
  if (!(cfg.posterior_change_tol >= 0.0)) {
    throw Error(ErrorCode::kInvalidCount,
                "posterior_change_tol must be nonnegative");
  }
  if (!(cfg.prune_threshold >= 0.0 &&
        cfg.prune_threshold < 1.0 / cfg.max_speakers)) {
    throw Error(ErrorCode::kInvalidCount,
                "prune_threshold must lie in [0, 1/max_speakers)");
  }
}

// One leave-one-out row from a frozen statistics snapshot. counts and
// mean_sums include segment n; its responsibility row is subtracted here.
Eigen::VectorXd LooRowFromStats(const Eigen::VectorXd& z,
                                const Eigen::VectorXd& counts,
                                const Eigen::MatrixXd& mean_sums,
                                const Eigen::VectorXd& resp_row,
                                const std::vector<char>& active,
                                const std::vector<double>& weights,
                                const Eigen::VectorXd& psi,
                                const DurationConfig& duration,
                                double file_total) {
  const Eigen::Index k = counts.size();
  Eigen::VectorXd logs =
      Eigen::VectorXd::Constant(k, -std::numeric_limits<double>::infinity());
  for (Eigen::Index i = 0; i < k; ++i) {
    if (!active[static_cast<std::size_t>(i)]) continue;
    // Cancellation can leave a hair of negative mass; clamp before enrolling.
    double held_out = std::max(counts(i) - resp_row(i), 0.0);
    Eigen::VectorXd held_sum = mean_sums.row(i).transpose() - resp_row(i) * z;
    SpeakerModel model =
        enroll_speaker(held_out, held_sum, psi, duration, file_total);
    logs(i) = std::log(std::max(weights[static_cast<std::size_t>(i)],
                                kProbabilityFloor)) +
              log_predictive(z, model);
  }
  double top = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < k; ++i) {
    if (active[static_cast<std::size_t>(i)]) top = std::max(top, logs(i));
  }
  Eigen::VectorXd row = Eigen::VectorXd::Zero(k);
  double total = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (!active[static_cast<std::size_t>(i)]) continue;
    row(i) = std::max(std::exp(logs(i) - top), kProbabilityFloor);
    total += row(i);
  }
  row /= total;
  return row;
}

void ValidateResponsibilities(const Responsibilities& resp, Eigen::Index n) {
  if (resp.matrix.rows() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "responsibility rows do not match the segment count");
  }
  if (static_cast<Eigen::Index>(resp.active.size()) != resp.matrix.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "active flags do not match the speaker count");
  }
}

}  // namespace

Responsibilities kmeans_init(const Eigen::MatrixXd& embeddings, int k,
                             uint64_t seed) {
  const Eigen::Index n = embeddings.rows();
  if (n < 1) {
    throw Error(ErrorCode::kEmptyInput, "no embeddings to cluster");
  }
  if (k < 1) {
    throw Error(ErrorCode::kInvalidCount, "cluster count must be positive");
  }

  std::vector<Eigen::Index> labels(static_cast<std::size_t>(n), 0);
  if (n <= k) {
    for (Eigen::Index i = 0; i < n; ++i) labels[i] = i;
  } else {
    Rng rng(seed);
    Eigen::MatrixXd centers(k, embeddings.cols());
    centers.row(0) =
        embeddings.row(static_cast<Eigen::Index>(rng.UniformInt(n)));
    Eigen::VectorXd dist2 =
        (embeddings.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (int c = 1; c < k; ++c) {
      double total = dist2.sum();
      Eigen::Index pick = n - 1;
      if (total <= 0.0) {
        pick = static_cast<Eigen::Index>(rng.UniformInt(n));
      } else {
        double target = rng.Uniform() * total;
        double running = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          running += dist2(i);
          if (running > target) {
            pick = i;
            break;
          }
        }
      }
      centers.row(c) = embeddings.row(pick);
      dist2 = dist2.cwiseMin(
          (embeddings.rowwise() - centers.row(c)).rowwise().squaredNorm());
    }
    std::vector<Eigen::Index> previous(labels.size(),
                                       static_cast<Eigen::Index>(-1));
    for (int sweep = 0; sweep < kLloydIterations; ++sweep) {
      for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index best = 0;
        double best_d = (embeddings.row(i) - centers.row(0)).squaredNorm();
        for (int c = 1; c < k; ++c) {
          double d = (embeddings.row(i) - centers.row(c)).squaredNorm();
          if (d < best_d) {
            best_d = d;
            best = c;
          }
        }
        labels[i] = best;
      }
      if (labels == previous) break;
      previous = labels;
      for (int c = 0; c < k; ++c) {
        Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(embeddings.cols());
        Eigen::Index members = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (labels[i] == c) {
            sum += embeddings.row(i);
            ++members;
          }
        }
        if (members > 0) centers.row(c) = sum / static_cast<double>(members);
      }
    }
  }

  Responsibilities resp;
  resp.matrix = Eigen::MatrixXd::Zero(n, k);
  resp.active.assign(static_cast<std::size_t>(k), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    resp.matrix(i, labels[i]) = 1.0;
    resp.active[static_cast<std::size_t>(labels[i])] = 1;
  }
  return resp;
}

SpeakerModel enroll_speaker(double soft_count, const Eigen::VectorXd& mean_sum,
                            const Eigen::VectorXd& psi,
                            const DurationConfig& duration,
                            double file_total) {
  SpeakerModel model;
  if (soft_count <= 0.0) {
    model.mean = Eigen::VectorXd::Zero(psi.size());
    model.cov = psi;
    model.eff_count = 0.0;
    return model;
  }
  if (mean_sum.size() != psi.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "mean_sum dimension does not match psi");
  }
  double scaled = scale_count(soft_count, duration, file_total);
  double n_eff = neff_continuous(scaled, duration.r);
  double noise_var = 1.0 / n_eff;
  Eigen::ArrayXd denom = psi.array() + noise_var;
  model.mean = (psi.array() / denom * (mean_sum.array() / soft_count)).matrix();
  model.cov = (psi.array() * noise_var / denom).matrix();
  model.eff_count = n_eff;
  return model;
}

double log_predictive(const Eigen::VectorXd& z, const SpeakerModel& model) {
  if (!(model.weight > 0.0)) {
    throw Error(ErrorCode::kInactiveSpeaker,
                "cannot score a pruned speaker model");
  }
  if (z.size() != model.mean.size() || z.size() != model.cov.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "embedding dimension does not match the speaker model");
  }
  constexpr double kLog2Pi = 1.8378770664093454835606594728112;
  double acc = 0.0;
  for (Eigen::Index d = 0; d < z.size(); ++d) {
    double variance = 1.0 + model.cov(d);
    double deviation = z(d) - model.mean(d);
    acc += kLog2Pi + std::log(variance) + deviation * deviation / variance;
  }
  return -0.5 * acc;
}

Eigen::VectorXd loo_posteriors(Eigen::Index n,
                               const Eigen::MatrixXd& embeddings,
                               const Responsibilities& resp,
                               const Eigen::VectorXd& psi,
                               const std::vector<double>& weights,
                               const ClusterConfig& cfg, double file_total) {
  ValidateResponsibilities(resp, embeddings.rows());
  if (n < 0 || n >= embeddings.rows()) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "segment index " + std::to_string(n) + " outside 0.." +
                    std::to_string(embeddings.rows() - 1));
  }
  if (static_cast<Eigen::Index>(weights.size()) != resp.matrix.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "weight count does not match the speaker count");
  }
  if (file_total <= 0.0) file_total = static_cast<double>(embeddings.rows());
  Eigen::VectorXd counts = resp.matrix.colwise().sum();
  Eigen::MatrixXd mean_sums = resp.matrix.transpose() * embeddings;
  return LooRowFromStats(embeddings.row(n).transpose(), counts, mean_sums,
                         resp.matrix.row(n).transpose(), resp.active, weights,
                         psi, cfg.duration, file_total);
}

ClusterResult cluster(const Eigen::MatrixXd& embeddings,
                      const Eigen::VectorXd& psi, const ClusterConfig& cfg,
                      const Responsibilities* init,
                      const std::vector<double>* init_weights,
                      double file_total) {
  ValidateClusterConfig(cfg);
  const Eigen::Index n = embeddings.rows();
  if (n < 1) {
    throw Error(ErrorCode::kEmptyInput, "no embeddings to cluster");
  }
  if (psi.size() != embeddings.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "psi dimension does not match the embeddings");
  }

  ClusterResult result;
  if (init != nullptr) {
    ValidateResponsibilities(*init, n);
    result.resp = *init;
  } else {
    result.resp = kmeans_init(embeddings, cfg.max_speakers, cfg.seed);
  }
  const Eigen::Index k = result.resp.matrix.cols();
  if (file_total <= 0.0) file_total = static_cast<double>(n);

  // The first iteration's maximum-likelihood update replaces these before
  // any scoring happens; callers may still seed them (pass two hands over
  // pass one's weights here).
  std::vector<double> weights(static_cast<std::size_t>(k),
                              1.0 / static_cast<double>(k));
  if (init_weights != nullptr) {
    if (init_weights->size() != static_cast<std::size_t>(k)) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "initial weight count does not match the speaker count");
    }
    weights = *init_weights;
  }

  Eigen::VectorXd counts(k);
  Eigen::MatrixXd mean_sums(k, embeddings.cols());
  for (int iteration = 1; iteration <= cfg.max_iterations; ++iteration) {
    counts = result.resp.matrix.colwise().sum();
    mean_sums = result.resp.matrix.transpose() * embeddings;

    // Maximum-likelihood weights, then pruning. The largest weight always
    // survives and a pruned speaker never comes back.
    Eigen::VectorXd raw = counts / static_cast<double>(n);
    bool any_survivor = false;
    for (Eigen::Index i = 0; i < k; ++i) {
      bool keep = result.resp.active[static_cast<std::size_t>(i)] &&
                  raw(i) >= cfg.prune_threshold;
      result.resp.active[static_cast<std::size_t>(i)] = keep ? 1 : 0;
      any_survivor = any_survivor || keep;
    }
    if (!any_survivor) {
      Eigen::Index top = 0;
      raw.maxCoeff(&top);
      result.resp.active[static_cast<std::size_t>(top)] = 1;
    }
    double weight_total = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (result.resp.active[static_cast<std::size_t>(i)]) {
        weight_total += raw(i);
      }
    }
    int active_count = 0;
    for (Eigen::Index i = 0; i < k; ++i) {
      bool is_active = result.resp.active[static_cast<std::size_t>(i)] != 0;
      weights[static_cast<std::size_t>(i)] =
          is_active ? raw(i) / weight_total : 0.0;
      active_count += is_active ? 1 : 0;
    }

    // Leave-one-out refresh of every row against the frozen snapshot.
    Eigen::MatrixXd updated(n, k);
    for (Eigen::Index row = 0; row < n; ++row) {
      updated.row(row) =
          LooRowFromStats(embeddings.row(row).transpose(), counts, mean_sums,
                          result.resp.matrix.row(row).transpose(),
                          result.resp.active, weights, psi, cfg.duration,
                          file_total)
              .transpose();
    }
    double max_change = (updated - result.resp.matrix).cwiseAbs().maxCoeff();
    result.resp.matrix = std::move(updated);
    result.log.push_back({iteration, active_count, max_change});
    if (max_change < cfg.posterior_change_tol) break;
  }

  // Final models: enrolled from the returned responsibilities, weighted by
  // the last maximum-likelihood update.
  counts = result.resp.matrix.colwise().sum();
  mean_sums = result.resp.matrix.transpose() * embeddings;
  result.models.resize(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) {
    auto idx = static_cast<std::size_t>(i);
    if (result.resp.active[idx]) {
      result.models[idx] = enroll_speaker(counts(i), mean_sums.row(i).transpose(),
                                          psi, cfg.duration, file_total);
      result.models[idx].weight = weights[idx];
    } else {
      result.models[idx].mean = Eigen::VectorXd::Zero(psi.size());
      result.models[idx].cov = psi;
      result.models[idx].weight = 0.0;
      result.models[idx].eff_count = 0.0;
    }
  }
  return result;
}

}  // namespace lgp
