// tests/test_cluster.cpp

// Copyright  2026  LGP Project Authors

// See ../COPYING for clarification regarding multiple authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "lgp/cluster.hpp"
#include "lgp/duration.hpp"
#include "lgp/error.hpp"
#include "lgp/random.hpp"

using lgp::ClusterConfig;
using lgp::ClusterResult;
using lgp::DurationConfig;
using lgp::Error;
using lgp::ErrorCode;
using lgp::Responsibilities;
using lgp::SpeakerModel;

namespace {

Eigen::MatrixXd TwoClouds(int per_cloud, int dim, double separation,
                          double noise, lgp::Rng& rng) {
  Eigen::MatrixXd z(2 * per_cloud, dim);
  for (int i = 0; i < 2 * per_cloud; ++i) {
    const double center = i < per_cloud ? separation : -separation;
    for (int d = 0; d < dim; ++d) {
      z(i, d) = center + noise * rng.Gaussian();
    }
  }
  return z;
}

// Leave-one-out posteriors recomputed from scratch, without the statistics
// subtraction the library uses.
Eigen::VectorXd BruteForceLoo(Eigen::Index n, const Eigen::MatrixXd& z,
                              const Responsibilities& resp,
                              const Eigen::VectorXd& psi,
                              const std::vector<double>& weights,
                              const ClusterConfig& cfg, double file_total) {
  const Eigen::Index big_n = z.rows();
  const Eigen::Index k = resp.matrix.cols();
  const double total =
      file_total > 0.0 ? file_total : static_cast<double>(big_n);
  Eigen::VectorXd scores =
      Eigen::VectorXd::Constant(k, -std::numeric_limits<double>::infinity());
  for (Eigen::Index j = 0; j < k; ++j) {
    if (!resp.active[static_cast<std::size_t>(j)]) {
      continue;
    }
    double count = 0.0;
    Eigen::VectorXd mean_sum = Eigen::VectorXd::Zero(z.cols());
    for (Eigen::Index i = 0; i < big_n; ++i) {
      if (i == n) {
        continue;
      }
      count += resp.matrix(i, j);
      mean_sum += resp.matrix(i, j) * z.row(i).transpose();
    }
    const SpeakerModel model =
        lgp::enroll_speaker(count, mean_sum, psi, cfg.duration, total);
    SpeakerModel scored = model;
    scored.weight = 1.0;  // keep the density term; the weight enters below
    scores(j) = std::log(std::max(weights[static_cast<std::size_t>(j)],
                                  1e-300)) +
                lgp::log_predictive(z.row(n).transpose(), scored);
  }
  double max_score = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < k; ++j) {
    if (resp.active[static_cast<std::size_t>(j)]) {
      max_score = std::max(max_score, scores(j));
    }
  }
  double norm = 0.0;
  Eigen::VectorXd row = Eigen::VectorXd::Zero(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    if (!resp.active[static_cast<std::size_t>(j)]) {
      continue;
    }
    row(j) = std::max(std::exp(scores(j) - max_score), 1e-300);
    norm += row(j);
  }
  return row / norm;
}

}  // namespace

TEST_CASE("zero or negative counts enroll the prior") {
  Eigen::VectorXd psi(3);
  psi << 4.0, 2.0, 1.0;
  const SpeakerModel prior = lgp::enroll_speaker(
      0.0, Eigen::VectorXd::Zero(3), psi, DurationConfig{}, 100.0);
  CHECK(prior.mean.cwiseAbs().maxCoeff() == 0.0);
  CHECK((prior.cov - psi).cwiseAbs().maxCoeff() == 0.0);
  CHECK(prior.eff_count == 0.0);
}

TEST_CASE("a single uncorrelated observation shrinks by psi/(psi+1)") {
  Eigen::VectorXd psi = Eigen::VectorXd::Constant(1, 4.0);
  Eigen::VectorXd sum = Eigen::VectorXd::Constant(1, 2.5);
  DurationConfig duration;
  duration.r = 0.0;
  const SpeakerModel m = lgp::enroll_speaker(1.0, sum, psi, duration, 50.0);
  CHECK(m.mean(0) == doctest::Approx(0.8 * 2.5).epsilon(1e-14));
  CHECK(m.cov(0) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(m.eff_count == doctest::Approx(1.0));
}

TEST_CASE("uncorrelated enrollment matches the conjugate Gaussian posterior") {
  lgp::Rng rng(404);
  DurationConfig duration;
  duration.r = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    const int d = trial % 2 == 0 ? 1 : 16;
    const double n = 1.0 + rng.UniformInt(12);
    Eigen::VectorXd psi(d);
    Eigen::VectorXd sum(d);
    for (int i = 0; i < d; ++i) {
      psi(i) = 0.5 + 5.0 * rng.Uniform();
      sum(i) = n * (4.0 * rng.Uniform() - 2.0);
    }
    const SpeakerModel m = lgp::enroll_speaker(n, sum, psi, duration, n);
    // With r=0 the noise on the cluster mean is exactly 1/n, so the
    // posterior is the textbook normal-normal update.
    for (int i = 0; i < d; ++i) {
      const double noise = 1.0 / n;
      const double expect_mean = psi(i) / (psi(i) + noise) * (sum(i) / n);
      const double expect_cov = psi(i) * noise / (psi(i) + noise);
      CHECK(m.mean(i) == doctest::Approx(expect_mean).epsilon(1e-12));
      CHECK(m.cov(i) == doctest::Approx(expect_cov).epsilon(1e-12));
    }
  }
}

TEST_CASE("more correlation means a wider posterior") {
  Eigen::VectorXd psi = Eigen::VectorXd::Constant(4, 9.0);
  Eigen::VectorXd sum = Eigen::VectorXd::Constant(4, 10.0);
  double previous = 0.0;
  for (double r : {0.0, 0.5, 0.9}) {
    DurationConfig duration;
    duration.r = r;
    const SpeakerModel m = lgp::enroll_speaker(10.0, sum, psi, duration, 10.0);
    CHECK(m.cov(0) > previous);
    previous = m.cov(0);
  }
}

TEST_CASE("fully correlated duplicates count as one observation") {
  Eigen::VectorXd psi = Eigen::VectorXd::Constant(2, 5.0);
  Eigen::VectorXd z(2);
  z << 1.0, -2.0;
  DurationConfig duration;
  duration.r = 1.0;
  const SpeakerModel one = lgp::enroll_speaker(1.0, z, psi, duration, 100.0);
  const SpeakerModel many = lgp::enroll_speaker(6.0, 6.0 * z, psi, duration, 100.0);
  CHECK((one.mean - many.mean).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((one.cov - many.cov).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("count scaling against the file total matches manual pre-scaling") {
  Eigen::VectorXd psi = Eigen::VectorXd::Constant(3, 7.0);
  Eigen::VectorXd sum = Eigen::VectorXd::Constant(3, 4.0);
  DurationConfig capped;
  capped.r = 0.6;
  capped.n0 = 10.0;
  const SpeakerModel scaled = lgp::enroll_speaker(4.0, sum, psi, capped, 20.0);

  DurationConfig unbounded;
  unbounded.r = 0.6;
  const SpeakerModel manual = lgp::enroll_speaker(2.0, sum, psi, unbounded, 2.0);
  CHECK((scaled.cov - manual.cov).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(scaled.eff_count == doctest::Approx(manual.eff_count));
}

TEST_CASE("log predictive density hits hand-computed values") {
  SpeakerModel m;
  m.mean = Eigen::VectorXd::Constant(1, 1.3);
  m.cov = Eigen::VectorXd::Zero(1);
  m.weight = 0.5;
  // z at the mean with zero model variance: -log(sqrt(2 pi)).
  CHECK(lgp::log_predictive(m.mean, m) ==
        doctest::Approx(-0.9189385332046727).epsilon(1e-14));

  m.cov = Eigen::VectorXd::Constant(1, 3.0);
  Eigen::VectorXd z = Eigen::VectorXd::Constant(1, 3.3);  // two away from mean
  // -(1/2) (log(2 pi * 4) + 4/4)
  CHECK(lgp::log_predictive(z, m) ==
        doctest::Approx(-2.112085713764618).epsilon(1e-14));
}

TEST_CASE("log predictive factorizes over coordinates") {
  SpeakerModel joint;
  joint.mean = Eigen::VectorXd(2);
  joint.mean << 0.5, -1.0;
  joint.cov = Eigen::VectorXd(2);
  joint.cov << 0.25, 2.0;
  joint.weight = 1.0;
  Eigen::VectorXd z(2);
  z << 1.0, 1.0;

  double sum = 0.0;
  for (int d = 0; d < 2; ++d) {
    SpeakerModel part;
    part.mean = joint.mean.segment(d, 1);
    part.cov = joint.cov.segment(d, 1);
    part.weight = 1.0;
    sum += lgp::log_predictive(z.segment(d, 1), part);
  }
  CHECK(lgp::log_predictive(z, joint) == doctest::Approx(sum).epsilon(1e-14));
}

TEST_CASE("log predictive equals numerical marginalization in 1-D") {
  DurationConfig duration;
  duration.r = 0.4;
  Eigen::VectorXd psi = Eigen::VectorXd::Constant(1, 2.0);
  Eigen::VectorXd sum = Eigen::VectorXd::Constant(1, 2.1);
  const SpeakerModel model = lgp::enroll_speaker(3.0, sum, psi, duration, 3.0);

  for (double z : {-1.0, 0.2, 1.5}) {
    // Trapezoid integration of N(z; mu, 1) N(mu; m, c) over mu.
    const double m = model.mean(0);
    const double c = model.cov(0);
    const double lo = m - 10.0 * std::sqrt(c) - 10.0;
    const double hi = m + 10.0 * std::sqrt(c) + 10.0;
    const int steps = 200000;
    const double h = (hi - lo) / steps;
    double integral = 0.0;
    for (int i = 0; i <= steps; ++i) {
      const double mu = lo + i * h;
      const double f =
          std::exp(-0.5 * (z - mu) * (z - mu)) / std::sqrt(2.0 * M_PI) *
          std::exp(-0.5 * (mu - m) * (mu - m) / c) / std::sqrt(2.0 * M_PI * c);
      integral += (i == 0 || i == steps) ? 0.5 * f : f;
    }
    integral *= h;
    const Eigen::VectorXd zv = Eigen::VectorXd::Constant(1, z);
    CHECK(lgp::log_predictive(zv, model) ==
          doctest::Approx(std::log(integral)).epsilon(1e-6));
  }
}

TEST_CASE("inactive speakers cannot be scored") {
  SpeakerModel m;
  m.mean = Eigen::VectorXd::Zero(1);
  m.cov = Eigen::VectorXd::Ones(1);
  m.weight = 0.0;
  try {
    lgp::log_predictive(Eigen::VectorXd::Zero(1), m);
    FAIL("expected InactiveSpeaker");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInactiveSpeaker);
  }
}

TEST_CASE("statistics-subtraction LOO equals from-scratch re-enrollment") {
  lgp::Rng rng(515);
  ClusterConfig cfg;
  cfg.duration.r = 0.8;
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index n = 5 + static_cast<Eigen::Index>(rng.UniformInt(15));
    const Eigen::Index k = 2 + static_cast<Eigen::Index>(rng.UniformInt(4));
    const int d = 1 + static_cast<int>(rng.UniformInt(8));
    Eigen::MatrixXd z(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (int j = 0; j < d; ++j) {
        z(i, j) = 3.0 * rng.Gaussian();
      }
    }
    Eigen::VectorXd psi(d);
    for (int j = 0; j < d; ++j) {
      psi(j) = 0.5 + 8.0 * rng.Uniform();
    }
    Responsibilities resp;
    resp.matrix.resize(n, k);
    for (Eigen::Index i = 0; i < n; ++i) {
      double total = 0.0;
      for (Eigen::Index j = 0; j < k; ++j) {
        resp.matrix(i, j) = 0.05 + rng.Uniform();
        total += resp.matrix(i, j);
      }
      resp.matrix.row(i) /= total;
    }
    resp.active.assign(static_cast<std::size_t>(k), 1);
    std::vector<double> weights(static_cast<std::size_t>(k));
    double wsum = 0.0;
    for (double& w : weights) {
      w = 0.1 + rng.Uniform();
      wsum += w;
    }
    for (double& w : weights) {
      w /= wsum;
    }

    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::VectorXd fast =
          lgp::loo_posteriors(i, z, resp, psi, weights, cfg, 0.0);
      const Eigen::VectorXd slow =
          BruteForceLoo(i, z, resp, psi, weights, cfg, 0.0);
      CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("LOO rows leave pruned columns at zero") {
  lgp::Rng rng(77);
  Eigen::MatrixXd z(6, 2);
  for (Eigen::Index i = 0; i < 6; ++i) {
    z(i, 0) = rng.Gaussian();
    z(i, 1) = rng.Gaussian();
  }
  Responsibilities resp;
  resp.matrix.resize(6, 3);
  resp.matrix.setZero();
  for (Eigen::Index i = 0; i < 6; ++i) {
    resp.matrix(i, i % 2 == 0 ? 0 : 2) = 1.0;
  }
  resp.active = {1, 0, 1};
  const std::vector<double> weights = {0.5, 0.0, 0.5};
  ClusterConfig cfg;
  const Eigen::VectorXd row = lgp::loo_posteriors(
      0, z, resp, Eigen::VectorXd::Constant(2, 4.0), weights, cfg, 0.0);
  CHECK(row(1) == 0.0);
  CHECK(row.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("kmeans gives every point its own cluster when N <= k") {
  Eigen::MatrixXd z(4, 2);
  z << 0, 0, 1, 0, 0, 1, 1, 1;
  const Responsibilities resp = lgp::kmeans_init(z, 10, 3);
  REQUIRE(resp.matrix.rows() == 4);
  REQUIRE(resp.matrix.cols() == 10);
  for (Eigen::Index i = 0; i < 4; ++i) {
    CHECK(resp.matrix(i, i) == 1.0);
    CHECK(resp.matrix.row(i).sum() == doctest::Approx(1.0));
  }
}

TEST_CASE("kmeans separates well-spread clouds") {
  lgp::Rng rng(21);
  const Eigen::MatrixXd z = TwoClouds(12, 3, 6.0, 0.3, rng);
  const Responsibilities resp = lgp::kmeans_init(z, 2, 5);
  std::set<Eigen::Index> first;
  std::set<Eigen::Index> second;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    Eigen::Index label = 0;
    resp.matrix.row(i).maxCoeff(&label);
    (i < 12 ? first : second).insert(label);
  }
  CHECK(first.size() == 1);
  CHECK(second.size() == 1);
  CHECK(*first.begin() != *second.begin());
}

TEST_CASE("kmeans is deterministic for a fixed seed") {
  lgp::Rng rng(9);
  const Eigen::MatrixXd z = TwoClouds(10, 4, 4.0, 1.0, rng);
  const Responsibilities a = lgp::kmeans_init(z, 4, 123);
  const Responsibilities b = lgp::kmeans_init(z, 4, 123);
  CHECK((a.matrix - b.matrix).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("clustering two separated speakers keeps exactly two active") {
  lgp::Rng rng(63);
  const Eigen::MatrixXd z = TwoClouds(20, 4, 5.0, 1.0, rng);
  ClusterConfig cfg;
  cfg.max_speakers = 10;
  // Ten starting clusters on forty points need a few extra sweeps before the
  // duplicates drain below the prune threshold.
  cfg.max_iterations = 40;
  cfg.prune_threshold = 0.01;
  cfg.duration.r = 0.9;
  cfg.seed = 1;
  const ClusterResult result =
      lgp::cluster(z, Eigen::VectorXd::Constant(4, 25.0), cfg);

  int active = 0;
  for (char flag : result.resp.active) {
    active += flag ? 1 : 0;
  }
  CHECK(active == 2);

  // All rows of one cloud agree on a label and the clouds disagree.
  std::set<Eigen::Index> first;
  std::set<Eigen::Index> second;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    Eigen::Index label = 0;
    result.resp.matrix.row(i).maxCoeff(&label);
    (i < 20 ? first : second).insert(label);
  }
  CHECK(first.size() == 1);
  CHECK(second.size() == 1);
  CHECK(*first.begin() != *second.begin());

  double weight_sum = 0.0;
  for (const SpeakerModel& m : result.models) {
    weight_sum += m.weight;
  }
  CHECK(weight_sum == doctest::Approx(1.0).epsilon(1e-12));

  // Responsibility rows stay normalized and the active count never grows.
  for (Eigen::Index i = 0; i < result.resp.matrix.rows(); ++i) {
    CHECK(result.resp.matrix.row(i).sum() == doctest::Approx(1.0).epsilon(1e-9));
  }
  for (std::size_t t = 1; t < result.log.size(); ++t) {
    CHECK(result.log[t].active_speakers <= result.log[t - 1].active_speakers);
  }

  const ClusterResult rerun =
      lgp::cluster(z, Eigen::VectorXd::Constant(4, 25.0), cfg);
  CHECK((rerun.resp.matrix - result.resp.matrix).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("a single segment collapses to one active speaker") {
  Eigen::MatrixXd z(1, 3);
  z << 1.0, -1.0, 0.5;
  ClusterConfig cfg;
  cfg.max_speakers = 10;
  cfg.prune_threshold = 0.01;
  const ClusterResult result =
      lgp::cluster(z, Eigen::VectorXd::Constant(3, 9.0), cfg);
  int active = 0;
  for (char flag : result.resp.active) {
    active += flag ? 1 : 0;
  }
  CHECK(active == 1);
  CHECK(result.resp.matrix.row(0).maxCoeff() == doctest::Approx(1.0));
}

TEST_CASE("weights follow the responsibility masses") {
  lgp::Rng rng(30);
  Eigen::MatrixXd z(10, 2);
  for (Eigen::Index i = 0; i < 10; ++i) {
    const double c = i < 6 ? 4.0 : -4.0;
    z(i, 0) = c + 0.1 * rng.Gaussian();
    z(i, 1) = c + 0.1 * rng.Gaussian();
  }
  Responsibilities init;
  init.matrix.resize(10, 2);
  init.matrix.setZero();
  for (Eigen::Index i = 0; i < 10; ++i) {
    init.matrix(i, i < 6 ? 0 : 1) = 1.0;
  }
  init.active = {1, 1};
  ClusterConfig cfg;
  cfg.max_speakers = 2;
  cfg.max_iterations = 1;
  const ClusterResult result =
      lgp::cluster(z, Eigen::VectorXd::Constant(2, 25.0), cfg, &init);
  CHECK(result.models[0].weight == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(result.models[1].weight == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("speakers below the weight threshold are pruned for good") {
  lgp::Rng rng(88);
  Eigen::MatrixXd z(40, 2);
  for (Eigen::Index i = 0; i < 40; ++i) {
    z(i, 0) = 2.0 + 0.2 * rng.Gaussian();
    z(i, 1) = -1.0 + 0.2 * rng.Gaussian();
  }
  Responsibilities init;
  init.matrix.resize(40, 2);
  init.matrix.setZero();
  for (Eigen::Index i = 0; i < 40; ++i) {
    init.matrix(i, i == 0 ? 1 : 0) = 1.0;
  }
  init.active = {1, 1};
  ClusterConfig cfg;
  cfg.max_speakers = 2;
  cfg.prune_threshold = 0.05;  // cluster 1 holds 1/40 = 0.025 of the mass
  cfg.max_iterations = 5;
  const ClusterResult result =
      lgp::cluster(z, Eigen::VectorXd::Constant(2, 16.0), cfg, &init);
  CHECK(result.resp.active[0] == 1);
  CHECK(result.resp.active[1] == 0);
  CHECK(result.models[1].weight == 0.0);
  for (Eigen::Index i = 0; i < 40; ++i) {
    CHECK(result.resp.matrix(i, 1) == 0.0);
    CHECK(result.resp.matrix(i, 0) == doctest::Approx(1.0));
  }
}

TEST_CASE("duplicating a segment never hurts its posterior at r=1") {
  lgp::Rng rng(14);
  const Eigen::MatrixXd z = TwoClouds(4, 2, 3.0, 0.5, rng);
  ClusterConfig cfg;
  cfg.max_speakers = 4;
  cfg.prune_threshold = 0.05;
  cfg.duration.r = 1.0;
  cfg.seed = 2;
  const ClusterResult before =
      lgp::cluster(z, Eigen::VectorXd::Constant(2, 9.0), cfg);
  const double top_before = before.resp.matrix.row(0).maxCoeff();

  Eigen::MatrixXd extended(z.rows() + 1, z.cols());
  extended.topRows(z.rows()) = z;
  extended.row(z.rows()) = z.row(0);
  const ClusterResult after =
      lgp::cluster(extended, Eigen::VectorXd::Constant(2, 9.0), cfg);
  const double top_after = after.resp.matrix.row(0).maxCoeff();
  CHECK(top_after >= top_before - 1e-9);
}

TEST_CASE("empty input is rejected") {
  Eigen::MatrixXd z(0, 3);
  ClusterConfig cfg;
  try {
    lgp::cluster(z, Eigen::VectorXd::Constant(3, 4.0), cfg);
    FAIL("expected EmptyInput");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyInput);
  }
}
