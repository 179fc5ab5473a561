// benchmarks/bench_lgp.cpp

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

#include <vector>

#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "lgp/cluster.hpp"
#include "lgp/duration.hpp"
#include "lgp/plda.hpp"
#include "lgp/random.hpp"
#include "lgp/scoring.hpp"
#include "lgp/synth.hpp"
#include "lgp/two_pass.hpp"

namespace {

lgp::SynthConfig BenchSynthConfig(int speakers, uint64_t seed) {
  lgp::SynthConfig cfg;
  cfg.num_speakers = speakers;
  cfg.dim = 16;
  cfg.psi = Eigen::VectorXd::Constant(16, 25.0);
  cfg.r = 0.0;
  cfg.frame_step = 0.25;
  cfg.turn_mean = 10.0;
  cfg.file_length = 60.0;
  cfg.seed = seed;
  return cfg;
}

void BM_NeffTable(benchmark::State& state) {
  for (auto _ : state) {
    double total = 0.0;
    for (int n = 1; n <= 50; ++n) {
      total += lgp::neff_discrete(n, 0.9);
      total += lgp::neff_continuous(n, 0.9);
      total += lgp::neff_limit(n, 0.9);
    }
    benchmark::DoNotOptimize(total);
  }
}
BENCHMARK(BM_NeffTable);

void BM_Diagonalize(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  lgp::Rng rng(42);
  Eigen::MatrixXd a(d, d), b(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      a(i, j) = rng.Gaussian();
      b(i, j) = rng.Gaussian();
    }
  }
  const Eigen::MatrixXd wc =
      a * a.transpose() + 0.1 * Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd ac =
      b * b.transpose() + 0.1 * Eigen::MatrixXd::Identity(d, d);
  for (auto _ : state) {
    const lgp::PldaParams plda = lgp::simultaneous_diagonalize(wc, ac);
    benchmark::DoNotOptimize(plda.psi.sum());
  }
}
BENCHMARK(BM_Diagonalize)->Arg(64)->Arg(128)->Arg(256);

void BM_LooRow(benchmark::State& state) {
  const int n = 240;
  const int k = 10;
  const int d = 16;
  lgp::Rng rng(7);
  Eigen::MatrixXd emb(n, d);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < d; ++c) {
      emb(i, c) = rng.Gaussian();
    }
  }
  const Eigen::VectorXd psi = Eigen::VectorXd::Constant(d, 25.0);
  lgp::Responsibilities resp;
  resp.matrix.resize(n, k);
  resp.active.assign(k, 1);
  for (int i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < k; ++j) {
      resp.matrix(i, j) = 0.05 + rng.Uniform();
      row_sum += resp.matrix(i, j);
    }
    resp.matrix.row(i) /= row_sum;
  }
  const std::vector<double> weights(k, 1.0 / k);
  lgp::ClusterConfig cfg;
  cfg.duration.r = 0.9;
  int row = 0;
  for (auto _ : state) {
    const Eigen::VectorXd posterior =
        lgp::loo_posteriors(row, emb, resp, psi, weights, cfg, 0.0);
    benchmark::DoNotOptimize(posterior.sum());
    row = (row + 1) % n;
  }
}
BENCHMARK(BM_LooRow);

void BM_ClusterFile(benchmark::State& state) {
  const lgp::Conversation conv =
      lgp::sample_conversation(BenchSynthConfig(3, 11));
  const std::vector<lgp::Segment> segs = lgp::segment_timeline(
      {{"bench", 0.0, 60.0}}, lgp::PassConfig{0.75, 0.25, 20});
  Eigen::MatrixXd emb(static_cast<Eigen::Index>(segs.size()), 16);
  for (std::size_t i = 0; i < segs.size(); ++i) {
    emb.row(static_cast<Eigen::Index>(i)) =
        lgp::window_embedding(conv, segs[i].start, segs[i].duration)
            .transpose();
  }
  const Eigen::VectorXd psi = Eigen::VectorXd::Constant(16, 25.0);
  lgp::ClusterConfig cfg;
  cfg.max_speakers = 10;
  cfg.prune_threshold = 0.01;
  cfg.duration.r = 0.9;
  for (auto _ : state) {
    const lgp::ClusterResult result = lgp::cluster(emb, psi, cfg);
    benchmark::DoNotOptimize(result.resp.matrix.sum());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(segs.size()));
}
BENCHMARK(BM_ClusterFile);

void BM_ScoreDer(benchmark::State& state) {
  const lgp::Conversation ref_conv =
      lgp::sample_conversation(BenchSynthConfig(4, 21));
  const lgp::Conversation hyp_conv =
      lgp::sample_conversation(BenchSynthConfig(4, 22));
  const std::vector<lgp::RttmRecord> ref = lgp::truth_rttm(ref_conv, "bench");
  const std::vector<lgp::RttmRecord> hyp = lgp::truth_rttm(hyp_conv, "bench");
  const lgp::DerOptions opts{0.25, true};
  for (auto _ : state) {
    const lgp::DerBreakdown breakdown = lgp::score_der(ref, hyp, opts);
    benchmark::DoNotOptimize(breakdown.der);
  }
}
BENCHMARK(BM_ScoreDer);

}  // namespace

BENCHMARK_MAIN();
