// tools/lgp_main.cpp

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

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "lgp/cluster.hpp"
#include "lgp/duration.hpp"
#include "lgp/error.hpp"
#include "lgp/io_formats.hpp"
#include "lgp/plda.hpp"
#include "lgp/scoring.hpp"
#include "lgp/synth.hpp"
#include "lgp/two_pass.hpp"

namespace {

struct NeffArgs {
  double r = 0.9;
  int max_n = 50;
};

int RunNeff(const NeffArgs& args) {
  std::printf("%6s %14s %14s %14s\n", "N", "discrete", "limit", "continuous");
  for (int n = 1; n <= args.max_n; ++n) {
    std::printf("%6d %14.6f %14.6f %14.6f\n", n, lgp::neff_discrete(n, args.r),
                lgp::neff_limit(static_cast<double>(n), args.r),
                lgp::neff_continuous(static_cast<double>(n), args.r));
  }
  return 0;
}

struct SynthArgs {
  int num_speakers = 2;
  int dim = 16;
  double psi = 25.0;
  double frame_r = 0.0;
  double frame_step = 0.25;
  double turn_mean = 5.0;
  double file_length = 60.0;
  std::uint64_t seed = 0;
  std::string recording_id = "synth";
  std::string out_embeddings;
  std::string out_rttm;
  std::string out_sad;
  std::string out_plda;
  double cal_window = 2.0;
  int cal_speakers = 1500;
  int cal_windows = 8;
  double within_smoothing = 1.0;
  std::uint64_t cal_seed = 777;
};

int RunSynth(const SynthArgs& args) {
  lgp::SynthConfig cfg;
  cfg.num_speakers = args.num_speakers;
  cfg.dim = args.dim;
  cfg.psi = Eigen::VectorXd::Constant(args.dim, args.psi);
  cfg.r = args.frame_r;
  cfg.frame_step = args.frame_step;
  cfg.turn_mean = args.turn_mean;
  cfg.file_length = args.file_length;
  cfg.seed = args.seed;

  const lgp::Conversation conv = lgp::sample_conversation(cfg);

  lgp::EmbeddingTable table;
  table.dim = cfg.dim;
  table.frame_step = cfg.frame_step;
  table.start_offset = 0.0;
  table.rows = conv.frames;
  lgp::write_embedding_table(args.out_embeddings, table);
  lgp::write_rttm(args.out_rttm, lgp::truth_rttm(conv, args.recording_id));
  if (!args.out_sad.empty()) {
    lgp::write_sad(args.out_sad,
                   {{args.recording_id, 0.0, cfg.file_length}});
  }
  if (!args.out_plda.empty()) {
    lgp::CalibrationConfig cal;
    cal.window = args.cal_window;
    cal.num_speakers = args.cal_speakers;
    cal.windows_per_speaker = args.cal_windows;
    cal.within_smoothing = args.within_smoothing;
    const lgp::CalibratedPlda plda = lgp::calibrate_plda(cfg, cal, args.cal_seed);
    lgp::write_plda_text(args.out_plda, plda.sigma_wc, plda.sigma_ac);
  }
  return 0;
}

struct ScoreArgs {
  std::string ref_path;
  std::string hyp_path;
  double collar = 0.0;
  bool ignore_overlap = false;
};

void PrintBreakdown(const std::string& name, const lgp::DerBreakdown& b) {
  std::printf("%-24s missed=%.3f falarm=%.3f confusion=%.3f scored=%.3f der=%.2f%%\n",
              name.c_str(), b.missed, b.false_alarm, b.confusion,
              b.scored_total, 100.0 * b.der);
}

int RunScore(const ScoreArgs& args) {
  const std::vector<lgp::RttmRecord> ref = lgp::read_rttm(args.ref_path);
  const std::vector<lgp::RttmRecord> hyp = lgp::read_rttm(args.hyp_path);

  std::vector<std::string> order;
  std::map<std::string, std::vector<lgp::RttmRecord>> ref_by_rec;
  std::map<std::string, std::vector<lgp::RttmRecord>> hyp_by_rec;
  for (const lgp::RttmRecord& rec : ref) {
    if (ref_by_rec.find(rec.recording_id) == ref_by_rec.end()) {
      order.push_back(rec.recording_id);
    }
    ref_by_rec[rec.recording_id].push_back(rec);
  }
  for (const lgp::RttmRecord& rec : hyp) {
    if (ref_by_rec.find(rec.recording_id) == ref_by_rec.end()) {
      throw lgp::Error(lgp::ErrorCode::kRecordingMismatch,
                       "hypothesis recording " + rec.recording_id +
                           " has no reference");
    }
    hyp_by_rec[rec.recording_id].push_back(rec);
  }

  lgp::DerOptions opts;
  opts.collar = args.collar;
  opts.score_overlap = !args.ignore_overlap;

  std::vector<lgp::DerBreakdown> parts;
  parts.reserve(order.size());
  for (const std::string& rec : order) {
    const lgp::DerBreakdown part =
        lgp::score_der(ref_by_rec[rec], hyp_by_rec[rec], opts);
    if (order.size() > 1) {
      PrintBreakdown(rec, part);
    }
    parts.push_back(part);
  }
  PrintBreakdown(order.size() > 1 ? "TOTAL" : order.front(),
                 lgp::aggregate_der(parts));
  return 0;
}

struct DiarizeArgs {
  std::string plda_path;
  std::string embeddings_path;
  std::string embeddings2_path;
  std::string sad_path;
  std::string out_path;
  std::string recording_id;
  std::string manifest_path;
  int jobs = 0;  // 0 picks the hardware thread count
  double r = 0.9;
  std::string n0 = "none";
  int max_speakers = 10;
  std::uint64_t seed = 0;
  double pass1_window = 2.0;
  double pass1_step = 2.0;
  int pass1_iterations = 20;
  double pass2_window = 1.25;
  double pass2_step = 0.25;
  int pass2_iterations = 2;
  bool no_pass2 = false;
  double prune_threshold = 1e-3;
  double tol = 1e-4;
};

struct JobSpec {
  std::string recording_id;
  std::string embeddings;
  std::string sad;
  std::string out;
  std::string embeddings2;  // empty reuses the pass-one table
};

lgp::TwoPassConfig MakeConfig(const DiarizeArgs& args) {
  lgp::TwoPassConfig cfg;
  cfg.pass1 = {args.pass1_window, args.pass1_step, args.pass1_iterations};
  cfg.pass2 = {args.pass2_window, args.pass2_step, args.pass2_iterations};
  cfg.pass2_enabled = !args.no_pass2;
  cfg.cluster.max_speakers = args.max_speakers;
  cfg.cluster.posterior_change_tol = args.tol;
  cfg.cluster.prune_threshold = args.prune_threshold;
  cfg.cluster.seed = args.seed;
  cfg.cluster.duration.r = args.r;
  if (args.n0 == "none") {
    cfg.cluster.duration.n0 = std::numeric_limits<double>::infinity();
  } else {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(args.n0, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != args.n0.size() || !(value > 0.0)) {
      throw lgp::Error(lgp::ErrorCode::kParseError,
                       "--n0 expects a positive number or \"none\"");
    }
    cfg.cluster.duration.n0 = value;
  }
  return cfg;
}

void AppendLog(std::ostringstream& out, const std::string& rec,
               const char* pass, const std::vector<lgp::IterationStats>& log) {
  for (const lgp::IterationStats& it : log) {
    out << rec << " " << pass << " iter " << it.iteration << " active "
        << it.active_speakers << " change " << it.max_change << "\n";
  }
}

std::string RunOneRecording(const JobSpec& job, const lgp::PldaParams& plda,
                            const lgp::TwoPassConfig& cfg) {
  const lgp::EmbeddingTable table1 = lgp::read_embedding_table(job.embeddings);
  const lgp::FrameAggregatorSource src1(table1);
  std::optional<lgp::FrameAggregatorSource> src2;
  if (!job.embeddings2.empty()) {
    src2.emplace(lgp::read_embedding_table(job.embeddings2));
  }

  std::vector<lgp::SadRegion> regions;
  for (const lgp::SadRegion& region : lgp::read_sad(job.sad)) {
    if (region.recording_id == job.recording_id) {
      regions.push_back(region);
    }
  }

  const lgp::DiarizeResult result =
      lgp::diarize(src1, src2 ? &*src2 : nullptr, regions, plda, cfg,
                   job.recording_id);
  lgp::write_rttm(job.out, result.records);

  std::ostringstream log;
  AppendLog(log, job.recording_id, "pass1", result.pass1_log);
  AppendLog(log, job.recording_id, "pass2", result.pass2_log);
  return log.str();
}

std::vector<JobSpec> ReadManifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw lgp::Error(lgp::ErrorCode::kParseError,
                     "cannot open manifest " + path);
  }
  std::vector<JobSpec> jobs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    JobSpec job;
    if (!(fields >> job.recording_id)) {
      continue;  // blank line
    }
    if (job.recording_id[0] == '#') {
      continue;
    }
    if (!(fields >> job.embeddings >> job.sad >> job.out)) {
      throw lgp::Error(lgp::ErrorCode::kParseError,
                       "manifest line " + std::to_string(line_no) +
                           ": expected <id> <embeddings> <sad> <out> "
                           "[<pass2 embeddings>]");
    }
    fields >> job.embeddings2;  // optional fifth column
    jobs.push_back(job);
  }
  return jobs;
}

int RunDiarize(const DiarizeArgs& args) {
  const lgp::PldaParams plda = lgp::load_plda_text(args.plda_path);
  const lgp::TwoPassConfig cfg = MakeConfig(args);

  std::vector<JobSpec> jobs;
  if (!args.manifest_path.empty()) {
    jobs = ReadManifest(args.manifest_path);
    if (jobs.empty()) {
      throw lgp::Error(lgp::ErrorCode::kEmptyInput,
                       "manifest lists no recordings");
    }
  } else {
    if (args.embeddings_path.empty() || args.sad_path.empty() ||
        args.out_path.empty() || args.recording_id.empty()) {
      throw lgp::Error(lgp::ErrorCode::kEmptyInput,
                       "need --embeddings, --sad, --out and --recording-id "
                       "(or --manifest)");
    }
    jobs.push_back({args.recording_id, args.embeddings_path, args.sad_path,
                    args.out_path, args.embeddings2_path});
  }

  std::vector<std::string> logs(jobs.size());
  std::vector<std::string> failures(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) {
        return;
      }
      try {
        logs[i] = RunOneRecording(jobs[i], plda, cfg);
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };

  unsigned thread_count = args.jobs > 0
                              ? static_cast<unsigned>(args.jobs)
                              : std::max(1u, std::thread::hardware_concurrency());
  thread_count = std::min<unsigned>(thread_count,
                                    static_cast<unsigned>(jobs.size()));
  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (unsigned t = 0; t < thread_count; ++t) {
      pool.emplace_back(worker);
    }
    for (std::thread& t : pool) {
      t.join();
    }
  }

  int status = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!failures[i].empty()) {
      std::cerr << jobs[i].recording_id << ": " << failures[i] << "\n";
      status = 1;
    } else {
      std::cerr << logs[i];
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-pass leave-one-out Gaussian PLDA diarization toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "INI file with defaults; command line flags win");

  NeffArgs neff_args;
  CLI::App* neff = app.add_subcommand(
      "neff", "Print effective sample size approximations for correlated counts");
  neff->add_option("--r", neff_args.r, "Within-speaker correlation")
      ->capture_default_str();
  neff->add_option("--max-n", neff_args.max_n, "Largest count to tabulate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand(
      "synth", "Generate a synthetic conversation with ground truth");
  synth->add_option("--speakers", synth_args.num_speakers, "Speakers in the pool")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--dim", synth_args.dim, "Embedding dimension")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--psi", synth_args.psi,
                    "Across-class variance per coordinate")
      ->capture_default_str();
  synth->add_option("--frame-r", synth_args.frame_r,
                    "Frame-to-frame channel correlation")
      ->capture_default_str();
  synth->add_option("--frame-step", synth_args.frame_step,
                    "Seconds between frame embeddings")
      ->capture_default_str();
  synth->add_option("--turn-mean", synth_args.turn_mean,
                    "Mean speaker turn length, seconds")
      ->capture_default_str();
  synth->add_option("--length", synth_args.file_length,
                    "Conversation length, seconds")
      ->capture_default_str();
  synth->add_option("--seed", synth_args.seed, "Generator seed")
      ->capture_default_str();
  synth->add_option("--recording-id", synth_args.recording_id,
                    "Recording id used in outputs")
      ->capture_default_str();
  synth->add_option("--out-embeddings", synth_args.out_embeddings,
                    "Frame embedding table path")
      ->required();
  synth->add_option("--out-rttm", synth_args.out_rttm, "Ground truth RTTM path")
      ->required();
  synth->add_option("--out-sad", synth_args.out_sad,
                    "Speech activity file path (whole file is speech)");
  synth->add_option("--out-plda", synth_args.out_plda,
                    "Write a matched PLDA model calibrated by simulation");
  synth->add_option("--cal-window", synth_args.cal_window,
                    "Calibration aggregation window, seconds")
      ->capture_default_str();
  synth->add_option("--cal-speakers", synth_args.cal_speakers,
                    "Simulated speakers for calibration")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--cal-windows", synth_args.cal_windows,
                    "Windows per simulated speaker")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--within-smoothing", synth_args.within_smoothing,
                    "Multiplier on the calibrated within-class covariance")
      ->capture_default_str();
  synth->add_option("--cal-seed", synth_args.cal_seed, "Calibration seed")
      ->capture_default_str();

  ScoreArgs score_args;
  CLI::App* score =
      app.add_subcommand("score", "Score a hypothesis RTTM against a reference");
  score->add_option("--ref", score_args.ref_path, "Reference RTTM")->required();
  score->add_option("--hyp", score_args.hyp_path, "Hypothesis RTTM")->required();
  score->add_option("--collar", score_args.collar,
                    "No-score collar around reference boundaries, seconds")
      ->capture_default_str();
  score->add_flag("--ignore-overlap", score_args.ignore_overlap,
                  "Exclude regions where the reference has overlapped speech");

  DiarizeArgs diarize_args;
  CLI::App* diarize =
      app.add_subcommand("diarize", "Run two-pass diarization on one or more "
                                    "recordings");
  diarize->add_option("--plda", diarize_args.plda_path, "PLDA model file")
      ->required();
  diarize->add_option("--embeddings", diarize_args.embeddings_path,
                      "Frame embedding table (pass one)");
  diarize->add_option("--embeddings2", diarize_args.embeddings2_path,
                      "Frame embedding table for pass two (defaults to pass "
                      "one table)");
  diarize->add_option("--sad", diarize_args.sad_path, "Speech activity file");
  diarize->add_option("--out", diarize_args.out_path, "Hypothesis RTTM path");
  diarize->add_option("--recording-id", diarize_args.recording_id,
                      "Recording id to diarize");
  diarize->add_option("--manifest", diarize_args.manifest_path,
                      "Batch file: <id> <embeddings> <sad> <out> [<pass2 "
                      "embeddings>] per line");
  diarize->add_option("--jobs", diarize_args.jobs,
                      "Parallel recordings (0 = hardware threads)")
      ->capture_default_str();
  diarize->add_option("--r", diarize_args.r,
                      "Within-speaker segment correlation")
      ->capture_default_str();
  diarize->add_option("--n0", diarize_args.n0,
                      "Count scaling target; \"none\" disables scaling")
      ->capture_default_str();
  diarize->add_option("--max-speakers", diarize_args.max_speakers,
                      "Initial speaker count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  diarize->add_option("--seed", diarize_args.seed, "Initialization seed")
      ->capture_default_str();
  diarize->add_option("--pass1-window", diarize_args.pass1_window,
                      "Pass-one window, seconds")
      ->capture_default_str();
  diarize->add_option("--pass1-step", diarize_args.pass1_step,
                      "Pass-one step, seconds")
      ->capture_default_str();
  diarize->add_option("--pass1-iterations", diarize_args.pass1_iterations,
                      "Pass-one iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  diarize->add_option("--pass2-window", diarize_args.pass2_window,
                      "Pass-two window, seconds")
      ->capture_default_str();
  diarize->add_option("--pass2-step", diarize_args.pass2_step,
                      "Pass-two step, seconds")
      ->capture_default_str();
  diarize->add_option("--pass2-iterations", diarize_args.pass2_iterations,
                      "Pass-two iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  diarize->add_flag("--no-pass2", diarize_args.no_pass2,
                    "Stop after pass one (output stays on the coarse grid)");
  diarize->add_option("--prune-threshold", diarize_args.prune_threshold,
                      "Weight below which a speaker is dropped")
      ->capture_default_str();
  diarize->add_option("--tol", diarize_args.tol,
                      "Responsibility change convergence threshold")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (neff->parsed()) {
      return RunNeff(neff_args);
    }
    if (synth->parsed()) {
      return RunSynth(synth_args);
    }
    if (score->parsed()) {
      return RunScore(score_args);
    }
    if (diarize->parsed()) {
      return RunDiarize(diarize_args);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
