// core/src/io_formats.cpp

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

#include "lgp/io_formats.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lgp/error.hpp"

namespace lgp {

namespace {

bool IsBlank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

[[noreturn]] void ThrowParse(const std::string& path, int line_number,
                             const std::string& what) {
  throw Error(ErrorCode::kParseError,
              path + ": line " + std::to_string(line_number) + ": " + what);
}

std::ifstream OpenOrThrow(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kParseError, path + ": cannot open file");
  }
  return in;
}

std::ofstream OpenForWriteOrThrow(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::kParseError, path + ": cannot open for writing");
  }
  return out;
}

std::vector<std::string> SplitFields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string field;
  while (in >> field) fields.push_back(field);
  return fields;
}

double ParseDouble(const std::string& token, const std::string& path,
                   int line_number) {
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &consumed);
  } catch (const std::exception&) {
    ThrowParse(path, line_number, "not a number: '" + token + "'");
  }
  if (consumed != token.size()) {
    ThrowParse(path, line_number, "not a number: '" + token + "'");
  }
  return value;
}

}  // namespace

std::vector<RttmRecord> read_rttm(const std::string& path) {
  std::ifstream in = OpenOrThrow(path);
  std::vector<RttmRecord> records;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (IsBlank(line)) continue;
    std::vector<std::string> f = SplitFields(line);
    if (f.size() != 10) {
      ThrowParse(path, line_number,
                 "expected 10 fields, got " + std::to_string(f.size()));
    }
    if (f[0] != "SPEAKER") {
      ThrowParse(path, line_number, "expected record type SPEAKER, got '" +
                                        f[0] + "'");
    }
    RttmRecord rec;
    rec.recording_id = f[1];
    rec.onset = ParseDouble(f[3], path, line_number);
    rec.duration = ParseDouble(f[4], path, line_number);
    rec.speaker = f[7];
    if (rec.onset < 0.0 || rec.duration <= 0.0) {
      throw Error(ErrorCode::kNegativeDuration,
                  path + ": line " + std::to_string(line_number) +
                      ": onset must be >= 0 and duration > 0");
    }
    records.push_back(std::move(rec));
  }
  return records;
}

void write_rttm(const std::string& path,
                const std::vector<RttmRecord>& records) {
  std::ofstream out = OpenForWriteOrThrow(path);
  char onset[32], duration[32];
  for (const RttmRecord& rec : records) {
    std::snprintf(onset, sizeof(onset), "%.3f", rec.onset);
    std::snprintf(duration, sizeof(duration), "%.3f", rec.duration);
    out << "SPEAKER " << rec.recording_id << " 1 " << onset << " " << duration
        << " <NA> <NA> " << rec.speaker << " <NA> <NA>\n";
  }
}

std::vector<SadRegion> read_sad(const std::string& path) {
  std::ifstream in = OpenOrThrow(path);
  std::vector<SadRegion> regions;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (IsBlank(line)) continue;
    std::vector<std::string> f = SplitFields(line);
    if (f.size() != 3) {
      ThrowParse(path, line_number,
                 "expected 3 fields, got " + std::to_string(f.size()));
    }
    SadRegion region;
    region.recording_id = f[0];
    region.start = ParseDouble(f[1], path, line_number);
    region.end = ParseDouble(f[2], path, line_number);
    if (region.end <= region.start) {
      throw Error(ErrorCode::kInvertedInterval,
                  path + ": line " + std::to_string(line_number) + ": end " +
                      f[2] + " not after start " + f[1]);
    }
    regions.push_back(std::move(region));
  }
  std::stable_sort(regions.begin(), regions.end(),
                   [](const SadRegion& a, const SadRegion& b) {
                     if (a.recording_id != b.recording_id)
                       return a.recording_id < b.recording_id;
                     return a.start < b.start;
                   });
  // Touching or overlapping regions of one recording collapse into one.
  std::vector<SadRegion> merged;
  for (const SadRegion& region : regions) {
    if (!merged.empty() && merged.back().recording_id == region.recording_id &&
        region.start <= merged.back().end) {
      merged.back().end = std::max(merged.back().end, region.end);
    } else {
      merged.push_back(region);
    }
  }
  return merged;
}

void write_sad(const std::string& path, const std::vector<SadRegion>& regions) {
  std::ofstream out = OpenForWriteOrThrow(path);
  char start[32], end[32];
  for (const SadRegion& region : regions) {
    std::snprintf(start, sizeof(start), "%.3f", region.start);
    std::snprintf(end, sizeof(end), "%.3f", region.end);
    out << region.recording_id << " " << start << " " << end << "\n";
  }
}

EmbeddingTable read_embedding_table(const std::string& path) {
  std::ifstream in = OpenOrThrow(path);
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kParseError, path + ": missing header line");
  }
  std::vector<std::string> h = SplitFields(line);
  if (h.size() != 6 || h[0] != "#DIM" || h[2] != "STEP" || h[4] != "START") {
    ThrowParse(path, 1, "expected header '#DIM <D> STEP <s> START <t>'");
  }
  EmbeddingTable table;
  table.dim = static_cast<int>(ParseDouble(h[1], path, 1));
  table.frame_step = ParseDouble(h[3], path, 1);
  table.start_offset = ParseDouble(h[5], path, 1);
  if (table.dim < 1) {
    ThrowParse(path, 1, "dimension must be positive");
  }
  std::vector<double> values;
  int line_number = 1;
  long long rows = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (IsBlank(line)) continue;
    std::vector<std::string> f = SplitFields(line);
    if (static_cast<int>(f.size()) != table.dim) {
      throw Error(ErrorCode::kDimMismatch,
                  path + ": line " + std::to_string(line_number) + ": got " +
                      std::to_string(f.size()) + " values, expected " +
                      std::to_string(table.dim));
    }
    for (const std::string& token : f) {
      values.push_back(ParseDouble(token, path, line_number));
    }
    ++rows;
  }
  table.rows.resize(rows, table.dim);
  for (long long i = 0; i < rows; ++i) {
    for (int j = 0; j < table.dim; ++j) {
      table.rows(i, j) = values[static_cast<std::size_t>(i) * table.dim + j];
    }
  }
  return table;
}

void write_embedding_table(const std::string& path,
                           const EmbeddingTable& table) {
  std::ofstream out = OpenForWriteOrThrow(path);
  char buffer[48];
  out << "#DIM " << table.dim;
  std::snprintf(buffer, sizeof(buffer), "%.9g", table.frame_step);
  out << " STEP " << buffer;
  std::snprintf(buffer, sizeof(buffer), "%.9g", table.start_offset);
  out << " START " << buffer << "\n";
  for (Eigen::Index i = 0; i < table.rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < table.rows.cols(); ++j) {
      std::snprintf(buffer, sizeof(buffer), "%.9g", table.rows(i, j));
      out << (j ? " " : "") << buffer;
    }
    out << "\n";
  }
}

}  // namespace lgp
