// core/include/lgp/io_formats.hpp

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

#ifndef LGP_IO_FORMATS_HPP_
#define LGP_IO_FORMATS_HPP_

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lgp {

// Readers reject malformed input with the line number instead of repairing
// it; writers emit byte-identical output for identical data.

struct RttmRecord {
  std::string recording_id;
  double onset = 0.0;     // seconds, >= 0
  double duration = 0.0;  // seconds, > 0
  std::string speaker;
};

// Line format: SPEAKER <rec> 1 <onset> <dur> <NA> <NA> <spk> <NA> <NA>
// with onset and duration printed to 3 decimal places.
std::vector<RttmRecord> read_rttm(const std::string& path);
void write_rttm(const std::string& path, const std::vector<RttmRecord>& records);

// One speech region of one recording. Regions returned by read_sad are sorted
// by start and merged when they touch or overlap.
struct SadRegion {
  std::string recording_id;
  double start = 0.0;
  double end = 0.0;  // exclusive, > start
};

// Line format: <rec> <start> <end>
std::vector<SadRegion> read_sad(const std::string& path);
void write_sad(const std::string& path, const std::vector<SadRegion>& regions);

// Time-ordered embedding rows at a fixed step. Row k sits at time
// start_offset + k * frame_step.
struct EmbeddingTable {
  int dim = 0;
  double frame_step = 0.0;
  double start_offset = 0.0;
  Eigen::MatrixXd rows;  // one embedding per row, dim columns
};

// Header line `#DIM <D> STEP <s> START <t>`, then one whitespace-separated
// vector per line. Values are written with 9 significant digits, and a
// write/read/write cycle is byte identical.
EmbeddingTable read_embedding_table(const std::string& path);
void write_embedding_table(const std::string& path, const EmbeddingTable& table);

}  // namespace lgp

#endif  // LGP_IO_FORMATS_HPP_
