// core/src/plda.cpp

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

#include "lgp/plda.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "lgp/error.hpp"

namespace lgp {

Eigen::VectorXd length_normalize(const Eigen::VectorXd& v) {
  double norm = v.norm();
  if (norm < 1e-12) {
    throw Error(ErrorCode::kZeroVector,
                "cannot normalize a vector with norm " + std::to_string(norm));
  }
  return v / norm;
}

PldaParams simultaneous_diagonalize(const Eigen::MatrixXd& sigma_wc,
                                    const Eigen::MatrixXd& sigma_ac) {
  if (sigma_wc.rows() != sigma_wc.cols() || sigma_ac.rows() != sigma_ac.cols() ||
      sigma_wc.rows() != sigma_ac.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "covariance matrices must be square and of equal dimension");
  }
  const Eigen::Index d = sigma_wc.rows();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> wc_eig(sigma_wc);
  if (wc_eig.info() != Eigen::Success ||
      wc_eig.eigenvalues().minCoeff() < 1e-10) {
    throw Error(ErrorCode::kNotPositiveDefinite,
                "within-class covariance has an eigenvalue below 1e-10");
  }
  // Whitener W with W sigma_wc W^T = I.
  Eigen::MatrixXd whitener =
      wc_eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
      wc_eig.eigenvectors().transpose();

  // The across-class covariance seen through the whitener stays symmetric, so
  // a single rotation finishes the job without disturbing the identity.
  Eigen::MatrixXd between = whitener * sigma_ac * whitener.transpose();
  between = 0.5 * (between + between.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ac_eig(between);
  if (ac_eig.info() != Eigen::Success) {
    throw Error(ErrorCode::kNotPositiveDefinite,
                "eigendecomposition of the whitened across-class covariance "
                "failed");
  }

  PldaParams params;
  params.sigma_wc = sigma_wc;
  params.sigma_ac = sigma_ac;
  params.transform.resize(d, d);
  params.psi.resize(d);
  // Eigen reports eigenvalues ascending; emit them descending.
  for (Eigen::Index i = 0; i < d; ++i) {
    Eigen::Index src = d - 1 - i;
    params.psi(i) = std::max(ac_eig.eigenvalues()(src), 0.0);
    params.transform.row(i) =
        ac_eig.eigenvectors().col(src).transpose() * whitener;
  }
  // Fix row signs: first entry of nonnegligible magnitude made positive.
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      double entry = params.transform(i, j);
      if (std::abs(entry) > 1e-12) {
        if (entry < 0.0) params.transform.row(i) = -params.transform.row(i);
        break;
      }
    }
  }
  return params;
}

Eigen::VectorXd project(const PldaParams& params, const Eigen::VectorXd& z) {
  if (z.size() != params.transform.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "embedding dimension " + std::to_string(z.size()) +
                    " does not match transform dimension " +
                    std::to_string(params.transform.cols()));
  }
  return params.transform * z;
}

namespace {

Eigen::MatrixXd ReadMatrixRows(std::istream& in, Eigen::Index d,
                               int& line_number, const std::string& path) {
  Eigen::MatrixXd m(d, d);
  std::string line;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!std::getline(in, line)) {
      throw Error(ErrorCode::kParseError,
                  path + ": unexpected end of file at line " +
                      std::to_string(line_number + 1));
    }
    ++line_number;
    std::istringstream row(line);
    for (Eigen::Index j = 0; j < d; ++j) {
      if (!(row >> m(i, j))) {
        throw Error(ErrorCode::kParseError,
                    path + ": line " + std::to_string(line_number) +
                        ": expected " + std::to_string(d) + " values");
      }
    }
    double extra;
    if (row >> extra) {
      throw Error(ErrorCode::kParseError,
                  path + ": line " + std::to_string(line_number) +
                      ": more than " + std::to_string(d) + " values");
    }
  }
  return m;
}

}  // namespace

PldaParams load_plda_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kParseError, path + ": cannot open file");
  }
  int line_number = 0;
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kParseError, path + ": empty file");
  }
  ++line_number;
  std::istringstream header(line);
  long long d = 0;
  if (!(header >> d) || d < 1) {
    throw Error(ErrorCode::kParseError,
                path + ": line 1: expected a positive dimension");
  }
  Eigen::MatrixXd wc = ReadMatrixRows(in, d, line_number, path);
  Eigen::MatrixXd ac = ReadMatrixRows(in, d, line_number, path);
  return simultaneous_diagonalize(wc, ac);
}

void write_plda_text(const std::string& path, const Eigen::MatrixXd& sigma_wc,
                     const Eigen::MatrixXd& sigma_ac) {
  if (sigma_wc.rows() != sigma_ac.rows() ||
      sigma_wc.cols() != sigma_ac.cols() ||
      sigma_wc.rows() != sigma_wc.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "covariance matrices must be square and of equal dimension");
  }
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::kParseError, path + ": cannot open for writing");
  }
  const Eigen::Index d = sigma_wc.rows();
  out << d << "\n";
  char buffer[64];
  for (const Eigen::MatrixXd* m : {&sigma_wc, &sigma_ac}) {
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        std::snprintf(buffer, sizeof(buffer), "%.17g", (*m)(i, j));
        out << (j ? " " : "") << buffer;
      }
      out << "\n";
    }
  }
}

}  // namespace lgp
