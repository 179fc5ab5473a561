// core/include/lgp/plda.hpp

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

#ifndef LGP_PLDA_HPP_
#define LGP_PLDA_HPP_

#include <string>

#include <Eigen/Dense>

namespace lgp {

// Gaussian PLDA parameters and the change of basis that makes all downstream
// scoring diagonal: the transform U satisfies U S_wc U^T = I and
// U S_ac U^T = diag(psi).
struct PldaParams {
  Eigen::MatrixXd sigma_wc;   // within-class covariance, symmetric PD
  Eigen::MatrixXd sigma_ac;   // across-class covariance, symmetric PSD
  Eigen::MatrixXd transform;  // U, simultaneous diagonalizer
  Eigen::VectorXd psi;        // diagonal of U S_ac U^T, sorted descending

  int dim() const { return static_cast<int>(psi.size()); }
};

// Scales v to unit Euclidean norm. Throws ZeroVector if the norm is below
// 1e-12. Idempotent.
Eigen::VectorXd length_normalize(const Eigen::VectorXd& v);

// Finds U with U sigma_wc U^T = I and U sigma_ac U^T diagonal. psi comes out
// sorted descending with tiny negative eigenvalues clamped to zero, and each
// row of U has its first nonzero entry positive, so the result is unique.
// Throws NotPositiveDefinite when sigma_wc has an eigenvalue below 1e-10.
PldaParams simultaneous_diagonalize(const Eigen::MatrixXd& sigma_wc,
                                    const Eigen::MatrixXd& sigma_ac);

// Applies the diagonalizing transform: returns U z. In the transformed space
// the within-class covariance is the identity and the across-class covariance
// is diag(psi). Throws DimensionMismatch.
Eigen::VectorXd project(const PldaParams& params, const Eigen::VectorXd& z);

// Text round trip. Format: a first line with the dimension D, then D rows of
// sigma_wc and D rows of sigma_ac, whitespace separated. The loader runs
// simultaneous_diagonalize on the matrices it reads, so the returned params
// are complete. Parse failures carry the offending line number.
PldaParams load_plda_text(const std::string& path);
void write_plda_text(const std::string& path, const Eigen::MatrixXd& sigma_wc,
                     const Eigen::MatrixXd& sigma_ac);

}  // namespace lgp

#endif  // LGP_PLDA_HPP_
