// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

#include <cmath>
#include <string_view>

namespace gae {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
/// Data matrices hold one example per row.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using VecRef = Eigen::Ref<const Vector>;

// Throws ShapeError unless `got == expected`.
void require_dim(Index got, Index expected, std::string_view what);
// Throws InputError if any entry is NaN or infinite.
void require_finite(const Eigen::Ref<const Matrix>& m, std::string_view what);

inline double sigmoid(double u) {
  if (u >= 0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

}  // namespace gae
