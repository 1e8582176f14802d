// SPDX-License-Identifier: Apache-2.0
#include "gae/linalg.hpp"

#include "gae/errors.hpp"

#include <string>

namespace gae {

void require_dim(Index got, Index expected, std::string_view what) {
  if (got != expected) {
    throw ShapeError(std::string(what) + ": expected dimension " + std::to_string(expected) +
                     ", got " + std::to_string(got));
  }
}

void require_finite(const Eigen::Ref<const Matrix>& m, std::string_view what) {
  if (!m.allFinite()) throw InputError(std::string(what) + " contains non-finite values");
}

}  // namespace gae
