// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gae/linalg.hpp"

#include <cstdint>
#include <random>

namespace gae {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent engine for (seed, stream); equal arguments give equal streams.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return Rng(mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL)));
}

inline Matrix uniform_matrix(Index rows, Index cols, double bound, Rng& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = dist(rng);
  return m;
}

inline Vector normal_vector(Index n, double stddev, Rng& rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

}  // namespace gae
