// SPDX-License-Identifier: Apache-2.0
#pragma once

// Seeded property suites over random models: gradient/field consistency,
// Jacobian symmetry, path independence and the RBM free-energy equivalences.

#include <cstdint>
#include <string>
#include <vector>

namespace gae {

struct VerifyConfig {
  int seeds = 100;
  std::uint64_t base_seed = 0;
  /// Debug hook: score the symmetry suite on a model whose decoder copy of
  /// wy has been perturbed, which must make that suite fail.
  bool break_tie_weights = false;
  int path_steps = 10000;
  int equivalence_samples = 50;
};

struct SuiteResult {
  std::string name;
  double value = 0.0;      ///< worst residual seen (smallest, for lower-bound suites)
  double tolerance = 0.0;
  bool lower_bound = false;  ///< pass means value > tolerance instead of value <= tolerance
  bool passed = false;
  double seconds = 0.0;
};

/// Runs every suite; the result order is fixed:
///   gradient_field, poincare, poincare_untied_control, path_independence,
///   fcrbm_equivalence, fcrbm_enumeration, covrbm_equivalence,
///   covrbm_enumeration, mcrbm_equivalence, mcrbm_enumeration.
std::vector<SuiteResult> run_verification(const VerifyConfig& cfg);

}  // namespace gae
