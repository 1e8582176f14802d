// SPDX-License-Identifier: Apache-2.0
#include "gae/verify.hpp"

#include "gae/energy.hpp"
#include "gae/errors.hpp"
#include "gae/random.hpp"
#include "gae/rbm_oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>

namespace gae {

namespace {

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

double rel_diff(const Vector& a, const Vector& b) {
  double worst = 0.0;
  for (Index i = 0; i < a.size(); ++i) worst = std::max(worst, rel_diff(a[i], b[i]));
  return worst;
}

double stddev(const std::vector<double>& v) {
  double mean = 0.0;
  for (const double d : v) mean += d;
  mean /= static_cast<double>(v.size());
  double s = 0.0;
  for (const double d : v) s += (d - mean) * (d - mean);
  return std::sqrt(s / static_cast<double>(v.size()));
}

Index uniform_index(Rng& rng, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

Matrix gaussian(Index r, Index c, double sd, Rng& rng) {
  return normal_vector(r * c, sd, rng).reshaped(r, c);
}

// Weights ~ N(0, 1/fan_in) keep pre-activations O(1) at every size.
GaeParams random_model(Index dx, Index dy, Index f, Index m, Activation act, Rng& rng) {
  GaeParams p = GaeParams::zeros(dx, dy, f, m, act);
  p.wx = gaussian(f, dx, 1.0 / std::sqrt(static_cast<double>(dx)), rng);
  p.wy = gaussian(f, dy, 1.0 / std::sqrt(static_cast<double>(dy)), rng);
  p.wh = gaussian(m, f, 1.0 / std::sqrt(static_cast<double>(f)), rng);
  p.b = normal_vector(m, 0.5, rng);
  p.ax = normal_vector(dx, 0.5, rng);
  p.ay = normal_vector(dy, 0.5, rng);
  return p;
}

struct Case {
  GaeParams model;
  Vector x, y;
};

Case make_case(std::uint64_t seed, Activation act, Index max_m = 16) {
  Rng rng = make_rng(seed, 0x5E1F);
  const Index dx = uniform_index(rng, 2, 20);
  const Index dy = uniform_index(rng, 2, 20);
  const Index f = uniform_index(rng, 1, 16);
  const Index m = uniform_index(rng, 1, max_m);
  Case c{random_model(dx, dy, f, m, act, rng), normal_vector(dx, 1.0, rng), normal_vector(dy, 1.0, rng)};
  return c;
}

Vector fd_energy_gradient(const GaeParams& p, const Vector& x, Vector y) {
  const double h = 1e-5;
  Vector g(y.size());
  for (Index i = 0; i < y.size(); ++i) {
    const double saved = y[i];
    y[i] = saved + h;
    const double plus = energy_conditional(p, x, y).value;
    y[i] = saved - h;
    const double minus = energy_conditional(p, x, y).value;
    y[i] = saved;
    g[i] = (plus - minus) / (2 * h);
  }
  return g;
}

template <class Fn>
SuiteResult timed(const std::string& name, double tol, bool lower_bound, Fn&& body) {
  const auto start = std::chrono::steady_clock::now();
  SuiteResult r;
  r.name = name;
  r.tolerance = tol;
  r.lower_bound = lower_bound;
  r.value = body();
  r.passed = lower_bound ? r.value > tol : r.value <= tol;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

constexpr Activation kActivations[] = {Activation::sigmoid, Activation::tanh, Activation::linear,
                                       Activation::relu};

Activation activation_for(int s) { return kActivations[s % 4]; }

GaeParams untie(const GaeParams& p, std::uint64_t seed) {
  Rng rng = make_rng(seed, 0xB4EA);
  GaeParams dec = p;
  dec.wy += gaussian(p.wy.rows(), p.wy.cols(), 0.5, rng);
  return dec;
}

// Midpoint-rule line integral of the field along consecutive straight segments.
double line_integral(const GaeParams& p, const Vector& x, const std::vector<Vector>& knots,
                     int steps) {
  const int per_segment = std::max(1, steps / static_cast<int>(knots.size() - 1));
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < knots.size(); ++s) {
    const Vector d = knots[s + 1] - knots[s];
    for (int i = 0; i < per_segment; ++i) {
      const Vector at = knots[s] + d * ((i + 0.5) / per_segment);
      total += vector_field(p, x, at).dot(d);
    }
  }
  return total / per_segment;
}

}  // namespace

std::vector<SuiteResult> run_verification(const VerifyConfig& cfg) {
  if (cfg.seeds < 1 || cfg.path_steps < 1 || cfg.equivalence_samples < 2) {
    throw UsageError("verify: seeds, path steps and samples must be positive");
  }
  const auto seed_of = [&](int s) { return cfg.base_seed + static_cast<std::uint64_t>(s); };
  std::vector<SuiteResult> out;

  out.push_back(timed("gradient_field", 1e-5, false, [&] {
    double worst = 0.0;
    for (int s = 0; s < cfg.seeds; ++s) {
      const Case c = make_case(seed_of(s), activation_for(s));
      worst = std::max(worst, rel_diff(vector_field(c.model, c.x, c.y),
                                       fd_energy_gradient(c.model, c.x, c.y)));
    }
    return worst;
  }));

  out.push_back(timed("poincare", 1e-6, false, [&] {
    double worst = 0.0;
    for (int s = 0; s < cfg.seeds; ++s) {
      const Case c = make_case(seed_of(s), activation_for(s));
      if (cfg.break_tie_weights) {
        worst = std::max(worst, poincare_residual_untied(c.model, untie(c.model, seed_of(s)), c.x, c.y));
      } else {
        worst = std::max(worst, poincare_residual(c.model, c.x, c.y, Target::y));
        worst = std::max(worst, poincare_residual(c.model, c.x, c.y, Target::x));
      }
    }
    return worst;
  }));

  out.push_back(timed("poincare_untied_control", 1e-3, true, [&] {
    // A relu layer with every unit off has Jacobian -I whatever the weights,
    // so the control only draws smooth activations.
    double weakest = std::numeric_limits<double>::infinity();
    for (int s = 0; s < cfg.seeds; ++s) {
      const Case c = make_case(seed_of(s), activation_for(s % 3));
      weakest = std::min(weakest,
                         poincare_residual_untied(c.model, untie(c.model, seed_of(s)), c.x, c.y));
    }
    return weakest;
  }));

  out.push_back(timed("path_independence", 1e-3, false, [&] {
    double worst = 0.0;
    for (int s = 0; s < cfg.seeds; ++s) {
      const Case c = make_case(seed_of(s), activation_for(s));
      Rng rng = make_rng(seed_of(s), 0x9A7B);
      const Vector y1 = normal_vector(c.y.size(), 1.0, rng);
      std::vector<Vector> axis{c.y};
      Vector cur = c.y;
      for (Index i = 0; i < c.y.size(); ++i) {
        cur[i] = y1[i];
        axis.push_back(cur);
      }
      const double closed =
          energy_conditional(c.model, c.x, y1).value - energy_conditional(c.model, c.x, c.y).value;
      worst = std::max(worst, rel_diff(line_integral(c.model, c.x, {c.y, y1}, cfg.path_steps), closed));
      worst = std::max(worst, rel_diff(line_integral(c.model, c.x, axis, cfg.path_steps), closed));
    }
    return worst;
  }));

  const int n = cfg.equivalence_samples;
  out.push_back(timed("fcrbm_equivalence", 1e-8, false, [&] {
    double worst = 0.0;
    for (int s = 0; s < cfg.seeds; ++s) {
      const Case c = make_case(seed_of(s), Activation::sigmoid);
      const rbm::FcrbmParams q = rbm::fcrbm_from_gae(c.model);
      Rng rng = make_rng(seed_of(s), 0xFC);
      std::vector<double> gap;
      for (int i = 0; i < n; ++i) {
        const Vector x = normal_vector(c.model.dim_x(), 1.0, rng);
        const Vector y = normal_vector(c.model.dim_y(), 1.0, rng);
        gap.push_back(energy_conditional(c.model, x, y).value - rbm::fcrbm_free_energy(q, y, x));
      }
      worst = std::max(worst, stddev(gap));
    }
    return worst;
  }));

  out.push_back(timed("fcrbm_enumeration", 1e-10, false, [&] {
    double worst = 0.0;
    for (int s = 0; s < cfg.seeds; ++s) {
      const Case c = make_case(seed_of(s), Activation::sigmoid, 12);
      const rbm::FcrbmParams q = rbm::fcrbm_from_gae(c.model);
      worst = std::max(worst, rel_diff(rbm::fcrbm_free_energy(q, c.y, c.x),
                                       rbm::fcrbm_free_energy_enumerated(q, c.y, c.x)));
    }
    return worst;
  }));

  // Covariance and mean-covariance models on D-dimensional inputs.
  struct CovCase {
    GaeParams cov;
    MeanAeParams mean;
  };
  const auto cov_case = [&](int s, Index max_m) {
    Rng rng = make_rng(seed_of(s), 0xC0F);
    const Index d = uniform_index(rng, 2, 20);
    const Index f = uniform_index(rng, 1, 16);
    const Index m = uniform_index(rng, 1, max_m);
    const Index mm = uniform_index(rng, 1, max_m);
    GaeParams c = random_model(d, d, f, m, Activation::sigmoid, rng);
    c.wy = c.wx;
    c.ay = c.ax;
    MeanAeParams mean = MeanAeParams::zeros(d, mm);
    mean.w = gaussian(mm, d, 1.0 / std::sqrt(static_cast<double>(d)), rng);
    mean.c = normal_vector(mm, 0.5, rng);
    mean.a = normal_vector(d, 0.5, rng);
    return CovCase{c, mean};
  };

  out.push_back(timed("covrbm_equivalence", 1e-8, false, [&] {
    double worst = 0.0;
    for (int s = 0; s < cfg.seeds; ++s) {
      const CovCase c = cov_case(s, 16);
      const rbm::CovRbmParams q = rbm::covrbm_from_cov_gae(c.cov);
      Rng rng = make_rng(seed_of(s), 0xC1);
      std::vector<double> gap;
      for (int i = 0; i < n; ++i) {
        const Vector x = normal_vector(c.cov.dim_x(), 1.0, rng);
        gap.push_back(energy_covariance(c.cov, x).value - rbm::covrbm_free_energy(q, x));
      }
      worst = std::max(worst, stddev(gap));
    }
    return worst;
  }));

  out.push_back(timed("covrbm_enumeration", 1e-10, false, [&] {
    double worst = 0.0;
    for (int s = 0; s < cfg.seeds; ++s) {
      const CovCase c = cov_case(s, 12);
      const rbm::CovRbmParams q = rbm::covrbm_from_cov_gae(c.cov);
      Rng rng = make_rng(seed_of(s), 0xC2);
      const Vector x = normal_vector(c.cov.dim_x(), 1.0, rng);
      worst = std::max(worst, rel_diff(rbm::covrbm_free_energy(q, x), rbm::covrbm_free_energy_enumerated(q, x)));
    }
    return worst;
  }));

  out.push_back(timed("mcrbm_equivalence", 1e-8, false, [&] {
    double worst = 0.0;
    for (int s = 0; s < cfg.seeds; ++s) {
      const CovCase c = cov_case(s, 16);
      const rbm::CovRbmParams q = rbm::covrbm_from_cov_gae(c.cov);
      const rbm::GaussianRbmParams g = rbm::gaussian_rbm_from_mean_ae(c.mean);
      Rng rng = make_rng(seed_of(s), 0xC3);
      std::vector<double> gap;
      for (int i = 0; i < n; ++i) {
        const Vector x = normal_vector(c.cov.dim_x(), 1.0, rng);
        gap.push_back(energy_mean_covariance(c.mean, c.cov, x).value - rbm::mcrbm_free_energy(g, q, x));
      }
      worst = std::max(worst, stddev(gap));
    }
    return worst;
  }));

  out.push_back(timed("mcrbm_enumeration", 1e-10, false, [&] {
    double worst = 0.0;
    for (int s = 0; s < cfg.seeds; ++s) {
      const CovCase c = cov_case(s, 6);
      const rbm::CovRbmParams q = rbm::covrbm_from_cov_gae(c.cov);
      const rbm::GaussianRbmParams g = rbm::gaussian_rbm_from_mean_ae(c.mean);
      Rng rng = make_rng(seed_of(s), 0xC4);
      const Vector x = normal_vector(c.cov.dim_x(), 1.0, rng);
      worst = std::max(worst, rel_diff(rbm::mcrbm_free_energy(g, q, x), rbm::mcrbm_free_energy_enumerated(g, q, x)));
    }
    return worst;
  }));

  return out;
}

}  // namespace gae
