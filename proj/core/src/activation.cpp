// SPDX-License-Identifier: Apache-2.0
#include "gae/activation.hpp"

#include "gae/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gae {

Activation parse_activation(std::string_view name) {
  if (name == "sigmoid") return Activation::sigmoid;
  if (name == "tanh") return Activation::tanh;
  if (name == "linear") return Activation::linear;
  if (name == "relu") return Activation::relu;
  if (name == "softmax" || name == "modulus" || name == "squaring") {
    throw CapabilityError("activation '" + std::string(name) +
                          "' has no implemented anti-derivative");
  }
  throw UsageError("unknown activation '" + std::string(name) + "'");
}

std::string to_string(Activation a) {
  switch (a) {
    case Activation::sigmoid: return "sigmoid";
    case Activation::tanh: return "tanh";
    case Activation::linear: return "linear";
    case Activation::relu: return "relu";
  }
  throw CapabilityError("unsupported activation");
}

double activate(Activation a, double u) {
  switch (a) {
    case Activation::sigmoid: return sigmoid(u);
    case Activation::tanh: return std::tanh(u);
    case Activation::linear: return u;
    case Activation::relu: return u > 0 ? u : 0.0;
  }
  throw CapabilityError("unsupported activation");
}

double activate_derivative(Activation a, double u) {
  switch (a) {
    case Activation::sigmoid: {
      const double s = sigmoid(u);
      return s * (1.0 - s);
    }
    case Activation::tanh: {
      const double t = std::tanh(u);
      return 1.0 - t * t;
    }
    case Activation::linear: return 1.0;
    case Activation::relu: return u > 0 ? 1.0 : 0.0;
  }
  throw CapabilityError("unsupported activation");
}

double activate_integral(Activation a, double u) {
  switch (a) {
    case Activation::sigmoid:
      // softplus, overflow-safe
      return std::max(u, 0.0) + std::log1p(std::exp(-std::abs(u)));
    case Activation::tanh: {
      // log cosh u = |u| + log(1 + e^{-2|u|}) - log 2
      const double au = std::abs(u);
      return au + std::log1p(std::exp(-2.0 * au)) - std::log(2.0);
    }
    case Activation::linear: return 0.5 * u * u;
    case Activation::relu: return u > 0 ? 0.5 * u * u : 0.0;
  }
  throw CapabilityError("unsupported activation");
}

Vector activate(Activation a, const VecRef& u) {
  Vector h(u.size());
  for (Index k = 0; k < u.size(); ++k) h[k] = activate(a, u[k]);
  return h;
}

}  // namespace gae
