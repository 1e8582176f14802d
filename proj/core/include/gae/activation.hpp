// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gae/linalg.hpp"

#include <string>
#include <string_view>

namespace gae {

/// Elementwise mapping-unit nonlinearities that admit a closed-form
/// anti-derivative.
enum class Activation { sigmoid, tanh, linear, relu };

/// Parses "sigmoid", "tanh", "linear", "relu". Names of activations that are
/// known to define gradient fields but have no implemented anti-derivative
/// (softmax, modulus, squaring) raise CapabilityError; anything else
/// raises UsageError.
Activation parse_activation(std::string_view name);
std::string to_string(Activation a);

double activate(Activation a, double u);
/// Derivative of the activation at pre-activation `u`.
double activate_derivative(Activation a, double u);
/// Scalar anti-derivative H with H' = activation.
double activate_integral(Activation a, double u);

Vector activate(Activation a, const VecRef& u);

}  // namespace gae
