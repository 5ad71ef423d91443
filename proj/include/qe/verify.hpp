#pragma once

// Executable form of the complementarity relations: inequality chains,
// duality saturation for pure states, extremality of D_m and V_c over the
// probe angle, estimator consistency and agreement of the amplitude and
// density-matrix routes.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qe/core.hpp"

namespace qe {

struct PropertyCheck {
  std::string name;
  double tolerance = 0.0;
  // Largest value of (lhs - rhs) for inequalities, or |lhs - rhs| for
  // identities, over every state and angle the check ran on.
  double worst = 0.0;
  std::size_t evaluated = 0;
  std::optional<std::size_t> offender;  // first state index above tolerance

  bool passed() const { return !offender.has_value(); }
};

struct PropertyReport {
  std::vector<PropertyCheck> checks;

  bool all_passed() const;
};

struct PropertyOptions {
  std::size_t theta_points = 100;
  double extremal_resolution = 1e-3;
};

/// n angles uniform on (-pi/2, pi/2].
std::vector<double> half_turn_grid(std::size_t n);

/// Checks that need a real-rotation optimum (extremality, saturation at the
/// optimal angle, estimator consistency) only run on states with real
/// amplitudes; the rest run on every state. States are evaluated in parallel.
PropertyReport check_properties(std::span<const PureState> states, const PropertyOptions& options = {});

/// Single-threaded reference for check_properties; identical output.
PropertyReport check_properties_serial(std::span<const PureState> states, const PropertyOptions& options = {});

}  // namespace qe
