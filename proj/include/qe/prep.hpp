#pragma once

// State preparation: the singlet source, the canonical partially entangled
// state, the partial-polarizer filter and the plate-stack transmittivity model.

#include <random>

#include "qe/core.hpp"

namespace qe {

/// Engine used for every random draw in the library. The algorithm is fixed by
/// the C++ standard, so a seed reproduces the same stream on any platform.
using Rng = std::mt19937_64;

/// Partial polarizer in the object arm. p-polarization passes with amplitude 1,
/// s-polarization with amplitude t. alpha is measured from the horizontal plane.
class PolarizerChannel {
 public:
  /// Throws DomainError unless 0 <= t <= 1 and alpha is finite. alpha is
  /// folded into (-pi/2, pi/2].
  PolarizerChannel(double alpha, double t);

  double alpha() const { return alpha_; }
  double t() const { return t_; }

  /// R(alpha) diag(1, t) R(-alpha) with R = basis_rotation.
  ObjectOperator as_operator() const;

 private:
  double alpha_;
  double t_;
};

/// Glass plates at the Brewster angle. t(N) = per_plate_factor^N.
///
/// The default factor is a power-law fit through (N=10, t=0.200) and
/// (N=7, t=0.324); both pairs give 0.8513 to four digits. No reflectivity
/// model sits behind it.
struct PlateStack {
  int n_plates = 0;
  double per_plate_factor = 0.8513;
};

struct PolarizerCoeffs {
  double a1;
  double a2;
  double a3;
};

/// (|O+M+> - |O-M->)/sqrt(2).
PureState make_singlet();

/// sqrt(w+)|O+M+> + e^{i phi} c sqrt(w-)|O-M+> + e^{i phi} sqrt(w-(1-c^2))|O-M->.
/// Throws DomainError if w_plus or c lies outside [0, 1].
PureState make_canonical(double w_plus, double phi, double c);

PolarizerCoeffs polarizer_coeffs(const PolarizerChannel& p);

/// Singlet after the partial polarizer: amplitudes (a1, a3, -a3, -a2), with the
/// post-selection probability (1 + t^2)/2.
Filtered prepare_after_polarizer(const PolarizerChannel& p);

/// Probe angle where the |O+M-> amplitude of the filtered singlet vanishes,
/// atan2(-a3, a1), in (-pi/2, pi/2].
double theta_zero(const PolarizerCoeffs& a);

/// Throws DomainError for a negative plate count or a factor outside (0, 1].
double plates_to_t(const PlateStack& stack);

/// Haar-uniform pure state (complex Gaussian amplitudes, normalized).
PureState random_pure_state(Rng& rng);

/// Uniform over real unit vectors: the states reachable with real
/// (linear-polarization) optics.
PureState random_real_pure_state(Rng& rng);

}  // namespace qe
