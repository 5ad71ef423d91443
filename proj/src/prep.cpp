#include "qe/prep.hpp"

#include <cmath>
#include <numbers>

#include <boost/random/normal_distribution.hpp>

namespace qe {

namespace {

double fold_half_turn(double angle) {
  constexpr double pi = std::numbers::pi;
  double a = std::remainder(angle, pi);  // [-pi/2, pi/2]
  if (a <= -pi / 2) a += pi;
  return a;
}

}  // namespace

PolarizerChannel::PolarizerChannel(double alpha, double t) {
  if (!std::isfinite(alpha)) throw Error(ErrorKind::DomainError, "alpha must be finite");
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorKind::DomainError, "t must lie in [0, 1]");
  alpha_ = fold_half_turn(alpha);
  t_ = t;
}

ObjectOperator PolarizerChannel::as_operator() const {
  Matrix2 filter = Matrix2::Zero();
  filter(0, 0) = 1.0;
  filter(1, 1) = t_;
  return ObjectOperator{basis_rotation(alpha_) * filter * basis_rotation(-alpha_)};
}

PureState make_singlet() {
  const double h = std::numbers::sqrt2 / 2.0;
  return PureState(h, 0.0, 0.0, -h);
}

PureState make_canonical(double w_plus, double phi, double c) {
  if (!(w_plus >= 0.0 && w_plus <= 1.0)) throw Error(ErrorKind::DomainError, "w_plus must lie in [0, 1]");
  if (!(c >= 0.0 && c <= 1.0)) throw Error(ErrorKind::DomainError, "c must lie in [0, 1]");
  if (!std::isfinite(phi)) throw Error(ErrorKind::DomainError, "phi must be finite");
  const double w_minus = 1.0 - w_plus;
  const Amplitude phase = std::polar(1.0, phi);
  return PureState::normalized({std::sqrt(w_plus), 0.0, phase * (c * std::sqrt(w_minus)),
                                phase * std::sqrt(w_minus * (1.0 - c * c))});
}

PolarizerCoeffs polarizer_coeffs(const PolarizerChannel& p) {
  const double t = p.t();
  const double n = std::sqrt(1.0 + t * t);
  const double c = std::cos(p.alpha());
  const double s = std::sin(p.alpha());
  return {(t + (1.0 - t) * c * c) / n, (t + (1.0 - t) * s * s) / n, (1.0 - t) * s * c / n};
}

Filtered prepare_after_polarizer(const PolarizerChannel& p) {
  const auto a = polarizer_coeffs(p);
  const double t = p.t();
  return {PureState::normalized({a.a1, a.a3, -a.a3, -a.a2}), 0.5 * (1.0 + t * t)};
}

double theta_zero(const PolarizerCoeffs& a) {
  // a1 >= t / sqrt(1 + t^2) > 0 except for t = 0, where a1 = cos^2(alpha) >= 0.
  return fold_half_turn(std::atan2(-a.a3, a.a1));
}

double plates_to_t(const PlateStack& stack) {
  if (stack.n_plates < 0) throw Error(ErrorKind::DomainError, "n_plates must be non-negative");
  if (!(stack.per_plate_factor > 0.0 && stack.per_plate_factor <= 1.0))
    throw Error(ErrorKind::DomainError, "per_plate_factor must lie in (0, 1]");
  return std::pow(stack.per_plate_factor, stack.n_plates);
}

PureState random_pure_state(Rng& rng) {
  boost::random::normal_distribution<double> gauss;
  std::array<Amplitude, 4> raw;
  for (auto& a : raw) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    a = {re, im};
  }
  return PureState::normalized(raw);
}

PureState random_real_pure_state(Rng& rng) {
  boost::random::normal_distribution<double> gauss;
  std::array<Amplitude, 4> raw;
  for (auto& a : raw) a = gauss(rng);
  return PureState::normalized(raw);
}

}  // namespace qe
