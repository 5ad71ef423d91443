#include "qe/quant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qe {

const char* to_string(Basis basis) { return basis == Basis::Z ? "Z" : "X"; }

namespace {

constexpr double kBranchFloor = 1e-12;
constexpr double kProbSumTol = 1e-6;

// Amplitudes in the rotated probe basis, same ordering as PureState.
std::array<Amplitude, 4> rotated(const PureState& s, double theta) {
  const Matrix2 u = probe_amplitude_rotation(theta);
  const auto& a = s.amplitudes();
  return {u(0, 0) * a[0] + u(0, 1) * a[1], u(1, 0) * a[0] + u(1, 1) * a[1],
          u(0, 0) * a[2] + u(0, 1) * a[3], u(1, 0) * a[2] + u(1, 1) * a[3]};
}

// <psi_-|psi_+> between the unnormalized conditional probe states.
Amplitude branch_overlap(const PureState& s) {
  return std::conj(s.mp()) * s.pp() + std::conj(s.mm()) * s.pm();
}

double w_minus(const PureState& s) { return std::norm(s.mp()) + std::norm(s.mm()); }

struct Blocks {
  Matrix2 pp;  // <O+|rho|O+>
  Matrix2 mm;  // <O-|rho|O->
  Matrix2 pm;  // <O+|rho|O->
};

Blocks blocks(const DensityOperator& rho) {
  return {rho.block(Branch::Plus, Branch::Plus), rho.block(Branch::Minus, Branch::Minus),
          rho.block(Branch::Plus, Branch::Minus)};
}

Blocks rotated(const DensityOperator& rho, double theta) {
  const Matrix2 u = probe_amplitude_rotation(theta);
  const Blocks b = blocks(rho);
  return {u * b.pp * u.adjoint(), u * b.mm * u.adjoint(), u * b.pm * u.adjoint()};
}

double w_minus(const DensityOperator& rho) {
  return rho.block(Branch::Minus, Branch::Minus).trace().real();
}

double c_from(double overlap_abs, double wp, double wm) {
  if (wp < kBranchFloor || wm < kBranchFloor)
    throw Error(ErrorKind::DegenerateBranch, "c is undefined when a path has zero weight");
  return std::min(1.0, overlap_abs / std::sqrt(wp * wm));
}

// Maximizer of |f| for f(theta) = f0 cos(2 theta) + f45 sin(2 theta).
double argmax_sinusoid(double f0, double f45) { return 0.5 * std::atan2(f45, f0); }

}  // namespace

double w_plus(const PureState& s) { return std::norm(s.pp()) + std::norm(s.pm()); }
double w_plus(const DensityOperator& rho) {
  return rho.block(Branch::Plus, Branch::Plus).trace().real();
}

double predictability(const PureState& s) { return std::abs(w_plus(s) - w_minus(s)); }
double predictability(const DensityOperator& rho) { return std::abs(w_plus(rho) - w_minus(rho)); }

double visibility(const PureState& s) { return 2.0 * std::abs(branch_overlap(s)); }
double visibility(const DensityOperator& rho) {
  return 2.0 * std::abs(rho.block(Branch::Plus, Branch::Minus).trace());
}

double vis0(const PureState& s) { return 2.0 * std::sqrt(w_plus(s) * w_minus(s)); }
double vis0(const DensityOperator& rho) { return 2.0 * std::sqrt(std::max(0.0, w_plus(rho) * w_minus(rho))); }

double likelihood(const PureState& s) { return std::max(w_plus(s), w_minus(s)); }
double likelihood(const DensityOperator& rho) { return std::max(w_plus(rho), w_minus(rho)); }

double distinguishability(const PureState& s) {
  // Spectrum of |a><a| - |b><b|: the determinant is -(|a|^2|b|^2 - |<a|b>|^2) <= 0.
  const double total = w_plus(s) + w_minus(s);
  const double ov = std::abs(branch_overlap(s));
  return std::sqrt(std::max(0.0, total * total - 4.0 * ov * ov));
}

double distinguishability(const DensityOperator& rho) {
  const Blocks b = blocks(rho);
  return trace_norm_2x2(b.pp - b.mm);
}

double entanglement_c(const PureState& s) {
  return c_from(std::abs(branch_overlap(s)), w_plus(s), w_minus(s));
}

double entanglement_c(const DensityOperator& rho) {
  return c_from(std::abs(rho.block(Branch::Plus, Branch::Minus).trace()), w_plus(rho), w_minus(rho));
}

double theta_zero(const PureState& s) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  const Amplitude x = s.pp();
  const Amplitude y = s.pm();
  if (std::abs(x) < kBranchFloor && std::abs(y) < kBranchFloor) return 0.0;

  // b3(theta) = sin(theta) x + cos(theta) y. Project onto the phase of the
  // larger component to get a real sinusoid with a single root per half turn.
  const Amplitude ref = std::abs(x) >= std::abs(y) ? x / std::abs(x) : y / std::abs(y);
  const auto g = [&](double theta) {
    return (std::conj(ref) * rotated(s, theta)[1]).real();
  };

  double root = half_pi;
  double lo = -half_pi;
  double hi = half_pi;
  double g_lo = g(lo);
  if (g_lo != 0.0 && g(hi) != 0.0) {
    for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double g_mid = g(mid);
      if (g_mid == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((g_mid < 0.0) == (g_lo < 0.0)) {
        lo = mid;
        g_lo = g_mid;
      } else {
        hi = mid;
      }
    }
    root = 0.5 * (lo + hi);
  }
  if (root <= -half_pi) root += std::numbers::pi;
  if (std::abs(rotated(s, root)[1]) >= tol::kRoot)
    throw Error(ErrorKind::NotFound, "no real probe rotation cancels the |O+M-> amplitude");
  return root;
}

double entanglement_c_at_theta_zero(const PureState& s) {
  const auto b = rotated(s, theta_zero(s));
  // |b1|^2 = w+ at theta0, so c = |b4| / sqrt(w-).
  const double minus = 1.0 - std::norm(b[0]);
  if (std::norm(b[0]) < kBranchFloor || minus < kBranchFloor)
    throw Error(ErrorKind::DegenerateBranch, "c is undefined when a path has zero weight");
  return std::min(1.0, std::abs(b[2]) / std::sqrt(minus));
}

double measured_distinguishability(const PureState& s, double theta) {
  const auto b = rotated(s, theta);
  return std::abs(std::norm(b[0]) - std::norm(b[2])) + std::abs(std::norm(b[1]) - std::norm(b[3]));
}

double measured_distinguishability(const DensityOperator& rho, double theta) {
  const Blocks r = rotated(rho, theta);
  return std::abs((r.pp(0, 0) - r.mm(0, 0)).real()) + std::abs((r.pp(1, 1) - r.mm(1, 1)).real());
}

double conditioned_visibility(const PureState& s, double theta) {
  const auto b = rotated(s, theta);
  return 2.0 * std::abs(b[0] * std::conj(b[2])) + 2.0 * std::abs(b[1] * std::conj(b[3]));
}

double conditioned_visibility(const DensityOperator& rho, double theta) {
  const Blocks r = rotated(rho, theta);
  return 2.0 * std::abs(r.pm(0, 0)) + 2.0 * std::abs(r.pm(1, 1));
}

double knowledge_angle(const PureState& s) {
  const auto diff = [&](double theta) {
    const auto b = rotated(s, theta);
    return (std::norm(b[0]) - std::norm(b[2])) - (std::norm(b[1]) - std::norm(b[3]));
  };
  return argmax_sinusoid(diff(0.0), diff(std::numbers::pi / 4.0));
}

double knowledge_angle(const DensityOperator& rho) {
  const auto diff = [&](double theta) {
    const Blocks r = rotated(rho, theta);
    return (r.pp(0, 0) - r.mm(0, 0) - r.pp(1, 1) + r.mm(1, 1)).real();
  };
  return argmax_sinusoid(diff(0.0), diff(std::numbers::pi / 4.0));
}

CoincidenceSet coincidence_probs(const PureState& s, double theta, Basis basis) {
  const auto b = rotated(s, theta);
  CoincidenceSet out{basis, theta};
  if (basis == Basis::Z) {
    out.p_pp = std::norm(b[0]);
    out.p_pm = std::norm(b[1]);
    out.p_mp = std::norm(b[2]);
    out.p_mm = std::norm(b[3]);
  } else {
    out.p_pp = 0.5 * std::norm(b[0] + b[2]);
    out.p_pm = 0.5 * std::norm(b[1] + b[3]);
    out.p_mp = 0.5 * std::norm(b[0] - b[2]);
    out.p_mm = 0.5 * std::norm(b[1] - b[3]);
  }
  return out;
}

CoincidenceSet coincidence_probs(const DensityOperator& rho, double theta, Basis basis) {
  const Blocks r = rotated(rho, theta);
  CoincidenceSet out{basis, theta};
  if (basis == Basis::Z) {
    out.p_pp = r.pp(0, 0).real();
    out.p_pm = r.pp(1, 1).real();
    out.p_mp = r.mm(0, 0).real();
    out.p_mm = r.mm(1, 1).real();
  } else {
    const double sum_plus = (r.pp(0, 0) + r.mm(0, 0)).real();
    const double sum_minus = (r.pp(1, 1) + r.mm(1, 1)).real();
    const double coh_plus = 2.0 * r.pm(0, 0).real();
    const double coh_minus = 2.0 * r.pm(1, 1).real();
    out.p_pp = 0.5 * (sum_plus + coh_plus);
    out.p_pm = 0.5 * (sum_minus + coh_minus);
    out.p_mp = 0.5 * (sum_plus - coh_plus);
    out.p_mm = 0.5 * (sum_minus - coh_minus);
  }
  return out;
}

namespace {

template <class State>
QuantityReport make_report(const State& s) {
  QuantityReport r{};
  r.p_pred = predictability(s);
  r.vis = visibility(s);
  r.vis0 = vis0(s);
  r.dist = distinguishability(s);
  r.w_plus = w_plus(s);
  r.likelihood = likelihood(s);
  try {
    r.c_overlap = entanglement_c(s);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegenerateBranch) throw;
  }
  return r;
}

void require_normalized(const CoincidenceSet& set) {
  if (std::abs(set.sum() - 1.0) > kProbSumTol)
    throw Error(ErrorKind::NotNormalized, std::string(to_string(set.basis)) + " probabilities do not sum to 1");
}

}  // namespace

QuantityReport report(const PureState& s) { return make_report(s); }
QuantityReport report(const DensityOperator& rho) { return make_report(rho); }

PathEstimates estimate_from_probs(const CoincidenceSet& z, const CoincidenceSet& x) {
  if (z.basis != Basis::Z || x.basis != Basis::X)
    throw Error(ErrorKind::DomainError, "expected one Z-basis and one X-basis set");
  if (std::abs(z.theta - x.theta) > tol::kDerived)
    throw Error(ErrorKind::DomainError, "coincidence sets taken at different probe angles");
  require_normalized(z);
  require_normalized(x);
  PathEstimates e{};
  e.p_pred = std::abs(z.p_pp + z.p_pm - z.p_mp - z.p_mm);
  e.d_m = std::abs(z.p_pp - z.p_mp) + std::abs(z.p_pm - z.p_mm);
  e.vis = std::abs(x.p_pp - x.p_mp + x.p_pm - x.p_mm);
  e.v_c = std::abs(x.p_pp - x.p_mp) + std::abs(x.p_pm - x.p_mm);
  return e;
}

}  // namespace qe
