#pragma once

// Complementarity quantities: predictability P, visibility V and its
// pre-interaction value V0, distinguishability D, entanglement overlap c,
// measured distinguishability D_m(theta) and conditioned visibility V_c(theta).
//
// Every quantity has two independent routes. The PureState overloads work on
// the four amplitudes directly; the DensityOperator overloads go through the
// 2x2 blocks <O_i|rho|O_j> and the trace norm. Mixed states (for example after
// overlap dephasing) only have the second route.

#include <optional>

#include "qe/core.hpp"

namespace qe {

/// Object analyzer basis: Z is 0/90 deg, X is 45/135 deg.
enum class Basis { Z, X };

const char* to_string(Basis basis);

/// Joint detection probabilities at one probe angle. Index order is
/// (object outcome, probe outcome): p_pm is object "+" with probe M-(theta).
struct CoincidenceSet {
  Basis basis = Basis::Z;
  double theta = 0.0;
  double p_pp = 0.0;
  double p_pm = 0.0;
  double p_mp = 0.0;
  double p_mm = 0.0;

  double sum() const { return p_pp + p_pm + p_mp + p_mm; }
};

struct QuantityReport {
  double p_pred;
  double vis;
  double vis0;
  double dist;
  std::optional<double> c_overlap;  // empty when one branch has no weight
  double w_plus;
  double likelihood;
};

/// Path and phase quantities inferred from one Z and one X coincidence set.
struct PathEstimates {
  double p_pred;
  double d_m;
  double vis;
  double v_c;
};

double w_plus(const PureState& s);
double w_plus(const DensityOperator& rho);

double predictability(const PureState& s);
double predictability(const DensityOperator& rho);

double visibility(const PureState& s);
double visibility(const DensityOperator& rho);

/// 2 sqrt(w+ w-), the visibility before the object-probe interaction.
double vis0(const PureState& s);
double vis0(const DensityOperator& rho);

/// max(w+, w-), the success rate of guessing the likelier path.
double likelihood(const PureState& s);
double likelihood(const DensityOperator& rho);

double distinguishability(const PureState& s);
double distinguishability(const DensityOperator& rho);

/// |<m+|m->| for the normalized conditional probe states. Throws
/// DegenerateBranch when w+ or w- is below 1e-12.
double entanglement_c(const PureState& s);
double entanglement_c(const DensityOperator& rho);

/// c read off at theta_zero: sqrt(|b4|^2 / (1 - |b1|^2)). Pure states only.
double entanglement_c_at_theta_zero(const PureState& s);

/// Probe angle in (-pi/2, pi/2] where the |O+M-(theta)> amplitude vanishes,
/// located by bisection. Throws NotFound when no angle brings it below 1e-9,
/// which happens when the O+ branch carries a relative phase no real
/// rotation can undo.
double theta_zero(const PureState& s);

double measured_distinguishability(const PureState& s, double theta);
double measured_distinguishability(const DensityOperator& rho, double theta);

double conditioned_visibility(const PureState& s, double theta);
double conditioned_visibility(const DensityOperator& rho, double theta);

/// Probe angle in (-pi/2, pi/2] maximizing D_m(theta).
double knowledge_angle(const PureState& s);
double knowledge_angle(const DensityOperator& rho);

CoincidenceSet coincidence_probs(const PureState& s, double theta, Basis basis);
CoincidenceSet coincidence_probs(const DensityOperator& rho, double theta, Basis basis);

QuantityReport report(const PureState& s);
QuantityReport report(const DensityOperator& rho);

/// Throws DomainError on mismatched bases or angles and NotNormalized when
/// either set sums to 1 only within more than 1e-6.
PathEstimates estimate_from_probs(const CoincidenceSet& z, const CoincidenceSet& x);

}  // namespace qe
