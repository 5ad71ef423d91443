#include "qe/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/minima.hpp>

#include "qe/quant.hpp"

namespace qe {

namespace {

enum Check : std::size_t {
  kPathChain,
  kPhaseChain,
  kDuality,
  kPriorDuality,
  kConditionedBound,
  kSaturationAtOptimum,
  kMaxKnowledge,
  kMinConditionedVis,
  kEstimator,
  kOracleRoutes,
  kCheckCount,
};

struct CheckSpec {
  const char* name;
  double tolerance;
  bool real_only;
};

constexpr std::array<CheckSpec, kCheckCount> kSpecs = {{
    {"P <= D_m(theta) <= D", 1e-9, false},
    {"V <= V_c(theta) <= V0", 1e-9, false},
    {"D^2 + V^2 = 1", 1e-9, false},
    {"P^2 + V0^2 = 1", 1e-9, false},
    {"D_m^2 + V_c^2 <= 1", 1e-9, false},
    {"D_m^2 + V_c^2 = 1 where D_m = D", 1e-6, true},
    {"max_theta D_m = D", 1e-5, true},
    {"min_theta V_c = V", 1e-5, true},
    {"estimates from exact probabilities", 1e-10, true},
    {"amplitude route = density-matrix route", 1e-10, false},
}};

struct StateResult {
  std::array<double, kCheckCount> worst;
  std::array<bool, kCheckCount> ran;
};

void raise(double& slot, double value) { slot = std::max(slot, value); }

// Minimum of f: best point of the grid, then Brent refinement over the two
// neighbouring cells. V_c has kinks at its minimum window, so the grid value
// alone is only accurate to (slope x spacing).
template <class F>
double grid_extremum(F f, std::span<const double> grid) {
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double value = f(grid[i]);
    if (value < best_value) {
      best_value = value;
      best = i;
    }
  }
  const double step = grid.size() > 1 ? grid[1] - grid[0] : 0.0;
  const auto [at, refined] = boost::math::tools::brent_find_minima(f, grid[best] - step, grid[best] + step, 50);
  (void)at;
  return std::min(best_value, refined);
}

StateResult evaluate(const PureState& s, std::span<const double> grid, std::span<const double> fine_grid) {
  StateResult r;
  r.worst.fill(-std::numeric_limits<double>::infinity());
  r.ran.fill(true);

  const double p = predictability(s);
  const double v = visibility(s);
  const double v0 = vis0(s);
  const double d = distinguishability(s);

  raise(r.worst[kDuality], std::abs(d * d + v * v - 1.0));
  raise(r.worst[kPriorDuality], std::abs(p * p + v0 * v0 - 1.0));

  const DensityOperator rho = to_density(s);
  auto& oracle = r.worst[kOracleRoutes];
  raise(oracle, std::abs(p - predictability(rho)));
  raise(oracle, std::abs(v - visibility(rho)));
  raise(oracle, std::abs(v0 - vis0(rho)));
  raise(oracle, std::abs(d - distinguishability(rho)));
  raise(oracle, std::abs(w_plus(s) - w_plus(rho)));
  if (w_plus(s) > 1e-6 && w_plus(s) < 1.0 - 1e-6)
    raise(oracle, std::abs(entanglement_c(s) - entanglement_c(rho)));

  const bool real = s.is_real();
  for (double theta : grid) {
    const double dm = measured_distinguishability(s, theta);
    const double vc = conditioned_visibility(s, theta);
    raise(r.worst[kPathChain], std::max(p - dm, dm - d));
    raise(r.worst[kPhaseChain], std::max(v - vc, vc - v0));
    raise(r.worst[kConditionedBound], dm * dm + vc * vc - 1.0);

    raise(oracle, std::abs(dm - measured_distinguishability(rho, theta)));
    raise(oracle, std::abs(vc - conditioned_visibility(rho, theta)));
    for (Basis b : {Basis::Z, Basis::X}) {
      const CoincidenceSet a = coincidence_probs(s, theta, b);
      const CoincidenceSet o = coincidence_probs(rho, theta, b);
      raise(oracle, std::max({std::abs(a.p_pp - o.p_pp), std::abs(a.p_pm - o.p_pm), std::abs(a.p_mp - o.p_mp),
                              std::abs(a.p_mm - o.p_mm)}));
    }

    if (real) {
      const PathEstimates e =
          estimate_from_probs(coincidence_probs(s, theta, Basis::Z), coincidence_probs(s, theta, Basis::X));
      raise(r.worst[kEstimator],
            std::max({std::abs(e.p_pred - p), std::abs(e.d_m - dm), std::abs(e.vis - v), std::abs(e.v_c - vc)}));
    }
  }

  if (real) {
    r.worst[kMaxKnowledge] =
        std::abs(grid_extremum([&](double t) { return -measured_distinguishability(s, t); }, fine_grid) + d);
    r.worst[kMinConditionedVis] =
        std::abs(grid_extremum([&](double t) { return conditioned_visibility(s, t); }, fine_grid) - v);
    const double theta_opt = knowledge_angle(s);
    const double dm = measured_distinguishability(s, theta_opt);
    const double vc = conditioned_visibility(s, theta_opt);
    r.worst[kSaturationAtOptimum] = std::max(std::abs(dm * dm + vc * vc - 1.0), std::abs(dm - d));
  } else {
    for (std::size_t c = 0; c < kCheckCount; ++c)
      if (kSpecs[c].real_only) r.ran[c] = false;
  }
  return r;
}

PropertyReport reduce(const std::vector<StateResult>& results) {
  PropertyReport report;
  for (std::size_t c = 0; c < kCheckCount; ++c) {
    PropertyCheck check;
    check.name = kSpecs[c].name;
    check.tolerance = kSpecs[c].tolerance;
    check.worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (!results[i].ran[c]) continue;
      ++check.evaluated;
      const double w = results[i].worst[c];
      check.worst = std::max(check.worst, w);
      if (!(w <= check.tolerance) && !check.offender) check.offender = i;
    }
    if (check.evaluated == 0) check.worst = 0.0;
    report.checks.push_back(std::move(check));
  }
  return report;
}

std::vector<double> fine_grid_for(const PropertyOptions& options) {
  const auto n = static_cast<std::size_t>(std::ceil(std::numbers::pi / options.extremal_resolution));
  return half_turn_grid(n);
}

}  // namespace

bool PropertyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed(); });
}

std::vector<double> half_turn_grid(std::size_t n) {
  std::vector<double> grid(n);
  for (std::size_t k = 0; k < n; ++k)
    grid[k] = -std::numbers::pi / 2.0 + std::numbers::pi * static_cast<double>(k + 1) / static_cast<double>(n);
  return grid;
}

PropertyReport check_properties_serial(std::span<const PureState> states, const PropertyOptions& options) {
  const auto grid = half_turn_grid(options.theta_points);
  const auto fine = fine_grid_for(options);
  std::vector<StateResult> results;
  results.reserve(states.size());
  for (const auto& s : states) results.push_back(evaluate(s, grid, fine));
  return reduce(results);
}

PropertyReport check_properties(std::span<const PureState> states, const PropertyOptions& options) {
  const auto grid = half_turn_grid(options.theta_points);
  const auto fine = fine_grid_for(options);
  std::vector<StateResult> results(states.size());
  const auto n = static_cast<std::ptrdiff_t>(states.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) results[i] = evaluate(states[i], grid, fine);
  return reduce(results);
}

}  // namespace qe
