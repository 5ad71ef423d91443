#include "qe/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include <boost/random/binomial_distribution.hpp>

namespace qe {

DensityOperator apply_overlap_dephasing(const DensityOperator& rho, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw Error(ErrorKind::DomainError, "eta must lie in [0, 1]");
  Matrix4 m = rho.matrix();
  m.block<2, 2>(0, 2) *= eta;
  m.block<2, 2>(2, 0) *= eta;
  return DensityOperator(m);
}

void SimConfig::validate() const {
  if (shots_per_point < 1) throw Error(ErrorKind::DomainError, "shots_per_point must be >= 1");
  if (!(eta_overlap >= 0.0 && eta_overlap <= 1.0)) throw Error(ErrorKind::DomainError, "eta_overlap must lie in [0, 1]");
  if (theta_grid.empty()) throw Error(ErrorKind::DomainError, "theta_grid is empty");
  for (std::size_t i = 0; i < theta_grid.size(); ++i) {
    if (!std::isfinite(theta_grid[i])) throw Error(ErrorKind::DomainError, "theta_grid has a non-finite angle");
    if (i > 0 && !(theta_grid[i] > theta_grid[i - 1]))
      throw Error(ErrorKind::DomainError, "theta_grid must be strictly increasing");
  }
}

CoincidenceSet CountRecord::frequencies() const {
  const double n = static_cast<double>(n_total);
  return {basis, theta, n_pp / n, n_pm / n, n_mp / n, n_mm / n};
}

std::uint64_t point_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

std::uint64_t draw_binomial(std::uint64_t n, double p, Rng& rng) {
  if (n == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  boost::random::binomial_distribution<long long, double> dist(static_cast<long long>(n), p);
  return static_cast<std::uint64_t>(dist(rng));
}

CountRecord sample(const CoincidenceSet& probs, std::uint64_t shots, Rng& rng) {
  const std::array<double, 4> p = {std::max(0.0, probs.p_pp), std::max(0.0, probs.p_pm),
                                   std::max(0.0, probs.p_mp), std::max(0.0, probs.p_mm)};
  std::array<std::uint64_t, 4> n{};
  std::uint64_t remaining = shots;
  for (std::size_t i = 0; i < 3; ++i) {
    double rest = 0.0;
    for (std::size_t j = i; j < 4; ++j) rest += p[j];
    const double conditional = rest > 0.0 ? p[i] / rest : 0.0;
    n[i] = draw_binomial(remaining, conditional, rng);
    remaining -= n[i];
  }
  n[3] = remaining;
  return {probs.theta, probs.basis, n[0], n[1], n[2], n[3], shots};
}

// Standard error of |sum_i c_i f_i| with c_i in {-1, 0, +1}; empty near the kink.
struct AbsTerm {
  double arg;
  double sd;
  bool near_kink() const { return sd > 0.0 && std::abs(arg) < 3.0 * sd; }
};

AbsTerm abs_term(double f_plus, double f_minus, double n) {
  const double arg = f_plus - f_minus;
  return {arg, std::sqrt(std::max(0.0, f_plus + f_minus - arg * arg) / n)};
}

std::optional<double> full_support_se(double value, double n, std::initializer_list<AbsTerm> terms) {
  for (const auto& t : terms)
    if (t.near_kink()) return std::nullopt;
  return std::sqrt(std::max(0.0, 1.0 - value * value) / n);
}

}  // namespace

CountRecord simulate_counts(const DensityOperator& rho, double theta, Basis basis, std::uint64_t shots, Rng& rng) {
  if (shots < 1) throw Error(ErrorKind::DomainError, "shots must be >= 1");
  return sample(coincidence_probs(rho, theta, basis), shots, rng);
}

CountRecord simulate_counts(const PureState& s, double theta, Basis basis, std::uint64_t shots, Rng& rng) {
  if (shots < 1) throw Error(ErrorKind::DomainError, "shots must be >= 1");
  return sample(coincidence_probs(s, theta, basis), shots, rng);
}

CountEstimates estimate_from_counts(const CountRecord& z, const CountRecord& x) {
  for (const auto* r : {&z, &x}) {
    if (r->n_total < 100) throw Error(ErrorKind::InsufficientCounts, "at least 100 coincidences required per basis");
    if (r->n_pp + r->n_pm + r->n_mp + r->n_mm != r->n_total)
      throw Error(ErrorKind::DomainError, "counts do not add up to n_total");
  }
  const CoincidenceSet fz = z.frequencies();
  const CoincidenceSet fx = x.frequencies();
  CountEstimates out{estimate_from_probs(fz, fx), {}, {}, {}, {}};

  const double nz = static_cast<double>(z.n_total);
  const double nx = static_cast<double>(x.n_total);
  const double path_arg = fz.p_pp + fz.p_pm - fz.p_mp - fz.p_mm;
  const AbsTerm path{path_arg, std::sqrt(std::max(0.0, 1.0 - path_arg * path_arg) / nz)};
  const double phase_arg = fx.p_pp - fx.p_mp + fx.p_pm - fx.p_mm;
  const AbsTerm phase{phase_arg, std::sqrt(std::max(0.0, 1.0 - phase_arg * phase_arg) / nx)};

  out.se_p_pred = full_support_se(out.value.p_pred, nz, {path});
  out.se_d_m = full_support_se(out.value.d_m, nz, {abs_term(fz.p_pp, fz.p_mp, nz), abs_term(fz.p_pm, fz.p_mm, nz)});
  out.se_vis = full_support_se(out.value.vis, nx, {phase});
  out.se_v_c = full_support_se(out.value.v_c, nx, {abs_term(fx.p_pp, fx.p_mp, nx), abs_term(fx.p_pm, fx.p_mm, nx)});
  return out;
}

std::vector<double> uniform_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw Error(ErrorKind::DomainError, "step must be > 0");
  if (!(stop >= start)) throw Error(ErrorKind::DomainError, "stop must be >= start");
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = start + static_cast<double>(i) * step;
  return grid;
}

namespace {

SweepHeader make_header(const DensityOperator& rho, double eta, const SourceInfo& source) {
  const QuantityReport r = report(rho);
  return {r.p_pred, r.vis, r.dist, r.c_overlap, r.w_plus, source.t, source.alpha, eta};
}

SweepPoint evaluate_point(const DensityOperator& rho, const SimConfig& config, SweepMode mode, std::size_t index) {
  const double theta = config.theta_grid[index];
  if (mode == SweepMode::Analytic) {
    return {theta, coincidence_probs(rho, theta, Basis::Z), coincidence_probs(rho, theta, Basis::X),
            measured_distinguishability(rho, theta), conditioned_visibility(rho, theta)};
  }
  Rng rng(point_seed(config.seed, index));
  const CountRecord z = simulate_counts(rho, theta, Basis::Z, config.shots_per_point, rng);
  const CountRecord x = simulate_counts(rho, theta, Basis::X, config.shots_per_point, rng);
  const CountEstimates est = estimate_from_counts(z, x);
  return {theta, z.frequencies(), x.frequencies(), est.value.d_m, est.value.v_c};
}

}  // namespace

SweepSeries sweep_serial(const DensityOperator& rho, const SimConfig& config, SweepMode mode, const SourceInfo& source) {
  config.validate();
  const DensityOperator dephased = apply_overlap_dephasing(rho, config.eta_overlap);
  SweepSeries out{make_header(dephased, config.eta_overlap, source), {}};
  out.points.reserve(config.theta_grid.size());
  for (std::size_t i = 0; i < config.theta_grid.size(); ++i)
    out.points.push_back(evaluate_point(dephased, config, mode, i));
  return out;
}

SweepSeries sweep(const DensityOperator& rho, const SimConfig& config, SweepMode mode, const SourceInfo& source) {
  config.validate();
  const DensityOperator dephased = apply_overlap_dephasing(rho, config.eta_overlap);
  SweepSeries out{make_header(dephased, config.eta_overlap, source), {}};
  const auto n = static_cast<std::ptrdiff_t>(config.theta_grid.size());
  std::vector<std::optional<SweepPoint>> slots(config.theta_grid.size());
  std::exception_ptr failure;

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      slots[i] = evaluate_point(dephased, config, mode, static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(qe_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  out.points.reserve(slots.size());
  for (auto& s : slots) out.points.push_back(*s);
  return out;
}

SweepSeries sweep(const PureState& s, const SimConfig& config, SweepMode mode, const SourceInfo& source) {
  return sweep(to_density(s), config, mode, source);
}

}  // namespace qe
