#pragma once

// Experiment simulation: overlap dephasing, multinomial coincidence counts,
// count-based estimation with standard errors and probe-angle sweeps.
//
// Randomness: every draw comes from qe::Rng (std::mt19937_64). A sweep point
// at grid index i uses its own engine seeded with point_seed(seed, i); within
// a point the Z-basis record is drawn before the X-basis record. Multinomial
// counts are sequential conditional binomials in the order pp, pm, mp, mm,
// drawn with boost::random::binomial_distribution.

#include <cstdint>
#include <optional>
#include <vector>

#include "qe/prep.hpp"
#include "qe/quant.hpp"

namespace qe {

inline constexpr double kDefaultOverlapEta = 0.94;

/// Scales the off-diagonal object blocks <O+|rho|O-> and <O-|rho|O+> by eta.
/// Throws DomainError for eta outside [0, 1].
DensityOperator apply_overlap_dephasing(const DensityOperator& rho, double eta);

struct SimConfig {
  std::uint64_t shots_per_point = 1;
  std::uint64_t seed = 0;
  double eta_overlap = kDefaultOverlapEta;
  std::vector<double> theta_grid;  // radians, strictly increasing

  /// Throws DomainError when shots_per_point is zero, eta is outside [0, 1] or
  /// the grid is empty or not strictly increasing.
  void validate() const;
};

struct CountRecord {
  double theta = 0.0;
  Basis basis = Basis::Z;
  std::uint64_t n_pp = 0;
  std::uint64_t n_pm = 0;
  std::uint64_t n_mp = 0;
  std::uint64_t n_mm = 0;
  std::uint64_t n_total = 0;

  CoincidenceSet frequencies() const;
};

struct CountEstimates {
  PathEstimates value;
  // First-order multinomial standard errors. Empty when an argument of one of
  // the absolute values is within three of its own standard errors of zero,
  // where linear propagation through |x| is invalid.
  std::optional<double> se_p_pred;
  std::optional<double> se_d_m;
  std::optional<double> se_vis;
  std::optional<double> se_v_c;
};

enum class SweepMode { Analytic, MonteCarlo };

/// Source parameters carried into the sweep header when known.
struct SourceInfo {
  std::optional<double> t;
  std::optional<double> alpha;
};

struct SweepHeader {
  double p_pred;
  double vis;
  double dist;
  std::optional<double> c_overlap;
  double w_plus;
  std::optional<double> t;
  std::optional<double> alpha;
  double eta;
};

struct SweepPoint {
  double theta;
  CoincidenceSet z;
  CoincidenceSet x;
  double d_m;
  double v_c;

  double d_m_sq() const { return d_m * d_m; }
  double v_c_sq() const { return v_c * v_c; }
  double sum_sq() const { return d_m_sq() + v_c_sq(); }
};

struct SweepSeries {
  SweepHeader header;
  std::vector<SweepPoint> points;
};

/// Mixes the sweep seed with a grid index (splitmix64 finalizer).
std::uint64_t point_seed(std::uint64_t seed, std::uint64_t index);

/// Draws shots coincidences from the exact probabilities. shots must be >= 1.
CountRecord simulate_counts(const DensityOperator& rho, double theta, Basis basis, std::uint64_t shots, Rng& rng);
CountRecord simulate_counts(const PureState& s, double theta, Basis basis, std::uint64_t shots, Rng& rng);

/// Throws InsufficientCounts below 100 events in either record and
/// DomainError when the bases or angles do not match.
CountEstimates estimate_from_counts(const CountRecord& z, const CountRecord& x);

/// Applies overlap dephasing with config.eta_overlap, then evaluates every
/// grid point. Grid points run in parallel (OpenMP); the output is
/// bit-identical to sweep_serial.
SweepSeries sweep(const DensityOperator& rho, const SimConfig& config, SweepMode mode, const SourceInfo& source = {});
SweepSeries sweep(const PureState& s, const SimConfig& config, SweepMode mode, const SourceInfo& source = {});

/// Single-threaded reference implementation of sweep.
SweepSeries sweep_serial(const DensityOperator& rho, const SimConfig& config, SweepMode mode,
                         const SourceInfo& source = {});

/// start, start + step, ... up to stop inclusive (radians in, radians out).
/// A zero-width range yields one point.
std::vector<double> uniform_grid(double start, double stop, double step);

}  // namespace qe
