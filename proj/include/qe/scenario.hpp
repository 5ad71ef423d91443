#pragma once

// Scenario configuration and the command implementations behind the `qe` CLI.
// Angles are degrees everywhere in this layer and radians below it.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "qe/prep.hpp"
#include "qe/sim.hpp"

namespace qe::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitViolation = 1,
  kExitInvalidInput = 2,
  kExitIoFailure = 3,
};

enum class SourceKind { Singlet, Canonical, Polarizer };

enum class OutputFormat { Csv, Json };

/// Invalid user input; field() names the offending key.
class SpecError : public std::runtime_error {
 public:
  SpecError(std::string field, const std::string& what);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ScenarioSpec {
  SourceKind source = SourceKind::Singlet;

  // canonical
  std::optional<double> w_plus;
  double phi_deg = 0.0;
  std::optional<double> c;

  // polarizer: exactly one of t / n_plates
  std::optional<double> alpha_deg;
  std::optional<double> t;
  std::optional<int> n_plates;
  double plate_factor = PlateStack{}.per_plate_factor;
  bool intensity_t = false;  // t was given as an intensity transmittivity

  std::optional<double> eta;  // unset: 1 for analytic, 0.94 for monte_carlo
  double theta_start_deg = 0.0;
  double theta_stop_deg = 90.0;
  double theta_step_deg = 1.0;
  double theta_deg = 0.0;  // single angle used by `simulate`

  SweepMode mode = SweepMode::Analytic;
  std::uint64_t shots = 1'000'000;
  std::uint64_t seed = 0;

  double effective_eta() const;
};

/// Reads the flat key-value config document. Unknown keys are rejected.
ScenarioSpec spec_from_json(const nlohmann::json& doc);

/// Throws SpecError naming the first invalid field.
void validate(const ScenarioSpec& spec);

struct PreparedSource {
  PureState state;
  double success_prob = 1.0;
  SourceInfo info;
  std::optional<double> theta0;  // radians
};

PreparedSource prepare(const ScenarioSpec& spec);

/// Scalar report (P, V, V0, D, c, w+, likelihood, theta0, success_prob).
nlohmann::json scenario_report(const ScenarioSpec& spec);

/// Reproduces one of the published configurations ("caseA", "caseB",
/// "singlet") and lists recomputed next to reported values.
nlohmann::json compare_published(const std::string& which);

SweepSeries run_sweep(const ScenarioSpec& spec);

/// CSV columns: theta_deg, p_pp_z, p_pm_z, p_mp_z, p_mm_z, p_pp_x, p_pm_x,
/// p_mp_x, p_mm_x, d_m, v_c, d_m_sq, v_c_sq, sum_sq.
void write_sweep_csv(const SweepSeries& series, std::ostream& out);
nlohmann::json sweep_json(const SweepSeries& series);

/// Z and X count records at spec.theta_deg plus estimates and standard errors.
nlohmann::json simulate_report(const ScenarioSpec& spec);
void write_simulate_csv(const nlohmann::json& report, std::ostream& out);

/// Runs the property suite on `trials` real and `trials` complex random states
/// (or `trials` singlets). Prints one PASS/FAIL line per check. Returns
/// kExitOk or kExitViolation; throws SpecError when trials is zero.
int run_verify(std::uint64_t trials, std::uint64_t seed, bool force_singlet, std::ostream& out);

/// Rounds to six significant digits.
double sig6(double value);

}  // namespace qe::cli
