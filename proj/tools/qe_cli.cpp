// qe: command-line front end for the quantum-erasure laboratory.
//
//   qe scenario --source polarizer --alpha-deg 43 --t 0.2
//   qe scenario --compare-paper caseA
//   qe sweep --source singlet --eta 0.94 --output fig3.csv
//   qe simulate --source polarizer --alpha-deg 21 --n-plates 7 --theta-deg 20 --shots 100000
//   qe verify --trials 10000 --seed 7
//
// Exit codes: 0 success, 1 property violation, 2 invalid input, 3 I/O failure.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qe/scenario.hpp"

namespace {

using namespace qe::cli;

struct SourceFlags {
  std::string config;
  std::string source;
  double w_plus = 0, phi_deg = 0, c = 0;
  double alpha_deg = 0, t = 0, plate_factor = 0;
  int n_plates = 0;
  bool intensity_t = false;
  double start = 0, stop = 0, step = 0, theta_deg = 0;
  std::string mode;
  std::uint64_t shots = 0;
  CLI::Option *o_source{}, *o_w{}, *o_phi{}, *o_c{}, *o_alpha{}, *o_t{}, *o_plates{}, *o_factor{}, *o_start{},
      *o_stop{}, *o_step{}, *o_theta{}, *o_mode{}, *o_shots{};
};

void add_source_flags(CLI::App* app, SourceFlags& f, bool grid, bool single_angle) {
  app->add_option("--config", f.config, "Flat JSON scenario file; flags override its values");
  f.o_source = app->add_option("--source", f.source, "singlet | canonical | polarizer")
                   ->check(CLI::IsMember({"singlet", "canonical", "polarizer"}));
  f.o_w = app->add_option("--w-plus", f.w_plus, "canonical: weight of the O+ path");
  f.o_phi = app->add_option("--phi-deg", f.phi_deg, "canonical: preparation phase");
  f.o_c = app->add_option("--c", f.c, "canonical: probe-state overlap");
  f.o_alpha = app->add_option("--alpha-deg", f.alpha_deg, "polarizer: rotation from the horizontal plane");
  f.o_t = app->add_option("--t", f.t, "polarizer: amplitude transmittivity of s-polarization");
  f.o_plates = app->add_option("--n-plates", f.n_plates, "polarizer: number of Brewster plates");
  f.o_factor = app->add_option("--plate-factor", f.plate_factor, "amplitude factor per plate (default 0.8513)");
  app->add_flag("--intensity-t", f.intensity_t, "--t is an intensity transmittivity (square root is taken)");
  if (grid) {
    f.o_start = app->add_option("--start", f.start, "first probe angle, degrees (default 0)");
    f.o_stop = app->add_option("--stop", f.stop, "last probe angle, degrees (default 90)");
    f.o_step = app->add_option("--step", f.step, "probe angle step, degrees (default 1)");
    f.o_mode = app->add_option("--mode", f.mode, "analytic | monte_carlo")
                   ->check(CLI::IsMember({"analytic", "monte_carlo"}));
  }
  if (single_angle) f.o_theta = app->add_option("--theta-deg", f.theta_deg, "probe angle, degrees");
  if (grid || single_angle) f.o_shots = app->add_option("--shots", f.shots, "coincidences per basis and angle");
}

bool given(const CLI::Option* o) { return o != nullptr && o->count() > 0; }

ScenarioSpec build_spec(const SourceFlags& f, const CLI::Option* o_seed, std::uint64_t seed, const CLI::Option* o_eta,
                        double eta) {
  ScenarioSpec s;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw SpecError("config", "cannot read " + f.config);
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw SpecError("config", e.what());
    }
    s = spec_from_json(doc);
  }
  if (given(f.o_source)) {
    if (f.source == "singlet") s.source = SourceKind::Singlet;
    else if (f.source == "canonical") s.source = SourceKind::Canonical;
    else s.source = SourceKind::Polarizer;
  }
  if (given(f.o_w)) s.w_plus = f.w_plus;
  if (given(f.o_phi)) s.phi_deg = f.phi_deg;
  if (given(f.o_c)) s.c = f.c;
  if (given(f.o_alpha)) s.alpha_deg = f.alpha_deg;
  if (given(f.o_t) && given(f.o_plates)) throw SpecError("t", "give exactly one of t and n_plates");
  if (given(f.o_t)) {
    s.t = f.t;
    s.n_plates.reset();
  }
  if (given(f.o_plates)) {
    s.n_plates = f.n_plates;
    s.t.reset();
  }
  if (given(f.o_factor)) s.plate_factor = f.plate_factor;
  if (f.intensity_t) s.intensity_t = true;
  if (given(f.o_start)) s.theta_start_deg = f.start;
  if (given(f.o_stop)) s.theta_stop_deg = f.stop;
  if (given(f.o_step)) s.theta_step_deg = f.step;
  if (given(f.o_theta)) s.theta_deg = f.theta_deg;
  if (given(f.o_mode)) s.mode = f.mode == "monte_carlo" ? qe::SweepMode::MonteCarlo : qe::SweepMode::Analytic;
  if (given(f.o_shots)) s.shots = f.shots;
  if (given(o_seed)) s.seed = seed;
  if (given(o_eta)) s.eta = eta;
  validate(s);
  return s;
}

int emit(const std::string& text, const std::string& output) {
  if (output.empty() || output == "-") {
    std::cout << text;
    std::cout.flush();
    return std::cout ? kExitOk : kExitIoFailure;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out) {
    std::cerr << "qe: cannot open " << output << " for writing\n";
    return kExitIoFailure;
  }
  out << text;
  out.close();
  if (!out) {
    std::cerr << "qe: write to " << output << " failed\n";
    return kExitIoFailure;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-erasure complementarity laboratory"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  double eta = 1.0;
  std::string output;
  std::string format;
  auto* o_seed = app.add_option("--seed", seed, "seed for random draws")->option_text("UINT");
  auto* o_eta = app.add_option("--eta", eta, "mode-overlap factor applied as object dephasing");
  app.add_option("--output", output, "output path (default stdout)");
  app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  SourceFlags scen_flags, sweep_flags, sim_flags;
  std::string compare;
  auto* scenario = app.add_subcommand("scenario", "scalar complementarity quantities of a source (JSON)");
  scenario->fallthrough();
  add_source_flags(scenario, scen_flags, false, false);
  scenario->add_option("--compare-paper", compare, "caseA | caseB | singlet: recomputed vs reported values")
      ->check(CLI::IsMember({"caseA", "caseB", "singlet"}));

  auto* sweep = app.add_subcommand("sweep", "probe-angle sweep of coincidences, D_m and V_c (CSV)");
  sweep->fallthrough();
  add_source_flags(sweep, sweep_flags, true, false);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo coincidence counts at one probe angle");
  simulate->fallthrough();
  add_source_flags(simulate, sim_flags, false, true);

  std::uint64_t trials = 10000;
  bool force_singlet = false;
  auto* verify = app.add_subcommand("verify", "check the complementarity relations on random states");
  verify->fallthrough();
  verify->add_option("--trials", trials, "number of random states of each kind (default 10000)");
  verify->add_flag("--force-singlet", force_singlet, "use the singlet for every trial");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    if (*scenario) {
      nlohmann::json report;
      if (!compare.empty()) {
        report = compare_published(compare);
      } else {
        report = scenario_report(build_spec(scen_flags, o_seed, seed, o_eta, eta));
      }
      std::ostringstream text;
      if (format == "csv") {
        text << "key,value\n";
        for (const auto& [k, v] : report.items())
          if (!v.is_structured()) text << k << ',' << v.dump() << '\n';
      } else {
        text << report.dump(2) << '\n';
      }
      return emit(text.str(), output);
    }
    if (*sweep) {
      const ScenarioSpec spec = build_spec(sweep_flags, o_seed, seed, o_eta, eta);
      const auto series = run_sweep(spec);
      std::ostringstream text;
      if (format == "json") text << sweep_json(series).dump(2) << '\n';
      else write_sweep_csv(series, text);
      return emit(text.str(), output);
    }
    if (*simulate) {
      ScenarioSpec spec = build_spec(sim_flags, o_seed, seed, o_eta, eta);
      spec.mode = qe::SweepMode::MonteCarlo;
      const auto report = simulate_report(spec);
      std::ostringstream text;
      if (format == "csv") write_simulate_csv(report, text);
      else text << report.dump(2) << '\n';
      return emit(text.str(), output);
    }
    std::ostringstream text;
    const int code = run_verify(trials, seed, force_singlet, text);
    const int io = emit(text.str(), output);
    return io != kExitOk ? io : code;
  } catch (const SpecError& e) {
    std::cerr << "qe: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const qe::Error& e) {
    std::cerr << "qe: " << e.what() << '\n';
    return kExitInvalidInput;
  }
}
