#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "pvi/params.hpp"

namespace pvi {

/// Every tolerance used by the scenarios, in one place.
struct Tolerances {
  double series = 1e-10;           ///< component series against their scalar equations
  double linear_residual = 1e-8;   ///< fundamental solutions in their linear systems
  double roundtrip = 1e-7;         ///< nonlinear integration against the series
  double weyl_mapping = 1e-6;      ///< transformed trajectories in the transformed system
  double recurrence = 1e-12;       ///< recurrence against closed form, floats
  double spectra = 1e-14;          ///< structural against listed residue spectra
  double fuchs = 1e-13;            ///< sum of all local exponents
  double determinant = 1e-6;       ///< equilibrated |det| of the solution matrix (lower bound)
  double gradient = 1e-7;          ///< analytic gradients against finite differences
  double specialization = 1e-13;   ///< Hamiltonian fields against the linear systems
  double constraint = 1e-8;        ///< constraint drift along integrated paths
  double log_derivative = 1e-6;    ///< the x_n relation along a trajectory
  double map_consistency = 1e-8;   ///< canonical fields against pushed-forward fields
  double relation = 1e-12;         ///< Weyl group relations
  double sum_drift = 1e-14;        ///< parameter sum under single generators
  double riccati = 1e-8;           ///< rank one Riccati and Gauss chain
  double negative_control = 1e-4;  ///< perturbed inputs must exceed this
  double order_low = 0.8;          ///< confluence order window
  double order_high = 1.2;
};

enum class Bound { Below, Above, Within };

struct Measurement {
  std::string statement;  ///< which mathematical statement is being checked
  std::string quantity;   ///< what was measured
  double value = 0;
  Bound bound = Bound::Below;
  double limit = 0;       ///< upper limit (Below), lower limit (Above), low end (Within)
  double limit_high = 0;  ///< high end for Within
  bool pass = false;
};

struct VerificationReport {
  std::string scenario;
  std::uint64_t seed = 0;
  int n = 0;
  int r = 0;
  std::vector<Measurement> measurements;
  /// Set when the scenario aborted; an aborted scenario fails.
  std::string error;
  double wall_seconds = 0;

  bool pass() const;
  void below(const std::string& statement, const std::string& quantity, double value, double limit);
  void above(const std::string& statement, const std::string& quantity, double value, double limit);
  void within(const std::string& statement, const std::string& quantity, double value, double lo, double hi);
};

struct ScenarioOptions {
  Tolerances tol;
  /// Negative control: shift the first upper parameter of every component series.
  double perturb_a0 = 0.0;
  /// Up to this many fresh samples are drawn after a resonance or a pole.
  int resample = 5;
};

VerificationReport scenario_particular_solution(int n, std::uint64_t seed, const ScenarioOptions& opt = {});
VerificationReport scenario_degeneration(int n, int r, std::uint64_t seed, const ScenarioOptions& opt = {});
VerificationReport scenario_weyl(int n, std::uint64_t seed, const ScenarioOptions& opt = {});

struct ScenarioSpec {
  std::string kind;  ///< particular, degeneration, weyl
  int n = 1;
  int r = 0;
};

/// particular n=1..max_n, degeneration n=1..min(3,max_n) for every r, weyl n=1..min(3,max_n).
std::vector<ScenarioSpec> all_scenarios(int max_n = 4);

/// Runs the scenarios on `jobs` threads. Each scenario draws from its own
/// stream derived from (seed, position in the list), so results do not
/// depend on the thread count.
std::vector<VerificationReport> run_scenarios(const std::vector<ScenarioSpec>& specs, std::uint64_t seed, int jobs,
                                              const ScenarioOptions& opt = {});

std::uint64_t scenario_seed(std::uint64_t seed, std::uint64_t id);

nlohmann::json report_to_json(const VerificationReport& r, bool include_timing = true);
/// One line per measurement; `color` adds ANSI markers.
void print_report(std::ostream& os, const VerificationReport& r, bool color);

// ---- plot data --------------------------------------------------------------

/// Rows t, re, im of a series on t0, t0+step, ... up to t1 inclusive.
void emit_series_csv(std::ostream& os, const std::vector<cplx>& upper, const std::vector<cplx>& lower, double t0,
                     double t1, double step);

/// Rows depth, residual: the k-th gauge-frame series truncated at each depth,
/// checked in its linear system at t.
void emit_residual_sweep_csv(std::ostream& os, const ParameterSet& p, int k, double t,
                             const std::vector<int>& depths);

}  // namespace pvi
