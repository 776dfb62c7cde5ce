// Command-line front end: series, linear systems, integration, Weyl group
// action, verification scenarios and plot data.

#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "pvi/dynamics.hpp"
#include "pvi/hyperfn.hpp"
#include "pvi/integrator.hpp"
#include "pvi/io.hpp"
#include "pvi/linear.hpp"
#include "pvi/symmetry.hpp"
#include "pvi/verify.hpp"

using namespace pvi;
using json = nlohmann::json;

namespace {

// "1.5" or "1.5:-2" (re:im).
cplx parse_complex(const std::string& s) {
  const auto colon = s.find(':');
  try {
    if (colon == std::string::npos) return {std::stod(s), 0.0};
    return {std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
  } catch (const std::exception&) {
    throw InvalidArgument("cannot parse number '" + s + "'");
  }
}

std::vector<cplx> parse_complex_list(const std::string& s) {
  std::vector<cplx> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_complex(item));
  return out;
}

std::vector<int> parse_int_list(const std::string& s) { return parse_word(s); }

bool use_color() { return std::getenv("NO_COLOR") == nullptr && isatty(STDOUT_FILENO); }

void emit(const json& j, const std::string& out) {
  if (out.empty() || out == "-") std::cout << j.dump(2) << '\n';
  else io::write_text_file(out, j.dump(2) + "\n");
}

struct IntegrateArgs {
  std::string system = "symmetric";
  std::string params, from, out;
  int r = 0;
  double t0 = 0.1, t1 = 0.5, rtol = 1e-10, atol = 1e-12;
  int samples = 50;
};

void add_integrate_options(CLI::App* cmd, IntegrateArgs& a) {
  cmd->add_option("--system", a.system, "cp6 | symmetric | degenerate")
      ->check(CLI::IsMember({"cp6", "symmetric", "degenerate"}));
  cmd->add_option("--params", a.params, "parameter JSON file")->required();
  cmd->add_option("-r", a.r, "degeneration level (overrides the file)");
  cmd->add_option("--from", a.from, "state JSON file ({q,p} or {x,y})")->required();
  cmd->add_option("--t0", a.t0, "start time");
  cmd->add_option("--t1", a.t1, "end time");
  cmd->add_option("--rtol", a.rtol, "relative tolerance");
  cmd->add_option("--atol", a.atol, "absolute tolerance");
  cmd->add_option("--samples", a.samples, "number of equally spaced output samples");
  cmd->add_option("--out", a.out, "CSV output (default stdout); columns t, re_*, im_*");
}

int run_integrate(const IntegrateArgs& a) {
  ParameterSet p = io::params_from_json(io::read_json_file(a.params));
  if (a.r > 0) p = p.as_level(a.r);
  const json state = io::read_json_file(a.from);
  IntegratorOptions opt;
  opt.rtol = a.rtol;
  opt.atol = a.atol;
  VectorField f;
  Vector z0;
  std::vector<std::string> names;
  if (a.system == "cp6") {
    const CanonicalState s = io::canonical_state_from_json(state);
    z0 = s.packed();
    names = io::canonical_names(p.n());
    opt.singular_points = {0.0, 1.0};
    f = [p](double t, const Vector& z) { return coupled_p6_field(p, CanonicalState::unpack(z), t); };
  } else {
    const SymmetricState s = io::symmetric_state_from_json(state);
    z0 = s.packed();
    names = io::symmetric_names(p.n());
    if (a.system == "symmetric") {
      opt.singular_points = {0.0, 1.0};
      f = [p](double t, const Vector& z) { return symmetric_field(p, SymmetricState::unpack(z), t); };
    } else {
      opt.singular_points = {0.0};
      f = [p](double t, const Vector& z) { return degenerate_field(p, SymmetricState::unpack(z), t); };
    }
  }
  if (z0.size() != static_cast<Eigen::Index>(names.size()))
    throw InvalidArgument("state dimension does not match the parameter rank");
  const Trajectory tr = integrate(f, a.t0, z0, a.t1, linspace(a.t0, a.t1, std::max(2, a.samples)), opt);
  if (a.out.empty() || a.out == "-") {
    io::write_trajectory_csv(std::cout, tr, names);
  } else {
    std::ofstream os(a.out);
    if (!os) throw Error("cannot write " + a.out);
    io::write_trajectory_csv(os, tr, names);
  }
  std::cerr << "steps " << tr.stats.steps << ", rejected " << tr.stats.rejected << ", evaluations "
            << tr.stats.evaluations << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled Painleve VI systems: hypergeometric solutions, degenerations and symmetries"};
  app.require_subcommand(1);

  // hg
  auto* hg = app.add_subcommand("hg", "generalized hypergeometric series");
  hg->require_subcommand(1);
  std::string upper, lower;
  std::string t_text = "0.5";
  double rtol = 1e-14;
  auto* hg_eval = hg->add_subcommand("eval", "evaluate the series (and its ODE residual) at t");
  hg_eval->add_option("--upper", upper, "comma separated upper parameters (re or re:im)")->required();
  hg_eval->add_option("--lower", lower, "comma separated lower parameters");
  hg_eval->add_option("--t", t_text, "evaluation point (re or re:im)");
  hg_eval->add_option("--rtol", rtol, "truncation tolerance");
  auto* hg_scheme = hg->add_subcommand("scheme", "local exponents at 0, 1 and infinity");
  hg_scheme->add_option("--upper", upper, "upper parameters")->required();
  hg_scheme->add_option("--lower", lower, "lower parameters");

  // linear
  auto* lin = app.add_subcommand("linear", "linear systems and their fundamental solutions");
  lin->require_subcommand(1);
  std::string params_path, out_path;
  int k = 0, depth = 40;
  std::vector<std::string> lin_kinds = {"build", "dual", "confluent"};
  std::map<std::string, CLI::App*> lin_cmds;
  for (const auto& kind : lin_kinds) {
    auto* c = lin->add_subcommand(kind, kind == "build"   ? "Fuchsian system at y = 0, eta = 0"
                                        : kind == "dual" ? "dual Fuchsian system"
                                                         : "confluent system of a degenerate set");
    c->add_option("--params", params_path, "parameter JSON file")->required();
    c->add_option("--out", out_path, "output JSON (default stdout)");
    lin_cmds[kind] = c;
  }
  std::string at_text;
  auto* lin_fund = lin->add_subcommand("fundamental", "k-th fundamental solution at t = 0");
  lin_fund->add_option("--params", params_path, "parameter JSON file")->required();
  lin_fund->add_option("-k", k, "solution index 0..n")->required();
  lin_fund->add_option("--depth", depth, "number of coefficients");
  lin_fund->add_option("--at", at_text, "also evaluate at this t");
  lin_fund->add_option("--out", out_path, "output JSON (default stdout)");

  // integrate
  IntegrateArgs ia;
  auto* integ = app.add_subcommand("integrate", "integrate a Hamiltonian system (DOPRI5)");
  add_integrate_options(integ, ia);

  // dynamics
  auto* dyn = app.add_subcommand("dynamics", "Hamiltonian field utilities");
  dyn->require_subcommand(1);
  std::string g_system = "symmetric";
  int g_n = 1, g_r = 1, g_points = 100;
  std::uint64_t seed = 1;
  auto* grad = dyn->add_subcommand("check-gradients", "analytic gradients against finite differences");
  grad->add_option("--system", g_system, "cp6 | symmetric | degenerate | P5 | P3 | n2r1 | n2r2 | n2r3");
  grad->add_option("-n", g_n, "rank");
  grad->add_option("-r", g_r, "degeneration level");
  grad->add_option("--points", g_points, "number of random points");
  grad->add_option("--seed", seed, "random seed");

  // weyl
  auto* weyl = app.add_subcommand("weyl", "affine Weyl group action");
  weyl->require_subcommand(1);
  std::string word_text, state_path;
  double t_weyl = 0.3;
  auto* w_apply = weyl->add_subcommand("apply", "apply a word (left to right) to a state and parameters");
  w_apply->add_option("--word", word_text, "generator indices, e.g. 0,3,1")->required();
  w_apply->add_option("--params", params_path, "parameter JSON file")->required();
  w_apply->add_option("--state", state_path, "state JSON file {x, y}")->required();
  w_apply->add_option("--t", t_weyl, "time (> 0)");
  w_apply->add_option("--out", out_path, "output JSON (default stdout)");
  int w_n = 1, trials = 50;
  auto* w_rel = weyl->add_subcommand("verify-relations", "check r_i^2 and (r_i r_j)^(2-a_ij) at random points");
  w_rel->add_option("-n", w_n, "rank");
  w_rel->add_option("--trials", trials, "random regular points");
  w_rel->add_option("--seed", seed, "random seed");

  // verify
  auto* ver = app.add_subcommand("verify", "verification scenarios; exit code = number of failed scenarios");
  ver->require_subcommand(1);
  int v_n = 0, v_r = 0, jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string json_path;
  std::map<std::string, CLI::App*> ver_cmds;
  for (std::string kind : {"all", "particular", "degeneration", "weyl"}) {
    auto* c = ver->add_subcommand(kind, "run " + kind + (kind == "all" ? " scenarios" : " scenario(s)"));
    c->add_option("-n", v_n, "rank (default: every supported rank)");
    if (kind == "degeneration") c->add_option("-r", v_r, "level (default: every level)");
    c->add_option("--seed", seed, "random seed");
    c->add_option("--jobs", jobs, "worker threads");
    c->add_option("--json", json_path, "write the report as JSON");
    ver_cmds[kind] = c;
  }

  // plot
  auto* plot = app.add_subcommand("plot", "emit CSV plot data");
  plot->require_subcommand(1);
  double t0 = 0.0, t1 = 0.9, step = 0.05, t_sweep = 0.3;
  std::string depths_text = "2,4,6,8,10,12,14,16,18,20";
  auto* p_series = plot->add_subcommand("series", "columns t, re, im of a hypergeometric series");
  p_series->add_option("--upper", upper, "upper parameters")->required();
  p_series->add_option("--lower", lower, "lower parameters");
  p_series->add_option("--t0", t0, "first point");
  p_series->add_option("--t1", t1, "last point (inclusive)");
  p_series->add_option("--step", step, "spacing");
  p_series->add_option("--out", out_path, "CSV output (default stdout)");
  IntegrateArgs pa;
  auto* p_traj = plot->add_subcommand("trajectory", "columns t, re_*, im_* of an integrated path");
  add_integrate_options(p_traj, pa);
  auto* p_sweep = plot->add_subcommand("residual-sweep", "columns depth, residual of a truncated series");
  p_sweep->add_option("--params", params_path, "parameter JSON file")->required();
  p_sweep->add_option("-k", k, "solution index");
  p_sweep->add_option("--t", t_sweep, "evaluation point");
  p_sweep->add_option("--depths", depths_text, "comma separated truncation depths");
  p_sweep->add_option("--out", out_path, "CSV output (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (hg_eval->parsed()) {
      const HGSpec spec{parse_complex_list(upper), parse_complex_list(lower)};
      const cplx t = parse_complex(t_text);
      const SeriesValue v = eval_series(spec, t, rtol);
      emit({{"value", io::complex_to_json(v.value)},
            {"terms", v.terms_used},
            {"ode_residual", ode_residual(spec, t, rtol)}},
           "");
      return 0;
    }
    if (hg_scheme->parsed()) {
      const RiemannScheme s = riemann_scheme(HGSpec{parse_complex_list(upper), parse_complex_list(lower)});
      auto list = [](const std::vector<cplx>& v) {
        json a = json::array();
        for (cplx z : v) a.push_back(io::complex_to_json(z));
        return a;
      };
      emit({{"at_zero", list(s.at_zero)}, {"at_one", list(s.at_one)}, {"at_infinity", list(s.at_infinity)}}, "");
      return 0;
    }
    for (const auto& [kind, cmd] : lin_cmds) {
      if (!cmd->parsed()) continue;
      const ParameterSet p = io::params_from_json(io::read_json_file(params_path));
      const LinearSystem sys = kind == "build" ? build_fuchsian(p) : kind == "dual" ? build_dual(p) : build_confluent(p);
      emit(io::system_to_json(sys), out_path);
      return 0;
    }
    if (lin_fund->parsed()) {
      const ParameterSet p = io::params_from_json(io::read_json_file(params_path));
      const SeriesSolution sol =
          p.is_generic() ? fundamental_solution(p, k, depth) : confluent_fundamental_solution(p, k, depth);
      json j = io::solution_to_json(sol);
      if (!at_text.empty()) {
        const cplx t = parse_complex(at_text);
        j["at"] = io::complex_to_json(t);
        j["value"] = io::vector_to_json(sol.evaluate(t));
      }
      emit(j, out_path);
      return 0;
    }
    if (integ->parsed()) return run_integrate(ia);
    if (p_traj->parsed()) return run_integrate(pa);
    if (grad->parsed()) {
      auto rng = make_rng(seed, 77);
      std::uniform_real_distribution<double> u(-1.5, 1.5), time(0.1, 0.9);
      double worst = 0;
      std::function<std::pair<std::function<cplx(const Vector&)>, Vector>(const Vector&, double)> make;
      int dim = 0;
      if (g_system == "cp6" || g_system == "symmetric") {
        const ParameterSet p = sample_generic(g_n, seed);
        dim = g_system == "cp6" ? 2 * g_n : 2 * g_n + 2;
        make = [p, g_system](const Vector& z, double t) {
          if (g_system == "cp6") {
            const auto g = cp6_gradient(p, CanonicalState::unpack(z), t);
            Vector v(z.size());
            v << g.d_position, g.d_momentum;
            return std::make_pair(std::function<cplx(const Vector&)>(
                                      [p, t](const Vector& w) { return cp6_hamiltonian(p, CanonicalState::unpack(w), t); }),
                                  v);
          }
          const auto g = symmetric_gradient(p, SymmetricState::unpack(z), t);
          Vector v(z.size());
          v << g.d_position, g.d_momentum;
          return std::make_pair(std::function<cplx(const Vector&)>([p, t](const Vector& w) {
                                  return symmetric_hamiltonian(p, SymmetricState::unpack(w), t);
                                }),
                                v);
        };
      } else if (g_system == "degenerate") {
        const ParameterSet p = sample_degenerate(g_n, g_r, seed);
        dim = 2 * g_n + 2;
        make = [p](const Vector& z, double t) {
          const auto g = degenerate_gradient(p, SymmetricState::unpack(z), t);
          Vector v(z.size());
          v << g.d_position, g.d_momentum;
          return std::make_pair(std::function<cplx(const Vector&)>([p, t](const Vector& w) {
                                  return degenerate_hamiltonian(p, SymmetricState::unpack(w), t);
                                }),
                                v);
        };
      } else {
        const CanonicalCase which = parse_canonical_case(g_system);
        const auto info = case_info(which);
        const ParameterSet p = sample_degenerate(info.n, info.r, seed);
        dim = 2 * info.n;
        make = [p, which](const Vector& z, double t) {
          const auto g = canonical_case_gradient(which, p, CanonicalState::unpack(z), t);
          Vector v(z.size());
          v << g.d_position, g.d_momentum;
          return std::make_pair(std::function<cplx(const Vector&)>([p, t, which](const Vector& w) {
                                  return canonical_case_hamiltonian(which, p, CanonicalState::unpack(w), t);
                                }),
                                v);
        };
      }
      for (int i = 0; i < g_points; ++i) {
        const double t = time(rng);
        Vector z(dim);
        for (int j = 0; j < dim; ++j) z(j) = u(rng);
        auto [h, g] = make(z, t);
        worst = std::max(worst, gradient_relative_error(h, z, g));
      }
      const bool ok = worst <= 1e-7;
      std::cout << g_system << ": worst relative gradient error " << std::setprecision(3) << worst << " over "
                << g_points << " points " << (ok ? "(ok)" : "(FAIL)") << '\n';
      return ok ? 0 : 1;
    }
    if (w_apply->parsed()) {
      const ParameterSet p = io::params_from_json(io::read_json_file(params_path));
      const SymmetricState s = io::symmetric_state_from_json(io::read_json_file(state_path));
      const WeylImage img = apply_word(parse_word(word_text), s, p, t_weyl);
      emit({{"params", io::params_to_json(img.params)}, {"state", io::state_to_json(img.state)}}, out_path);
      return 0;
    }
    if (w_rel->parsed()) {
      const RelationReport rep = verify_relations(w_n, trials, seed);
      std::cout << "n=" << w_n << ": " << rep.checked << " relation checks, " << rep.failed << " failed; worst state "
                << std::setprecision(3) << rep.max_state_error << ", worst parameter " << rep.max_param_error
                << ", sum drift " << rep.max_sum_drift << '\n';
      for (const auto& f : rep.failures) {
        std::cout << "  failed word";
        for (int g : f.word) std::cout << ' ' << g;
        std::cout << ": state " << f.state_error << ", params " << f.param_error << '\n';
      }
      return rep.failed == 0 ? 0 : 1;
    }
    for (const auto& [kind, cmd] : ver_cmds) {
      if (!cmd->parsed()) continue;
      std::vector<ScenarioSpec> specs;
      for (const auto& sp : all_scenarios(4)) {
        if (kind != "all" && sp.kind != kind) continue;
        if (v_n > 0 && sp.n != v_n) continue;
        if (v_r > 0 && sp.r != v_r) continue;
        specs.push_back(sp);
      }
      if (specs.empty()) throw InvalidArgument("no scenario matches the given -n / -r");
      const auto reports = run_scenarios(specs, seed, jobs);
      const bool color = use_color();
      int failed = 0;
      json all = json::array();
      for (const auto& r : reports) {
        print_report(std::cout, r, color);
        failed += r.pass() ? 0 : 1;
        all.push_back(report_to_json(r));
      }
      std::cout << reports.size() - failed << "/" << reports.size() << " scenarios passed\n";
      if (!json_path.empty()) io::write_text_file(json_path, json{{"seed", seed}, {"reports", all}}.dump(2) + "\n");
      return std::min(failed, 119);
    }
    if (p_series->parsed()) {
      const auto up = parse_complex_list(upper), lo = parse_complex_list(lower);
      if (out_path.empty() || out_path == "-") {
        emit_series_csv(std::cout, up, lo, t0, t1, step);
      } else {
        std::ofstream os(out_path);
        if (!os) throw Error("cannot write " + out_path);
        emit_series_csv(os, up, lo, t0, t1, step);
      }
      return 0;
    }
    if (p_sweep->parsed()) {
      const ParameterSet p = io::params_from_json(io::read_json_file(params_path));
      const auto depths = parse_int_list(depths_text);
      if (out_path.empty() || out_path == "-") {
        emit_residual_sweep_csv(std::cout, p, k, t_sweep, depths);
      } else {
        std::ofstream os(out_path);
        if (!os) throw Error("cannot write " + out_path);
        emit_residual_sweep_csv(os, p, k, t_sweep, depths);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 120;
  }
  return 0;
}
