#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "pvi/integrator.hpp"
#include "pvi/linear.hpp"

using namespace pvi;

namespace {

ParameterSet no_eta(const ParameterSet& p) { return p.with_values({p.alphas().begin(), p.alphas().end()}, 0.0); }

double gap(std::vector<cplx> a, std::vector<cplx> b) {
  auto less = [](cplx u, cplx v) { return u.real() != v.real() ? u.real() < v.real() : u.imag() < v.imag(); };
  std::sort(a.begin(), a.end(), less);
  std::sort(b.begin(), b.end(), less);
  if (a.size() != b.size()) return INFINITY;
  double e = 0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

}  // namespace

TEST_SUITE("linear") {
  TEST_CASE("rank one matrices") {
    const auto p = ParameterSet::generic(1, {0.1, 0.2, 0.3, 0.4}, 0.0);
    const auto sys = build_fuchsian(p);
    Matrix a0(2, 2), a1(2, 2);
    a0 << -(0.3 + 0.4), 0.4, 0.0, 0.0;
    a1 << 0.2, 0.4, 0.2, 0.4;
    CHECK((sys.A0 - a0).norm() < 1e-15);
    CHECK((sys.A1 - a1).norm() < 1e-15);

    Matrix d0(2, 2);
    d0 << 0.3 + 0.4, 0.0, 0.4, 0.4;
    CHECK((build_dual(p).A0 - d0).norm() < 1e-15);
  }

  TEST_CASE("rank two residue at zero") {
    const auto p = sample_generic(2, 3);
    const auto sys = build_fuchsian(no_eta(p));
    CHECK(std::abs(sys.A0(0, 0) + partial_sum(p, 2, 3)) < 1e-15);
    CHECK(std::abs(sys.A0(1, 1) + partial_sum(p, 4, 1)) < 1e-15);
    CHECK(sys.A0(2, 2) == cplx(0.0));
  }

  TEST_CASE("confluent matrices") {
    const auto d = ParameterSet::degenerate(1, 2, {0.0, 0.4, 0.0, 0.6}, 0.0);
    Matrix a1(2, 2);
    a1 << 0.0, 0.0, 1.0, 0.0;
    CHECK((build_confluent(d).A1 - a1).norm() < 1e-15);

    const auto e = sample_degenerate(2, 1, 5);
    const auto sys = build_confluent(no_eta(e));
    for (int i = 0; i < 3; ++i) CHECK(sys.A1(i, 0) == cplx(1.0));
    CHECK(sys.kind == SystemKind::Confluent);
  }

  TEST_CASE("gauge frame") {
    const auto p = ParameterSet::generic(1, {0.1, 0.2, 0.3, 0.4}, 0.0);
    const auto g = gauge_transform(build_fuchsian(p), 0);
    CHECK(std::abs(g.A0(0, 0) + 0.3) < 1e-15);
    CHECK(std::abs(g.A0(1, 1)) < 1e-15);
    CHECK(std::abs(g.A0(1, 0)) < 1e-15);
  }

  TEST_CASE("residue spectra and the Fuchs relation") {
    for (int n = 1; n <= 4; ++n)
      for (int trial = 0; trial < 10; ++trial) {
        const auto p = no_eta(sample_generic(n, 100 * n + trial));
        const auto s = structural_spectra(build_fuchsian(p));
        const auto l = listed_spectra(p);
        CHECK(gap(s.at_zero, l.at_zero) < 1e-14);
        CHECK(gap(s.at_one, l.at_one) < 1e-14);
        CHECK(gap(s.at_infinity, l.at_infinity) < 1e-14);
        cplx sum = 0;
        for (const auto* v : {&l.at_zero, &l.at_one, &l.at_infinity})
          for (cplx z : *v) sum += z;
        CHECK(std::abs(sum) < 1e-13);
      }
  }

  TEST_CASE("closed form and recurrence agree in floats") {
    for (int n = 1; n <= 4; ++n) {
      const auto p = no_eta(sample_separated(n, n));
      const auto sys = build_fuchsian(p);
      CHECK(std::abs(fundamental_exponent(p, n)) < 1e-15);
      for (int k = 0; k <= n; ++k) {
        const auto a = solve_recurrence(gauge_transform(sys, k), 21);
        const auto b = closed_form_coeffs(p, k, 21);
        CHECK(b.coeffs[0](n) == cplx(1.0));
        for (int i = 0; i <= 20; ++i) CHECK((a.coeffs[i] - b.coeffs[i]).norm() <= 1e-12 * b.coeffs[i].norm());
      }
    }
  }

  TEST_CASE("fundamental solutions") {
    for (int n = 1; n <= 4; ++n) {
      const auto p = no_eta(sample_generic(n, 40 + n));
      const auto sys = build_fuchsian(p);
      for (int k = 0; k <= n; ++k) {
        const auto sol = fundamental_solution(p, k);
        for (double t : linspace(0.05, 0.5, 10)) {
          CHECK(system_residual(sys, [&](cplx u) { return sol.evaluate(u); }, t) < 1e-8);
        }
      }
    }
  }

  TEST_CASE("confluent fundamental solutions") {
    for (int n = 1; n <= 3; ++n)
      for (int r = 1; r <= n + 1; ++r) {
        const auto d = no_eta(sample_degenerate(n, r, 7));
        const auto sys = build_confluent(d);
        for (int k = 0; k <= n; ++k) {
          const auto sol = confluent_fundamental_solution(d, k);
          for (double t : {0.1, 0.7, 1.5}) CHECK(system_residual(sys, [&](cplx u) { return sol.evaluate(u); }, t) < 1e-8);
        }
      }
  }

  TEST_CASE("confluence of the matrices is first order") {
    const auto d = no_eta(sample_degenerate(2, 2, 3));
    const Matrix m = build_confluent(d).coefficient(0.6);
    const double e3 = (confluence_scaled_matrix(d, 1e-3, 0.6) - m).norm();
    const double e4 = (confluence_scaled_matrix(d, 1e-4, 0.6) - m).norm();
    const double order = std::log10(e3 / e4);
    CHECK(order > 0.8);
    CHECK(order < 1.2);
  }

  TEST_CASE("mod helper") {
    CHECK(mod_floor(5, 3) == 2);
    CHECK(mod_floor(-1, 3) == 2);
    CHECK(mod_floor(3, 3) == 0);
  }

  TEST_CASE("component equations") {
    const auto p = ParameterSet::generic(1, {0.1, 0.2, 0.3, 0.4}, 0.0);
    const auto c1 = component_ode_params(p, 1);
    REQUIRE(c1.upper.size() == 2);
    REQUIRE(c1.lower.size() == 1);
    CHECK(std::abs(c1.upper[0] - 0.9) < 1e-15);
    CHECK(std::abs(c1.upper[1] - 0.4) < 1e-15);
    CHECK(std::abs(c1.lower[0] - 0.7) < 1e-15);
    const auto c0 = component_ode_params(p, 0);
    CHECK(std::abs(c0.upper[1] - c1.upper[1] - 1.0) < 1e-15);
    CHECK(std::abs(c0.lower[0] - c1.lower[0] - 1.0) < 1e-15);

    const auto d = ParameterSet::degenerate(2, 1, {0.0, 0.2, 0.3, 0.1, 0.2, 0.2}, 0.0);
    const auto top = component_ode_params(d, 0), bottom = component_ode_params(d, 2);
    for (std::size_t j = 0; j < top.upper.size(); ++j) CHECK(std::abs(top.upper[j] - bottom.upper[j] - 1.0) < 1e-15);
  }
}
