#include <cmath>
#include <random>

#include "doctest.h"
#include "pvi/dynamics.hpp"
#include "pvi/linear.hpp"
#include "pvi/symmetry.hpp"

using namespace pvi;

namespace {

ParameterSet no_eta(const ParameterSet& p) { return p.with_values({p.alphas().begin(), p.alphas().end()}, 0.0); }

Vector random_vector(std::mt19937_64& rng, Eigen::Index size) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  Vector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = cplx(u(rng), 0.3 * u(rng));
  return v;
}

Vector join(const Vector& a, const Vector& b) {
  Vector v(a.size() + b.size());
  v << a, b;
  return v;
}

double rel(const Vector& a, const Vector& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("rank one canonical values") {
    const auto p = ParameterSet::degenerate(1, 1, {0.0, 0.3, 0.25, 0.45}, 0.1);
    const CanonicalState s{Vector::Constant(1, 2.0), Vector::Zero(1)};
    const cplx t = 0.7;
    CHECK(std::abs(t * canonical_case_hamiltonian(CanonicalCase::P5, p, s, t) - 2.0 * t * p.alpha(3)) < 1e-15);
    CHECK(std::string(case_info(CanonicalCase::P5).name) == "P5");
    CHECK(parse_canonical_case("n2r3") == CanonicalCase::N2R3);
    CHECK_THROWS_AS(parse_canonical_case("p7"), InvalidArgument);

    const auto d = sample_degenerate(2, 3, 4);
    const CanonicalState zero{Vector::Zero(2), Vector::Zero(2)};
    const Vector f = canonical_case_field(CanonicalCase::N2R3, d, zero, 0.4);
    CHECK(std::abs(f(1) - 1.0) < 1e-15);
  }

  TEST_CASE("coupled field at p = 0 is the Riccati equation") {
    const auto p = no_eta(sample_generic(1, 12));
    for (double t : {0.2, 0.5, 0.8})
      for (cplx q : {cplx(0.3), cplx(-1.2, 0.4)}) {
        const Vector f = coupled_p6_field(p, {Vector::Constant(1, q), Vector::Zero(1)}, t);
        CHECK(std::abs(f(0) * (t * (t - 1.0)) - riccati_rhs(p, q, t)) < 1e-14);
        CHECK(std::abs(f(1)) < 1e-15);
      }
    std::vector<cplx> a(p.alphas().begin(), p.alphas().end());
    a[0] += a[3];
    a[3] = 0.0;
    CHECK(riccati_rhs(p.with_values(a, 0.0), 0.0, 0.4) == cplx(0.0));
  }

  TEST_CASE("linear specializations") {
    std::mt19937_64 rng(3);
    for (int n = 1; n <= 4; ++n) {
      const auto p = no_eta(sample_generic(n, n));
      const auto sys = build_fuchsian(p);
      for (double t : {0.15, 0.6}) {
        const Vector x = random_vector(rng, n + 1);
        const Vector f = symmetric_field(p, {x, Vector::Zero(n + 1)}, t);
        CHECK(rel(f.head(n + 1), sys.rhs(t, x)) < 1e-13);
        CHECK(f.tail(n + 1).norm() == 0.0);
      }
    }
    for (int n = 1; n <= 3; ++n)
      for (int r = 1; r <= n + 1; ++r) {
        const auto d = no_eta(sample_degenerate(n, r, 9));
        const Vector x = random_vector(rng, n + 1);
        const Vector f = degenerate_field(d, {x, Vector::Zero(n + 1)}, 0.8);
        CHECK(rel(f.head(n + 1), build_confluent(d).rhs(0.8, x)) < 1e-13);
      }
  }

  TEST_CASE("constraint is conserved by the symmetric field") {
    for (int n = 1; n <= 4; ++n) {
      const auto p = sample_generic(n, 30 + n);
      for (int i = 0; i < 5; ++i) {
        const auto s = sample_constrained_state(n, p.eta(), 100 * n + i, 0.5, 0.3);
        const Vector f = symmetric_field(p, s, 0.35);
        const cplx d = (f.head(n + 1).array() * s.y.array() + s.x.array() * f.tail(n + 1).array()).sum();
        CHECK(std::abs(d) < 1e-12 * std::max(1.0, f.norm() * s.packed().norm()));
      }
    }
  }

  TEST_CASE("analytic gradients") {
    std::mt19937_64 rng(8);
    for (int n = 1; n <= 4; ++n) {
      const auto p = sample_generic(n, 50 + n);
      const double t = 0.3;
      const Vector z = random_vector(rng, 2 * n + 2);
      const auto g = symmetric_gradient(p, SymmetricState::unpack(z), t);
      CHECK(gradient_relative_error(
                [&](const Vector& w) { return symmetric_hamiltonian(p, SymmetricState::unpack(w), t); }, z,
                join(g.d_position, g.d_momentum)) < 1e-7);

      const Vector c = random_vector(rng, 2 * n);
      const auto gc = cp6_gradient(p, CanonicalState::unpack(c), t);
      CHECK(gradient_relative_error(
                [&](const Vector& w) { return cp6_hamiltonian(p, CanonicalState::unpack(w), t); }, c,
                join(gc.d_position, gc.d_momentum)) < 1e-7);
    }
    for (int n = 1; n <= 3; ++n)
      for (int r = 1; r <= n + 1; ++r) {
        const auto d = sample_degenerate(n, r, 2);
        const Vector z = random_vector(rng, 2 * n + 2);
        const auto g = degenerate_gradient(d, SymmetricState::unpack(z), 0.6);
        CHECK(gradient_relative_error(
                  [&](const Vector& w) { return degenerate_hamiltonian(d, SymmetricState::unpack(w), 0.6); }, z,
                  join(g.d_position, g.d_momentum)) < 1e-7);
      }
  }

  TEST_CASE("chart round trip") {
    const auto p = sample_generic(2, 4);
    const auto s = sample_constrained_state(2, p.eta(), 77, 0.5);
    const cplx t = 0.45;
    const auto img = symmetric_to_canonical(s, t);
    CHECK(std::abs(img.eta - p.eta()) < 1e-13);
    CHECK(std::abs(img.state.q(0) - t * s.x(0) / s.x(2)) < 1e-14);
    const auto back = canonical_to_symmetric(img.state, img.eta, s.x(2), t);
    CHECK(rel(back.packed(), s.packed()) < 1e-13);

    SymmetricState bad = s;
    bad.x(2) = 0.0;
    CHECK_THROWS_AS(symmetric_to_canonical(bad, t), DomainError);
  }

  TEST_CASE("canonical coordinates carry the degenerate flow") {
    for (auto which : {CanonicalCase::P5, CanonicalCase::P3, CanonicalCase::N2R1, CanonicalCase::N2R2,
                       CanonicalCase::N2R3}) {
      const auto info = case_info(which);
      const auto p = sample_degenerate(info.n, info.r, 6);
      for (int i = 0; i < 5; ++i) {
        const auto st = sample_constrained_state(info.n, p.eta(), 40 + i, 0.5);
        const double t = 0.25 + 0.1 * i;
        const Vector push = canonical_case_pushforward(which, p, st, t);
        const Vector field = canonical_case_field(which, p, canonical_case_coordinates(which, p, st), t);
        CHECK(rel(field, push) < 1e-8);
      }
    }
  }

  TEST_CASE("confluence of the fields is first order") {
    const auto d = sample_degenerate(2, 2, 11);
    const auto s = sample_constrained_state(2, d.eta(), 5, 0.5);
    const Vector f = degenerate_field(d, s, 0.6);
    const double e3 = (confluence_scaled_field(d, s, 0.6, 1e-3) - f).norm();
    const double e4 = (confluence_scaled_field(d, s, 0.6, 1e-4) - f).norm();
    const double order = std::log10(e3 / e4);
    CHECK(order > 0.8);
    CHECK(order < 1.2);
  }

  TEST_CASE("Riccati solution from the Gauss series") {
    const auto p = ParameterSet::generic(1, {0.1, 0.3, 0.25, 0.35}, 0.0);
    const auto q = [&](double u) { return riccati_from_gauss(p, u); };
    const auto q_off = [&](double u) { return riccati_from_gauss(p, u) + 0.01; };
    double worst = 0, off = 0;
    for (double t : linspace(0.1, 0.5, 9)) {
      worst = std::max(worst, riccati_residual(p, q, t));
      off = std::max(off, riccati_residual(p, q_off, t));
    }
    CHECK(worst < 1e-8);
    CHECK(off >= 1e-3);

    const auto rows = riccati_and_gauss_n1(p, {0.2, 0.3});
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].t == 0.3);
    CHECK(rows[1].q == q(0.3));
  }
}
