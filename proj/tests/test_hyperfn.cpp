#include <cmath>
#include <random>

#include "doctest.h"
#include "pvi/hyperfn.hpp"

using namespace pvi;

TEST_SUITE("hyperfn") {
  TEST_CASE("pochhammer") {
    CHECK(pochhammer(5.3, 0) == cplx(1.0));
    CHECK(std::abs(pochhammer(1.0, 4) - 24.0) < 1e-13);
    CHECK(std::abs(pochhammer(2.5, 3) - 39.375) < 1e-12);
    CHECK(pochhammer(-2.0, 3) == cplx(0.0));
  }

  TEST_CASE("closed forms") {
    // an upper parameter equal to a lower one leaves (1-t)^(-a0)
    const HGSpec binom{{0.5, 0.7}, {0.7}};
    CHECK(std::abs(eval_series(binom, 0.25).value - std::pow(0.75, -0.5)) < 1e-14);
    CHECK(std::abs(eval_series(binom, 0.25).value - 1.1547005383792515) < 1e-14);

    const HGSpec log_series{{1.0, 1.0}, {2.0}};
    CHECK(std::abs(eval_series(log_series, 0.5).value - 2.0 * std::log(2.0)) < 1e-13);
    CHECK(eval_series(log_series, 0.0).value == cplx(1.0));

    const HGSpec reduced{{0.3, 0.6}, {1.4}};
    const HGSpec padded{{0.3, 0.6, 2.2}, {1.4, 2.2}};
    CHECK(std::abs(eval_series(padded, 0.3).value - eval_series(reduced, 0.3).value) < 1e-14);

    // 1F1(a; a; t) = e^t
    const HGSpec expo{{0.8}, {0.8}};
    CHECK(std::abs(eval_series(expo, 2.0).value - std::exp(2.0)) < 1e-13);
  }

  TEST_CASE("terminating series") {
    const HGSpec poly{{-2.0, 1.5}, {0.5}};
    CHECK(poly.terminates());
    // 1 + (-2)(1.5)/0.5 t + (-2)(-1)(1.5)(2.5)/(0.5*1.5*2) t^2
    const double t = 3.0;
    CHECK(std::abs(eval_series(poly, t).value - (1.0 - 6.0 * t + 5.0 * t * t)) < 1e-12);
  }

  TEST_CASE("domain errors") {
    CHECK_THROWS_AS(eval_series(HGSpec{{0.5, 0.5}, {1.5}}, 1.2), DomainError);
    CHECK_THROWS_AS(eval_series(HGSpec{{0.5, 0.5}, {-1.0}}, 0.3), ResonanceError);
    CHECK_THROWS_AS(eval_series(HGSpec{{0.5, 0.5, 0.5}, {1.5}}, 0.1), DomainError);
  }

  TEST_CASE("derivative against finite differences") {
    const HGSpec s{{0.3, -0.4, 1.2}, {0.9, 1.7}};
    for (double t : {0.1, 0.4, 0.7}) {
      const double h = 1e-4;
      const cplx fd = (eval_series(s, t - 2 * h).value - 8.0 * eval_series(s, t - h).value +
                       8.0 * eval_series(s, t + h).value - eval_series(s, t + 2 * h).value) /
                      (12 * h);
      CHECK(std::abs(eval_series_derivative(s, t).value - fd) < 1e-9);
    }
  }

  TEST_CASE("series solve their equation") {
    const HGSpec g{{0.3, 0.45}, {0.8}};
    CHECK(ode_residual(g, 0.4, 1e-12) < 1e-10);

    HGSpec off = g;
    off.upper[0] += 0.1;
    CHECK(ode_residual(g, off, 0.4) >= 1e-4);

    // confluent 1F1: only the series with the factorial solves it
    const HGSpec conf{{0.35}, {1.25}};
    CHECK(ode_residual(conf, 2.0) < 1e-10);
    HGSpec literal = conf;
    literal.includes_factorial = false;
    CHECK(ode_residual(conf, literal, 0.5) >= 1e-4);
  }

  TEST_CASE("random generic specs solve their equation") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int n = 1; n <= 4; ++n)
      for (int trial = 0; trial < 5; ++trial) {
        HGSpec s;
        for (int j = 0; j <= n; ++j) s.upper.push_back({u(rng), u(rng)});
        for (int j = 0; j < n; ++j) s.lower.push_back({u(rng), 0.5 + std::abs(u(rng))});
        for (double t = 0.1; t < 0.95; t += 0.1) CHECK(ode_residual(s, t) < 1e-8);
      }
  }

  TEST_CASE("Riemann scheme") {
    const HGSpec g{{0.2, 0.7}, {1.3}};
    const auto s = riemann_scheme(g);
    REQUIRE(s.at_one.size() == 2);
    CHECK(s.at_one[0] == cplx(0.0));
    CHECK(std::abs(s.at_one[1] - (1.3 - 0.2 - 0.7)) < 1e-15);

    const auto z = riemann_scheme(HGSpec{{0.0, 1.0}, {1.0}});
    CHECK(z.at_zero[0] == cplx(0.0));
    CHECK(z.at_zero[1] == cplx(0.0));

    // Fuchs relation: all exponents add up to n(n+1)/2
    const auto w = riemann_scheme(HGSpec{{0.13, -0.4, 0.77}, {1.9, 0.35}});
    cplx sum = 0;
    for (const auto* v : {&w.at_zero, &w.at_one, &w.at_infinity})
      for (cplx e : *v) sum += e;
    CHECK(std::abs(sum - 3.0) < 1e-14);
  }
}
