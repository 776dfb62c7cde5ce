#include <cmath>

#include "doctest.h"
#include "pvi/integrator.hpp"

using namespace pvi;

namespace {

Vector scalar(cplx z) {
  Vector v(1);
  v(0) = z;
  return v;
}

}  // namespace

TEST_SUITE("integrator") {
  TEST_CASE("zero field keeps the state") {
    const VectorField f = [](double, const Vector& z) { return Vector::Zero(z.size()).eval(); };
    Vector z0(2);
    z0 << cplx(1.0, 2.0), -3.0;
    const auto tr = integrate(f, 0.0, z0, 5.0);
    CHECK(tr.t.size() == 2);
    CHECK((tr.states.back() - z0).norm() == 0.0);
  }

  TEST_CASE("exponential growth and rotation") {
    const VectorField f = [](double, const Vector& z) { return (cplx(0.5, 2.0) * z).eval(); };
    const auto ts = linspace(0.0, 3.0, 31);
    const auto tr = integrate(f, 0.0, scalar(1.0), 3.0, ts);
    REQUIRE(tr.states.size() == ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const cplx exact = std::exp(cplx(0.5, 2.0) * ts[i]);
      CHECK(std::abs(tr.states[i](0) - exact) < 1e-8 * std::abs(exact));
    }
  }

  TEST_CASE("backwards in time") {
    const VectorField f = [](double t, const Vector& z) { return (t * z).eval(); };
    const auto tr = integrate(f, 1.0, scalar(1.0), -1.0, {0.5, 0.0, -1.0});
    CHECK(std::abs(tr.states[1](0) - std::exp(-0.5)) < 1e-9);
    CHECK(std::abs(tr.states[2](0) - 1.0) < 1e-9);
  }

  TEST_CASE("fixed steps converge at fourth order or better") {
    const VectorField f = [](double t, const Vector& z) { return (std::cos(t) * z).eval(); };
    auto error = [&](double h) {
      IntegratorOptions o;
      o.fixed_step = h;
      const auto tr = integrate(f, 0.0, scalar(1.0), 2.0, {}, o);
      return std::abs(tr.states.back()(0) - std::exp(std::sin(2.0)));
    };
    const double order = std::log2(error(0.1) / error(0.05));
    CHECK(order > 4.0);
  }

  TEST_CASE("dense output matches the steps") {
    const VectorField f = [](double t, const Vector& z) { return (-2.0 * t * z).eval(); };
    const auto ts = linspace(0.0, 2.0, 201);
    const auto tr = integrate(f, 0.0, scalar(1.0), 2.0, ts);
    double worst = 0;
    for (std::size_t i = 0; i < ts.size(); ++i)
      worst = std::max(worst, std::abs(tr.states[i](0) - std::exp(-ts[i] * ts[i])));
    CHECK(worst < 1e-9);
    // the same path regardless of the sample points
    const auto other = integrate(f, 0.0, scalar(1.0), 2.0, {1.0, 2.0});
    CHECK(other.states.back()(0) == tr.states.back()(0));
    CHECK(other.stats.steps == tr.stats.steps);
  }

  TEST_CASE("errors") {
    const VectorField f = [](double, const Vector& z) { return z; };
    IntegratorOptions o;
    o.singular_points = {0.0};
    CHECK_THROWS_AS(integrate(f, -1.0, scalar(1.0), 1.0, {}, o), DomainError);
    CHECK_THROWS_AS(integrate(f, 0.0, scalar(1.0), 1.0, {2.0}), InvalidArgument);
    CHECK_THROWS_AS(integrate(f, 0.0, scalar(1.0), 1.0, {0.5, 0.2}), InvalidArgument);
    CHECK_THROWS_AS(linspace(0.0, 1.0, 0), InvalidArgument);

    // z' = z^2 blows up at t = 1
    const VectorField blow = [](double, const Vector& z) { return z.cwiseProduct(z).eval(); };
    CHECK_THROWS_AS(integrate(blow, 0.0, scalar(1.0), 2.0), StepSizeUnderflow);
  }
}
