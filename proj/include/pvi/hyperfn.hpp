#pragma once

#include <span>
#include <vector>

#include "pvi/types.hpp"

namespace pvi {

/// Upper/lower parameters of sum_i prod (a)_i / ((1)_i prod (b)_i) t^i.
///
/// With includes_factorial = false the (1)_i denominator is dropped; that
/// variant only exists to document the literal confluent display, since the
/// confluent equations are solved by the series *with* the factorial.
struct HGSpec {
  std::vector<cplx> upper;
  std::vector<cplx> lower;
  bool includes_factorial = true;

  /// Positive: radius 0. Zero: radius 1. Negative: entire.
  int growth() const {
    return static_cast<int>(upper.size()) -
           static_cast<int>(lower.size() + (includes_factorial ? 1 : 0));
  }
  bool terminates() const;
};

struct SeriesValue {
  cplx value;
  int terms_used = 0;
};

struct RiemannScheme {
  std::vector<cplx> at_zero;
  std::vector<cplx> at_one;
  std::vector<cplx> at_infinity;
};

/// Rising factorial (a)_i.
cplx pochhammer(cplx a, int i);

/// First `count` coefficients c_0..c_{count-1} of the series (c_0 = 1).
std::vector<cplx> series_coefficients(const HGSpec& spec, int count);

inline constexpr int kMaxSeriesTerms = 100000;

/// Sums the series until three consecutive terms are below rtol * |partial sum|.
/// Throws DomainError outside the disc of convergence and ResonanceError when
/// a lower parameter is a non-positive integer.
SeriesValue eval_series(const HGSpec& spec, cplx t, double rtol = 1e-14);

/// d/dt of the series, through the shifted series (prod a / prod b) F(a+1; b+1).
SeriesValue eval_series_derivative(const HGSpec& spec, cplx t, double rtol = 1e-14);

/// Applies [delta prod(delta + b_j - 1) - t prod(delta + a_j)] (parameters of
/// `op`) to t^exponent * sum_m coeffs[m] t^m, term by term, and returns
/// |image(t)| / (largest single monomial of either operator part at t).
/// The t^exponent factor cancels from the ratio.
double operator_residual(const HGSpec& op, cplx exponent, std::span<const cplx> coeffs, cplx t);

/// Residual of `series` (truncated with eval_series' rule at rtol) under the
/// operator built from `op`.
double ode_residual(const HGSpec& op, const HGSpec& series, cplx t, double rtol = 1e-14);

inline double ode_residual(const HGSpec& spec, cplx t, double rtol = 1e-14) {
  return ode_residual(spec, spec, t, rtol);
}

/// Local exponents of the generalized equation (n+1 upper, n lower parameters).
RiemannScheme riemann_scheme(const HGSpec& spec);

}  // namespace pvi
