#include "pvi/hyperfn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pvi {

namespace {

bool is_nonpositive_integer(cplx z) {
  const double re = std::round(z.real());
  return re <= 0.0 && std::abs(z - cplx(re, 0.0)) < 1e-14;
}

void check_lower(const HGSpec& spec) {
  for (const auto& b : spec.lower)
    if (is_nonpositive_integer(b))
      throw ResonanceError("lower parameter " + std::to_string(b.real()) +
                           " is a non-positive integer");
}

void check_domain(const HGSpec& spec, cplx t) {
  if (t == cplx(0.0) || spec.terminates()) return;
  const int g = spec.growth();
  if (g > 0) throw DomainError("series has zero radius of convergence");
  if (g == 0 && std::abs(t) >= 1.0)
    throw DomainError("|t| >= 1 is outside the disc of convergence");
}

// Ratio c_i / c_{i-1}.
cplx term_ratio(const HGSpec& spec, int i) {
  cplx num = 1, den = spec.includes_factorial ? cplx(i) : cplx(1);
  for (const auto& a : spec.upper) num *= a + double(i - 1);
  for (const auto& b : spec.lower) den *= b + double(i - 1);
  return num / den;
}

// Neumaier summation per component; plain summation until switched on.
struct CompensatedSum {
  double sum = 0;
  double carry = 0;

  void add(double v, bool compensated) {
    const double t = sum + v;
    if (compensated) carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
};

struct Accumulator {
  CompensatedSum re, im;
  bool compensated = false;

  void add(cplx v) {
    re.add(v.real(), compensated);
    im.add(v.imag(), compensated);
  }
  cplx value() const { return {re.sum + re.carry, im.sum + im.carry}; }
};

constexpr int kCompensateAfter = 1000;

}  // namespace

bool HGSpec::terminates() const {
  return std::any_of(upper.begin(), upper.end(), is_nonpositive_integer);
}

cplx pochhammer(cplx a, int i) {
  cplx r = 1;
  for (int m = 0; m < i; ++m) r *= a + double(m);
  return r;
}

std::vector<cplx> series_coefficients(const HGSpec& spec, int count) {
  check_lower(spec);
  std::vector<cplx> c;
  if (count <= 0) return c;
  c.reserve(count);
  c.push_back(1.0);
  for (int i = 1; i < count; ++i) c.push_back(c.back() * term_ratio(spec, i));
  return c;
}

SeriesValue eval_series(const HGSpec& spec, cplx t, double rtol) {
  if (!(rtol > 0)) throw InvalidArgument("rtol must be positive");
  check_lower(spec);
  check_domain(spec, t);
  if (t == cplx(0.0)) return {1.0, 1};

  Accumulator acc;
  acc.add(1.0);
  cplx term = 1.0;
  int small = 0;
  for (int i = 1; i < kMaxSeriesTerms; ++i) {
    term *= term_ratio(spec, i) * t;
    if (i == kCompensateAfter) acc.compensated = true;
    acc.add(term);
    small = std::abs(term) < rtol * std::abs(acc.value()) ? small + 1 : 0;
    if (small == 3) return {acc.value(), i + 1};
  }
  throw ConvergenceError("series did not converge within " + std::to_string(kMaxSeriesTerms) +
                         " terms");
}

SeriesValue eval_series_derivative(const HGSpec& spec, cplx t, double rtol) {
  HGSpec shifted = spec;
  cplx factor = 1;
  for (auto& a : shifted.upper) {
    factor *= a;
    a += 1.0;
  }
  for (auto& b : shifted.lower) {
    factor /= b;
    b += 1.0;
  }
  if (!spec.includes_factorial) {
    // Without (1)_i the shift leaves an extra (i+1) in every coefficient;
    // fall back to termwise differentiation.
    check_lower(spec);
    check_domain(spec, t);
    const auto base = eval_series(spec, t, rtol);
    const auto c = series_coefficients(spec, base.terms_used + 1);
    cplx s = 0, tp = 1;
    for (std::size_t i = 1; i < c.size(); ++i) {
      s += double(i) * c[i] * tp;
      tp *= t;
    }
    return {s, base.terms_used};
  }
  auto v = eval_series(shifted, t, rtol);
  return {factor * v.value, v.terms_used};
}

namespace {

struct OperatorImage {
  cplx image = 0;
  double scale = 0;
  /// |last shifted term|: what truncating the series leaves behind.
  double boundary = 0;
};

OperatorImage apply_operator(const HGSpec& op, cplx exponent, std::span<const cplx> coeffs, cplx t) {
  const std::size_t count = coeffs.size();
  OperatorImage out;
  cplx tp = 1;
  for (std::size_t m = 0; m <= count; ++m) {
    const cplx s = exponent + double(m);
    cplx delta_part = 0, shift_part = 0;
    if (m < count) {
      delta_part = s * coeffs[m];
      for (const auto& b : op.lower) delta_part *= s + b - 1.0;
    }
    if (m > 0) {
      shift_part = coeffs[m - 1];
      for (const auto& a : op.upper) shift_part *= s - 1.0 + a;
    }
    out.image += (delta_part - shift_part) * tp;
    out.scale = std::max({out.scale, std::abs(delta_part * tp), std::abs(shift_part * tp)});
    if (m == count) out.boundary = std::abs(shift_part * tp);
    tp *= t;
  }
  return out;
}

}  // namespace

double operator_residual(const HGSpec& op, cplx exponent, std::span<const cplx> coeffs, cplx t) {
  const auto r = apply_operator(op, exponent, coeffs, t);
  return r.scale > 0 ? std::abs(r.image) / r.scale : std::abs(r.image);
}

double ode_residual(const HGSpec& op, const HGSpec& series, cplx t, double rtol) {
  const auto v = eval_series(series, t, rtol);
  // The operator weighs term m by about m^(n+1), so a sum that is converged
  // to rtol can still leave a visible boundary term; extend until it is not.
  std::size_t count = static_cast<std::size_t>(std::max(v.terms_used, 2));
  for (;;) {
    const auto c = series_coefficients(series, static_cast<int>(count));
    const auto r = apply_operator(op, 0.0, c, t);
    if (r.boundary <= rtol * r.scale || count >= static_cast<std::size_t>(kMaxSeriesTerms))
      return r.scale > 0 ? std::abs(r.image) / r.scale : std::abs(r.image);
    count += count / 2;
  }
}

RiemannScheme riemann_scheme(const HGSpec& spec) {
  const std::size_t n = spec.lower.size();
  if (spec.upper.size() != n + 1)
    throw InvalidArgument("riemann_scheme needs n+1 upper and n lower parameters");
  RiemannScheme s;
  s.at_zero.push_back(0.0);
  for (const auto& b : spec.lower) s.at_zero.push_back(1.0 - b);
  cplx sum_b = 0, sum_a = 0;
  for (const auto& b : spec.lower) sum_b += b;
  for (const auto& a : spec.upper) sum_a += a;
  for (std::size_t i = 0; i < n; ++i) s.at_one.push_back(double(i));
  s.at_one.push_back(sum_b - sum_a);
  s.at_infinity = spec.upper;
  return s;
}

}  // namespace pvi
