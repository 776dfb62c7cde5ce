#include "pvi/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pvi {

namespace {

// Dormand-Prince tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
// 5th minus 4th order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense output (Hairer's contd5).
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

bool finite(const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!std::isfinite(v(i).real()) || !std::isfinite(v(i).imag())) return false;
  return true;
}

double error_norm(const Vector& err, const Vector& y0, const Vector& y1, double rtol, double atol) {
  double acc = 0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sk = atol + rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
    const double e = std::abs(err(i)) / sk;
    acc += e * e;
  }
  return err.size() ? std::sqrt(acc / static_cast<double>(err.size())) : 0.0;
}

std::string describe_underflow(double where, double step) {
  std::ostringstream os;
  os.precision(10);
  os << "step size underflow at t = " << where << " (h = " << step << "); likely a movable pole";
  return os.str();
}

}  // namespace

StepSizeUnderflow::StepSizeUnderflow(double where, double step)
    : ConvergenceError(describe_underflow(where, step)), location_(where), step_(step) {}

std::vector<double> linspace(double a, double b, int n) {
  if (n < 1) throw InvalidArgument("linspace needs at least one point");
  if (n == 1) return {a};
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  out.back() = b;
  return out;
}

Trajectory integrate(const VectorField& f, double t0, const Vector& z0, double t1,
                     const std::vector<double>& samples_in, const IntegratorOptions& opt) {
  if (!(opt.rtol > 0) || !(opt.atol > 0)) throw InvalidArgument("integrate: rtol and atol must be positive");
  const double lo = std::min(t0, t1), hi = std::max(t0, t1);
  for (double s : opt.singular_points)
    if (s >= lo && s <= hi) {
      std::ostringstream os;
      os << "integrate: the path [" << lo << ", " << hi << "] reaches the singular point " << s;
      throw DomainError(os.str());
    }
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  std::vector<double> samples = samples_in.empty() ? std::vector<double>{t0, t1} : samples_in;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i] < lo || samples[i] > hi) throw InvalidArgument("integrate: sample time outside the path");
    if (i && dir * (samples[i] - samples[i - 1]) <= 0)
      throw InvalidArgument("integrate: sample times must be strictly monotone along the path");
  }

  Trajectory tr;
  tr.t.reserve(samples.size());
  tr.states.reserve(samples.size());
  std::size_t next = 0;
  while (next < samples.size() && samples[next] == t0) {
    tr.t.push_back(t0);
    tr.states.push_back(z0);
    ++next;
  }
  if (t0 == t1) return tr;

  auto eval = [&](double t, const Vector& z) {
    ++tr.stats.evaluations;
    Vector v = f(t, z);
    if (v.size() != z.size()) throw InvalidArgument("integrate: field returned the wrong dimension");
    return v;
  };

  double t = t0;
  Vector y = z0;
  Vector k1 = eval(t, y);
  const double span = hi - lo;

  double h;
  if (opt.fixed_step > 0) {
    h = dir * opt.fixed_step;
  } else if (opt.initial_step > 0) {
    h = dir * opt.initial_step;
  } else {
    // Hairer's starting-step heuristic, first stage only.
    double d0 = 0, d1n = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double sk = opt.atol + opt.rtol * std::abs(y(i));
      d0 += std::norm(y(i)) / (sk * sk);
      d1n += std::norm(k1(i)) / (sk * sk);
    }
    d0 = std::sqrt(d0 / std::max<Eigen::Index>(1, y.size()));
    d1n = std::sqrt(d1n / std::max<Eigen::Index>(1, y.size()));
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h = dir * std::min(h0, span);
  }

  for (;;) {
    if (tr.stats.steps + tr.stats.rejected >= opt.max_steps) throw ConvergenceError("integrate: step budget exhausted");
    bool last = false;
    if (dir * (t + h - t1) >= 0) {
      h = t1 - t;
      last = true;
    }
    if (opt.fixed_step <= 0 && std::abs(h) < opt.min_relative_step * std::max(1.0, std::abs(t)) && !last)
      throw StepSizeUnderflow(t, h);

    const Vector k2 = eval(t + c2 * h, y + h * (a21 * k1));
    const Vector k3 = eval(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const Vector k4 = eval(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vector k5 = eval(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vector k6 = eval(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Vector y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const Vector k7 = eval(t + h, y1);
    const Vector err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const bool ok_values = finite(y1) && finite(k7);
    const double en = ok_values ? error_norm(err, y, y1, opt.rtol, opt.atol) : INFINITY;

    if (opt.fixed_step <= 0 && !(en <= 1.0)) {
      ++tr.stats.rejected;
      const double fac = std::isfinite(en) ? std::max(0.2, 0.9 * std::pow(en, -0.2)) : 0.2;
      h *= fac;
      if (std::abs(h) < opt.min_relative_step * std::max(1.0, std::abs(t))) throw StepSizeUnderflow(t, h);
      continue;
    }
    if (!ok_values) throw StepSizeUnderflow(t, h);

    ++tr.stats.steps;
    tr.stats.max_error_ratio = std::max(tr.stats.max_error_ratio, en);
    const double t_new = last ? t1 : t + h;

    // Dense output on (t, t_new].
    if (next < samples.size() && dir * (samples[next] - t_new) <= 0) {
      const Vector ydiff = y1 - y;
      const Vector bspl = h * k1 - ydiff;
      const Vector rc4 = ydiff - h * k7 - bspl;
      const Vector rc5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      while (next < samples.size() && dir * (samples[next] - t_new) <= 0) {
        const double s = samples[next];
        if (s == t_new) {
          tr.states.push_back(y1);
        } else {
          const double th = (s - t) / h, th1 = 1.0 - th;
          tr.states.push_back(y + th * (ydiff + th1 * (bspl + th * (rc4 + th1 * rc5))));
        }
        tr.t.push_back(s);
        ++next;
      }
    }

    t = t_new;
    y = y1;
    k1 = k7;
    if (last) break;
    if (opt.fixed_step <= 0) {
      const double fac = en > 0 ? std::clamp(0.9 * std::pow(en, -0.2), 0.2, 10.0) : 10.0;
      h *= fac;
    }
  }
  return tr;
}

}  // namespace pvi
