#include "pvi/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "pvi/dual.hpp"
#include "pvi/hyperfn.hpp"

namespace pvi {

namespace {

void require_size(const Vector& v, Eigen::Index size, const char* what) {
  if (v.size() != size) throw InvalidArgument(std::string(what) + ": wrong state dimension");
}

void require_fuchsian_time(cplx t, const char* what) {
  if (t == cplx(0.0) || t == cplx(1.0))
    throw DomainError(std::string(what) + ": t is a singular point (0 or 1)");
}

void require_nonzero_time(cplx t, const char* what) {
  if (t == cplx(0.0)) throw DomainError(std::string(what) + ": t = 0 is singular");
}

// alpha_{2i+2}^{2n-2i-1}, the tail sum from index 2i+2 to 2n+1.
cplx tail(const ParameterSet& p, int i) { return partial_sum(p, 2 * i + 2, 2 * p.n() - 2 * i - 1); }

struct VI {
  cplx k0, k1, kt, k;
};

VI vi_constants(const ParameterSet& p, int i) {
  const int n = p.n();
  VI c;
  c.k0 = p.odd_sum() - p.alpha(2 * i - 1) - p.eta();
  c.k1 = 0;
  for (int j = 0; j < i; ++j) c.k1 += p.alpha(2 * j);
  c.kt = 0;
  for (int j = i; j <= n; ++j) c.kt += p.alpha(2 * j);
  c.k = p.alpha(2 * i - 1) * p.eta();
  return c;
}

Vector pack(const Gradient& g, cplx scale) {
  // (dH/dmomentum, -dH/dposition) * scale
  const auto m = g.d_position.size();
  Vector out(2 * m);
  out.head(m) = scale * g.d_momentum;
  out.tail(m) = -scale * g.d_position;
  return out;
}

}  // namespace

Vector CanonicalState::packed() const {
  Vector z(q.size() + p.size());
  z << q, p;
  return z;
}

CanonicalState CanonicalState::unpack(const Vector& z) {
  if (z.size() % 2 != 0) throw InvalidArgument("canonical state needs an even dimension");
  const auto m = z.size() / 2;
  return {z.head(m), z.tail(m)};
}

Vector SymmetricState::packed() const {
  Vector z(x.size() + y.size());
  z << x, y;
  return z;
}

SymmetricState SymmetricState::unpack(const Vector& z) {
  if (z.size() % 2 != 0) throw InvalidArgument("symmetric state needs an even dimension");
  const auto m = z.size() / 2;
  return {z.head(m), z.tail(m)};
}

// ---- coupled system ---------------------------------------------------------

cplx cp6_hamiltonian(const ParameterSet& p, const CanonicalState& s, cplx t) {
  const int n = p.n();
  require_size(s.q, n, "cp6_hamiltonian");
  require_size(s.p, n, "cp6_hamiltonian");
  cplx h = 0;
  for (int i = 1; i <= n; ++i) {
    const VI c = vi_constants(p, i);
    const cplx q = s.q(i - 1), m = s.p(i - 1);
    h += q * (q - 1.0) * (q - t) * m * m - c.k0 * (q - 1.0) * (q - t) * m - c.k1 * q * (q - t) * m -
         (c.kt - 1.0) * q * (q - 1.0) * m + c.k * q;
  }
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      const cplx qi = s.q(i - 1), pi = s.p(i - 1), qj = s.q(j - 1), pj = s.p(j - 1);
      const cplx ai = p.alpha(2 * i - 1), aj = p.alpha(2 * j - 1);
      h += (qi - 1.0) * (qj - t) * ((qi * pi + ai) * pj + pi * (qj * pj + aj));
    }
  return h;
}

Gradient cp6_gradient(const ParameterSet& p, const CanonicalState& s, cplx t) {
  const int n = p.n();
  require_size(s.q, n, "cp6_gradient");
  require_size(s.p, n, "cp6_gradient");
  Gradient g{Vector::Zero(n), Vector::Zero(n)};
  for (int i = 1; i <= n; ++i) {
    const VI c = vi_constants(p, i);
    const cplx q = s.q(i - 1), m = s.p(i - 1);
    g.d_momentum(i - 1) += 2.0 * q * (q - 1.0) * (q - t) * m - c.k0 * (q - 1.0) * (q - t) -
                           c.k1 * q * (q - t) - (c.kt - 1.0) * q * (q - 1.0);
    g.d_position(i - 1) += ((q - 1.0) * (q - t) + q * (q - t) + q * (q - 1.0)) * m * m -
                           c.k0 * (2.0 * q - t - 1.0) * m - c.k1 * (2.0 * q - t) * m -
                           (c.kt - 1.0) * (2.0 * q - 1.0) * m + c.k;
  }
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      const cplx qi = s.q(i - 1), pi = s.p(i - 1), qj = s.q(j - 1), pj = s.p(j - 1);
      const cplx ai = p.alpha(2 * i - 1), aj = p.alpha(2 * j - 1);
      const cplx w = (qi * pi + ai) * pj + pi * (qj * pj + aj);
      const cplx front = (qi - 1.0) * (qj - t);
      g.d_position(i - 1) += (qj - t) * w + front * pi * pj;
      g.d_position(j - 1) += (qi - 1.0) * w + front * pi * pj;
      g.d_momentum(i - 1) += front * (qi * pj + qj * pj + aj);
      g.d_momentum(j - 1) += front * (qi * pi + ai + pi * qj);
    }
  return g;
}

Vector coupled_p6_field(const ParameterSet& p, const CanonicalState& s, cplx t) {
  require_fuchsian_time(t, "coupled_p6_field");
  return pack(cp6_gradient(p, s, t), 1.0 / (t * (t - 1.0)));
}

// ---- symmetric form ---------------------------------------------------------

cplx symmetric_hamiltonian(const ParameterSet& p, const SymmetricState& s, cplx t) {
  const int n = p.n();
  require_size(s.x, n + 1, "symmetric_hamiltonian");
  require_size(s.y, n + 1, "symmetric_hamiltonian");
  cplx h0 = 0, u_total = 0, y_total = s.y.sum(), y_before = 0;
  for (int i = 0; i <= n; ++i) {
    const cplx xi = s.x(i), yi = s.y(i);
    const cplx u = xi * (xi * yi + p.alpha(2 * i + 1));
    h0 += 0.5 * xi * xi * yi * yi - tail(p, i) * xi * yi + u * y_before;
    u_total += u;
    y_before += yi;
  }
  return h0 / t + u_total * y_total / (1.0 - t);
}

Gradient symmetric_gradient(const ParameterSet& p, const SymmetricState& s, cplx t) {
  const int n = p.n();
  require_size(s.x, n + 1, "symmetric_gradient");
  require_size(s.y, n + 1, "symmetric_gradient");
  Vector u(n + 1);
  for (int i = 0; i <= n; ++i) u(i) = s.x(i) * (s.x(i) * s.y(i) + p.alpha(2 * i + 1));
  const cplx y_total = s.y.sum(), u_total = u.sum();
  Gradient g{Vector::Zero(n + 1), Vector::Zero(n + 1)};
  cplx y_before = 0, u_after = u_total;
  for (int m = 0; m <= n; ++m) {
    const cplx xm = s.x(m), ym = s.y(m), c = tail(p, m);
    const cplx du_dx = 2.0 * xm * ym + p.alpha(2 * m + 1);
    u_after -= u(m);
    const cplx h0x = xm * ym * ym - c * ym + du_dx * y_before;
    const cplx h0y = xm * xm * ym - c * xm + xm * xm * y_before + u_after;
    g.d_position(m) = h0x / t + du_dx * y_total / (1.0 - t);
    g.d_momentum(m) = h0y / t + (xm * xm * y_total + u_total) / (1.0 - t);
    y_before += ym;
  }
  return g;
}

Vector symmetric_field(const ParameterSet& p, const SymmetricState& s, cplx t) {
  require_fuchsian_time(t, "symmetric_field");
  return pack(symmetric_gradient(p, s, t), 1.0);
}

// ---- degenerate hierarchy ---------------------------------------------------

namespace {

int require_degenerate(const ParameterSet& p, const char* what) {
  const int r = p.level();
  if (r < 1 || r > p.n() + 1) throw InvalidArgument(std::string(what) + " needs a degenerate parameter set");
  return r;
}

}  // namespace

cplx degenerate_hamiltonian(const ParameterSet& p, const SymmetricState& s, cplx t) {
  const int n = p.n();
  const int r = require_degenerate(p, "degenerate_hamiltonian");
  require_size(s.x, n + 1, "degenerate_hamiltonian");
  require_size(s.y, n + 1, "degenerate_hamiltonian");
  require_nonzero_time(t, "degenerate_hamiltonian");
  cplx th = 0;
  for (int i = 0; i <= n; ++i) {
    const cplx w = s.x(i) * s.y(i);
    th += 0.5 * w * (w - 2.0 * tail(p, i));
  }
  for (int i = 0; i <= r - 2; ++i) th += s.x(i + 1) * s.y(i);
  for (int i = r - 1; i <= n; ++i) {
    cplx v = t * s.x(0);
    for (int j = i + 1; j <= n; ++j) v += s.x(j) * (s.x(j) * s.y(j) + p.alpha(2 * j + 1));
    th += v * s.y(i);
  }
  return th / t;
}

Gradient degenerate_gradient(const ParameterSet& p, const SymmetricState& s, cplx t) {
  const int n = p.n();
  const int r = require_degenerate(p, "degenerate_gradient");
  require_size(s.x, n + 1, "degenerate_gradient");
  require_size(s.y, n + 1, "degenerate_gradient");
  require_nonzero_time(t, "degenerate_gradient");
  Vector u(n + 1);
  for (int j = 0; j <= n; ++j) u(j) = s.x(j) * (s.x(j) * s.y(j) + p.alpha(2 * j + 1));
  cplx y_coupled = 0;  // sum_{i >= r-1} y_i
  for (int i = r - 1; i <= n; ++i) y_coupled += s.y(i);

  Gradient g{Vector::Zero(n + 1), Vector::Zero(n + 1)};
  cplx y_run = 0;  // sum_{i=r-1}^{m-1} y_i
  cplx u_after = 0;
  for (int j = 0; j <= n; ++j) u_after += u(j);
  for (int m = 0; m <= n; ++m) {
    const cplx xm = s.x(m), ym = s.y(m), c = tail(p, m);
    u_after -= u(m);
    cplx gx = xm * ym * ym - c * ym + (2.0 * xm * ym + p.alpha(2 * m + 1)) * y_run;
    cplx gy = xm * xm * ym - c * xm + xm * xm * y_run;
    if (m >= 1 && m - 1 <= r - 2) gx += s.y(m - 1);
    if (m == 0) gx += t * y_coupled;
    if (m <= r - 2) gy += s.x(m + 1);
    else gy += t * s.x(0) + u_after;
    g.d_position(m) = gx / t;
    g.d_momentum(m) = gy / t;
    if (m >= r - 1) y_run += ym;
  }
  return g;
}

Vector degenerate_field(const ParameterSet& p, const SymmetricState& s, cplx t) {
  return pack(degenerate_gradient(p, s, t), 1.0);
}

Vector confluence_scaled_field(const ParameterSet& target, const SymmetricState& s, cplx t, double eps) {
  const int n = target.n();
  const int r = require_degenerate(target, "confluence_scaled_field");
  if (eps == 0.0) throw InvalidArgument("confluence_scaled_field: eps must be nonzero");
  const ParameterSet source = degenerate_replace(target.as_level(r - 1), eps);

  SymmetricState old = s;
  for (int i = 0; i <= r - 2; ++i) {
    old.x(i) /= eps;
    old.y(i) *= eps;
  }
  const cplx t_old = eps * t;
  Vector f = r == 1 ? symmetric_field(source, old, t_old) : degenerate_field(source, old, t_old);
  for (int i = 0; i <= n; ++i) {
    const double kx = i <= r - 2 ? eps : 1.0;
    f(i) *= eps * kx;
    f(n + 1 + i) *= eps / kx;
  }
  return f;
}

// ---- chart between the two forms --------------------------------------------

ChartImage symmetric_to_canonical(const SymmetricState& s, cplx t) {
  const auto n = s.x.size() - 1;
  if (n < 1 || s.y.size() != s.x.size()) throw InvalidArgument("symmetric_to_canonical: bad state");
  if (t == cplx(0.0)) throw DomainError("symmetric_to_canonical: t = 0");
  const cplx xn = s.x(n);
  if (xn == cplx(0.0)) throw DomainError("symmetric_to_canonical: x_n = 0, the chart breaks down");
  ChartImage out{{Vector(n), Vector(n)}, -(s.x.array() * s.y.array()).sum()};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.state.q(i) = t * s.x(i) / xn;
    out.state.p(i) = xn * s.y(i) / t;
  }
  return out;
}

SymmetricState canonical_to_symmetric(const CanonicalState& c, cplx eta, cplx x_n, cplx t) {
  const auto n = c.q.size();
  if (c.p.size() != n || n < 1) throw InvalidArgument("canonical_to_symmetric: bad state");
  if (x_n == cplx(0.0) || t == cplx(0.0)) throw DomainError("canonical_to_symmetric: x_n and t must be nonzero");
  SymmetricState s{Vector(n + 1), Vector(n + 1)};
  for (Eigen::Index i = 0; i < n; ++i) {
    s.x(i) = x_n * c.q(i) / t;
    s.y(i) = t * c.p(i) / x_n;
  }
  s.x(n) = x_n;
  s.y(n) = -((c.q.array() * c.p.array()).sum() + eta) / x_n;
  return s;
}

cplx xn_log_derivative(const ParameterSet& p, const CanonicalState& c, cplx eta, cplx t) {
  const int n = p.n();
  require_size(c.q, n, "xn_log_derivative");
  cplx v = t * p.alpha(2 * n + 1) - (t + 1.0) * eta;
  for (int i = 1; i <= n; ++i) {
    const cplx q = c.q(i - 1);
    v += (q - 1.0) * (q - t) * c.p(i - 1) + p.alpha(2 * i - 1) * q;
  }
  return v;
}

// ---- canonical systems of ranks one and two ----------------------------------

CanonicalCaseInfo case_info(CanonicalCase which) {
  switch (which) {
    case CanonicalCase::P5: return {"P5", 1, 1, true};
    case CanonicalCase::P3: return {"P3", 1, 2, false};
    case CanonicalCase::N2R1: return {"n2r1", 2, 1, true};
    case CanonicalCase::N2R2: return {"n2r2", 2, 2, true};
    case CanonicalCase::N2R3: return {"n2r3", 2, 3, true};
  }
  throw InvalidArgument("unknown canonical case");
}

CanonicalCase parse_canonical_case(const std::string& name) {
  for (auto c : {CanonicalCase::P5, CanonicalCase::P3, CanonicalCase::N2R1, CanonicalCase::N2R2,
                 CanonicalCase::N2R3}) {
    std::string key = case_info(c).name;
    std::string lower = name;
    std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
    std::transform(key.begin(), key.end(), key.begin(), ::tolower);
    if (lower == key) return c;
  }
  throw InvalidArgument("unknown canonical case '" + name + "' (P5, P3, n2r1, n2r2, n2r3)");
}

namespace {

void require_case(CanonicalCase which, const ParameterSet& p, const CanonicalState& s) {
  const auto info = case_info(which);
  if (p.n() != info.n) throw InvalidArgument(std::string(info.name) + ": parameter rank mismatch");
  require_size(s.q, info.n, info.name);
  require_size(s.p, info.n, info.name);
}

// tH and its partials for each case.
struct CaseValue {
  cplx th;
  Gradient g;
};

CaseValue case_value(CanonicalCase which, const ParameterSet& p, const CanonicalState& s, cplx t) {
  const cplx e = p.eta();
  const cplx a2 = p.alpha(2), a3 = p.alpha(3);
  CaseValue v;
  const auto m = s.q.size();
  v.g = {Vector::Zero(m), Vector::Zero(m)};
  switch (which) {
    case CanonicalCase::P5: {
      const cplx q = s.q(0), x = s.p(0), k = e + a2 - a3;
      v.th = q * (q - 1.0) * x * (x + t) - q * x * k + (e - a3) * x + t * a3 * q;
      v.g.d_position(0) = (2.0 * q - 1.0) * x * (x + t) - x * k + t * a3;
      v.g.d_momentum(0) = q * (q - 1.0) * (2.0 * x + t) - q * k + (e - a3);
      break;
    }
    case CanonicalCase::P3: {
      const cplx q = s.q(0), x = s.p(0);
      v.th = q * q * x * (x - 1.0) + (e + a3) * q * x + t * x - e * q;
      v.g.d_position(0) = 2.0 * q * x * (x - 1.0) + (e + a3) * x - e;
      v.g.d_momentum(0) = q * q * (2.0 * x - 1.0) + (e + a3) * q + t;
      break;
    }
    case CanonicalCase::N2R1: {
      const cplx q1 = s.q(0), q2 = s.q(1), p1 = s.p(0), p2 = s.p(1);
      const cplx a4 = p.alpha(4), a5 = p.alpha(5);
      const cplx k1 = e + a2 - a3 - a5, l1 = e - a3 - a5, k2 = e + a2 + a4 - a5, l2 = e - a5;
      v.th = q1 * (q1 - 1.0) * p1 * (p1 + t) - k1 * q1 * p1 + l1 * p1 + a3 * t * q1 +
             (q1 - 1.0) * p1 * q2 * p2 + (q1 - 1.0) * (q1 * p1 + a3) * p2 + q2 * (q2 - 1.0) * p2 * (p2 + t) -
             k2 * q2 * p2 + l2 * p2 + a5 * t * q2;
      v.g.d_position(0) = (2.0 * q1 - 1.0) * p1 * (p1 + t) - k1 * p1 + a3 * t + p1 * q2 * p2 +
                          (q1 * p1 + a3) * p2 + (q1 - 1.0) * p1 * p2;
      v.g.d_momentum(0) = q1 * (q1 - 1.0) * (2.0 * p1 + t) - k1 * q1 + l1 + (q1 - 1.0) * q2 * p2 +
                          (q1 - 1.0) * q1 * p2;
      v.g.d_position(1) = (q1 - 1.0) * p1 * p2 + (2.0 * q2 - 1.0) * p2 * (p2 + t) - k2 * p2 + a5 * t;
      v.g.d_momentum(1) = (q1 - 1.0) * p1 * q2 + (q1 - 1.0) * (q1 * p1 + a3) + q2 * (q2 - 1.0) * (2.0 * p2 + t) -
                          k2 * q2 + l2;
      break;
    }
    case CanonicalCase::N2R2: {
      const cplx q1 = s.q(0), q2 = s.q(1), p1 = s.p(0), p2 = s.p(1);
      const cplx a4 = p.alpha(4), a5 = p.alpha(5), mm = e + a3 + a4 + a5;
      v.th = q1 * q1 * p1 * (p1 - 1.0) + (e + a3) * q1 * p1 + t * p1 - a3 * q1 + q1 * p1 * q2 * p2 +
             p1 * q2 * (q2 * p2 + a5) + q2 * q2 * p2 * (p2 - 1.0) + mm * q2 * p2 + t * p2 - a5 * q2;
      v.g.d_position(0) = 2.0 * q1 * p1 * (p1 - 1.0) + (e + a3) * p1 - a3 + p1 * q2 * p2;
      v.g.d_momentum(0) = q1 * q1 * (2.0 * p1 - 1.0) + (e + a3) * q1 + t + q1 * q2 * p2 + q2 * (q2 * p2 + a5);
      v.g.d_position(1) = q1 * p1 * p2 + p1 * (2.0 * q2 * p2 + a5) + 2.0 * q2 * p2 * (p2 - 1.0) + mm * p2 - a5;
      v.g.d_momentum(1) = q1 * p1 * q2 + p1 * q2 * q2 + q2 * q2 * (2.0 * p2 - 1.0) + mm * q2 + t;
      break;
    }
    case CanonicalCase::N2R3: {
      const cplx q1 = s.q(0), q2 = s.q(1), p1 = s.p(0), p2 = s.p(1);
      const cplx nn = e + a3 + p.alpha(5);
      v.th = q1 * q1 * p1 * (p1 - 1.0) + (e + a3) * q1 * p1 - a3 * q1 + q1 * p1 * q2 * p2 + p1 * q2 +
             q2 * q2 * p2 * p2 + nn * q2 * p2 + t * p2 - q2;
      v.g.d_position(0) = 2.0 * q1 * p1 * (p1 - 1.0) + (e + a3) * p1 - a3 + p1 * q2 * p2;
      v.g.d_momentum(0) = q1 * q1 * (2.0 * p1 - 1.0) + (e + a3) * q1 + q1 * q2 * p2 + q2;
      v.g.d_position(1) = q1 * p1 * p2 + p1 + 2.0 * q2 * p2 * p2 + nn * p2 - 1.0;
      v.g.d_momentum(1) = q1 * p1 * q2 + 2.0 * q2 * q2 * p2 + nn * q2 + t;
      break;
    }
  }
  return v;
}

template <class S>
std::vector<S> case_coordinates(CanonicalCase which, cplx a3, cplx a5, const std::vector<S>& x,
                                const std::vector<S>& y) {
  switch (which) {
    case CanonicalCase::P5:
      return {x[0] / x[1], -(x[1] * (x[1] * y[1] + S(a3))) / x[0]};
    case CanonicalCase::P3:
      return {x[1] / x[0], x[0] * y[1]};
    case CanonicalCase::N2R1:
      return {x[0] / x[1], x[0] / x[2], -(x[1] * (x[1] * y[1] + S(a3))) / x[0],
              -(x[2] * (x[2] * y[2] + S(a5))) / x[0]};
    case CanonicalCase::N2R2:
    case CanonicalCase::N2R3:
      return {-(x[1] / x[0]), -(x[2] / x[0]), S(1.0) - x[0] * y[1], -(x[0] * y[2])};
  }
  throw InvalidArgument("unknown canonical case");
}

}  // namespace

cplx canonical_case_hamiltonian(CanonicalCase which, const ParameterSet& p, const CanonicalState& s, cplx t) {
  require_case(which, p, s);
  require_nonzero_time(t, case_info(which).name);
  return case_value(which, p, s, t).th / t;
}

Gradient canonical_case_gradient(CanonicalCase which, const ParameterSet& p, const CanonicalState& s, cplx t) {
  require_case(which, p, s);
  require_nonzero_time(t, case_info(which).name);
  Gradient g = case_value(which, p, s, t).g;
  g.d_position /= t;
  g.d_momentum /= t;
  return g;
}

Vector canonical_case_field(CanonicalCase which, const ParameterSet& p, const CanonicalState& s, cplx t) {
  return pack(canonical_case_gradient(which, p, s, t), 1.0);
}

CanonicalState canonical_case_coordinates(CanonicalCase which, const ParameterSet& p, const SymmetricState& s) {
  const auto info = case_info(which);
  if (p.n() != info.n) throw InvalidArgument(std::string(info.name) + ": parameter rank mismatch");
  require_size(s.x, info.n + 1, info.name);
  require_size(s.y, info.n + 1, info.name);
  std::vector<cplx> x(s.x.data(), s.x.data() + s.x.size()), y(s.y.data(), s.y.data() + s.y.size());
  for (cplx v : x)
    if (v == cplx(0.0)) throw DomainError(std::string(info.name) + ": coordinate map needs nonzero x");
  const cplx a5 = info.n >= 2 ? p.alpha(5) : cplx(0.0);
  const auto c = case_coordinates<cplx>(which, p.alpha(3), a5, x, y);
  CanonicalState out{Vector(info.n), Vector(info.n)};
  for (int i = 0; i < info.n; ++i) {
    out.q(i) = c[i];
    out.p(i) = c[info.n + i];
  }
  return out;
}

Vector canonical_case_pushforward(CanonicalCase which, const ParameterSet& p, const SymmetricState& s, cplx t) {
  const auto info = case_info(which);
  if (p.level() != info.r) throw InvalidArgument(std::string(info.name) + ": parameter level mismatch");
  const cplx t_deg = info.flips_time ? -t : t;
  const Vector f = degenerate_field(p, s, t_deg);
  const int m = info.n + 1;
  std::vector<Dual> x(m), y(m);
  for (int i = 0; i < m; ++i) {
    x[i] = Dual(s.x(i), f(i));
    y[i] = Dual(s.y(i), f(m + i));
  }
  const cplx a5 = info.n >= 2 ? p.alpha(5) : cplx(0.0);
  const auto c = case_coordinates<Dual>(which, p.alpha(3), a5, x, y);
  const double sign = info.flips_time ? -1.0 : 1.0;
  Vector out(2 * info.n);
  for (int i = 0; i < 2 * info.n; ++i) out(i) = sign * c[i].d;
  return out;
}

// ---- rank one Riccati chain ---------------------------------------------------

cplx riccati_rhs(const ParameterSet& p, cplx q, cplx t) {
  if (p.n() != 1) throw InvalidArgument("riccati_rhs is defined for n = 1");
  const cplx a0 = p.alpha(0), a1 = p.alpha(1), a3 = p.alpha(3);
  return a1 * q * q + ((a3 + a0) * t - (a0 + a1)) * q - a3 * t;
}

double riccati_residual(const ParameterSet& p, const std::function<cplx(double)>& q, double t, double h) {
  const cplx dq = (q(t - 2 * h) - 8.0 * q(t - h) + 8.0 * q(t + h) - q(t + 2 * h)) / (12.0 * h);
  const cplx qt = q(t);
  const cplx a0 = p.alpha(0), a1 = p.alpha(1), a3 = p.alpha(3);
  const cplx lhs = t * (t - 1.0) * dq;
  const double scale = std::max({std::abs(lhs), std::abs(a1 * qt * qt),
                                 std::abs(((a3 + a0) * t - (a0 + a1)) * qt), std::abs(a3 * t), 1e-300});
  return std::abs(lhs - riccati_rhs(p, qt, t)) / scale;
}

namespace {

HGSpec gauss_spec(const ParameterSet& p) {
  const cplx a1 = p.alpha(1), a2 = p.alpha(2), a3 = p.alpha(3);
  return HGSpec{{a1 + a2 + a3, a3}, {a2 + a3}};
}

}  // namespace

cplx riccati_from_gauss(const ParameterSet& p, double t) {
  if (p.n() != 1) throw InvalidArgument("riccati_from_gauss is defined for n = 1");
  const cplx a1 = p.alpha(1), a3 = p.alpha(3);
  if (a1 == cplx(0.0)) throw InvalidArgument("riccati_from_gauss needs alpha_1 != 0");
  const HGSpec spec = gauss_spec(p);
  const cplx x = eval_series(spec, t).value;
  if (std::abs(x) < 1e-300) throw DomainError("riccati_from_gauss: the Gauss solution vanishes at t");
  const cplx dx = eval_series_derivative(spec, t).value;
  return t * (1.0 - t) / a1 * (a3 / (t - 1.0) + dx / x);
}

std::vector<RiccatiSample> riccati_and_gauss_n1(const ParameterSet& p, const std::vector<double>& ts) {
  std::vector<RiccatiSample> out;
  out.reserve(ts.size());
  const auto q = [&](double s) { return riccati_from_gauss(p, s); };
  for (double t : ts) out.push_back({t, q(t), riccati_residual(p, q, t)});
  return out;
}

double gradient_relative_error(const std::function<cplx(const Vector&)>& hamiltonian, const Vector& point,
                               const Vector& analytic, double h) {
  if (analytic.size() != point.size()) throw InvalidArgument("gradient_relative_error: size mismatch");
  Vector numeric(point.size());
  for (Eigen::Index i = 0; i < point.size(); ++i) {
    const double step = h * std::max(1.0, std::abs(point(i)));
    auto shifted = [&](double k) {
      Vector z = point;
      z(i) += k * step;
      return hamiltonian(z);
    };
    numeric(i) = (shifted(-2) - 8.0 * shifted(-1) + 8.0 * shifted(1) - shifted(2)) / (12.0 * step);
  }
  const double scale = std::max(analytic.norm(), 1e-300);
  return (analytic - numeric).norm() / scale;
}

}  // namespace pvi
