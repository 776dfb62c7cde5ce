#include "pvi/linear.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pvi/series_algebra.hpp"

namespace pvi {

namespace {

constexpr double kStructureTol = 1e-13;

bool near_zero(cplx z) { return std::abs(z) < 1e-300; }

void require_generic(const ParameterSet& p, const char* what) {
  if (!p.is_generic()) throw InvalidArgument(std::string(what) + " needs a generic parameter set");
}

void require_k(const ParameterSet& p, int k) {
  if (k < 0 || k > p.n()) throw InvalidArgument("branch index k must be in 0..n");
}

cplx checked_div(cplx num, cplx den, const char* what) {
  if (std::abs(den) < 1e-300) throw ResonanceError(std::string(what) + ": vanishing denominator");
  return num / den;
}

Matrix to_matrix(const algebra::Rows<cplx>& rows) {
  const int dim = static_cast<int>(rows.size());
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = rows[i][j];
  return m;
}

algebra::Rows<cplx> to_rows(const Matrix& m) {
  algebra::Rows<cplx> rows(m.rows(), std::vector<cplx>(m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
  return rows;
}

std::vector<Vector> to_vectors(const algebra::Rows<cplx>& rows) {
  std::vector<Vector> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(Eigen::Map<const Vector>(r.data(), r.size()));
  return out;
}

double scale_of(const Matrix& m) { return std::max(1.0, m.cwiseAbs().maxCoeff()); }

std::vector<cplx> triangular_diagonal(const Matrix& m, const char* what) {
  const double tol = kStructureTol * scale_of(m);
  bool upper = true, lower = true;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      if (i > j && std::abs(m(i, j)) > tol) upper = false;
      if (i < j && std::abs(m(i, j)) > tol) lower = false;
    }
  if (!upper && !lower) throw InvalidArgument(std::string(what) + " is not triangular");
  std::vector<cplx> d(m.rows());
  for (int i = 0; i < m.rows(); ++i) d[i] = m(i, i);
  return d;
}

std::vector<cplx> rank_one_spectrum(const Matrix& m, const char* what) {
  const double tol = kStructureTol * scale_of(m) * scale_of(m);
  const int dim = static_cast<int>(m.rows());
  for (int i = 0; i < dim; ++i)
    for (int k = i + 1; k < dim; ++k)
      for (int j = 0; j < dim; ++j)
        for (int l = j + 1; l < dim; ++l)
          if (std::abs(m(i, j) * m(k, l) - m(i, l) * m(k, j)) > tol)
            throw InvalidArgument(std::string(what) + " does not have rank one");
  std::vector<cplx> spec(dim - 1, 0.0);
  spec.push_back(m.trace());
  return spec;
}

// Parameters of the k-th generic fundamental solution component with index l.
ComponentSeries generic_component(const ParameterSet& p, int k, int l) {
  const int n = p.n();
  ComponentSeries c;
  c.l = l;
  for (int i = 1; i <= l; ++i)
    c.prefactor *= checked_div(partial_sum(p, 2 * k - 2 * i + 3, 2 * i - 2),
                               partial_sum(p, 2 * k - 2 * i + 2, 2 * i - 1), "prefactor");
  c.spec.upper.push_back(partial_sum(p, 2 * k - 2 * n + 1, 2 * n));
  for (int i = 1; i <= n; ++i) {
    const double s = i <= l ? 1.0 : 0.0;
    c.spec.upper.push_back(s + partial_sum(p, 2 * k - 2 * i + 3, 2 * i - 2));
    c.spec.lower.push_back(s + partial_sum(p, 2 * k - 2 * i + 2, 2 * i - 1));
  }
  return c;
}

// Indices i in r..n whose upper parameter gets the +1 shift, following the
// five-way split on (k, l) relative to r.
bool confluent_shifted(int n, int r, int k, int l, int i) {
  auto in = [i](int lo, int hi) { return lo <= i && i <= hi; };
  if (k + 1 <= r) {
    if (l < k + 2) return false;
    return in(r, r - k + l - 2);
  }
  if (l < k - r + 1) return in(n + r - k, n + r - k + l - 1);
  if (l < k + 2) return in(n + r - k, n);
  return in(r, r - k + l - 2) || in(n + r - k, n);
}

ComponentSeries confluent_component(const ParameterSet& p, int k, int l) {
  const int n = p.n();
  const int r = p.level();
  ComponentSeries c;
  c.l = l;
  for (int i = 1; i <= l; ++i) {
    if (mod_floor(k - i + 1, n + 1) >= r) c.prefactor *= partial_sum(p, 2 * k - 2 * i + 3, 2 * i - 2);
    c.prefactor = checked_div(c.prefactor, partial_sum(p, 2 * k - 2 * i + 2, 2 * i - 1), "prefactor");
  }
  for (int i = r; i <= n; ++i) {
    // Arcs longer than one period are taken without the extra full turn.
    const cplx base = reduced_partial_sum(p, 2 * r - 2 * i - 1, 2 * k - 2 * r + 2 * i + 2);
    c.spec.upper.push_back(base + (confluent_shifted(n, r, k, l, i) ? 1.0 : 0.0));
  }
  for (int i = 1; i <= n; ++i)
    c.spec.lower.push_back((i <= l ? 1.0 : 0.0) + partial_sum(p, 2 * k - 2 * i + 2, 2 * i - 1));
  return c;
}

SeriesSolution assemble(const ParameterSet& p, int k, int depth,
                        ComponentSeries (*make)(const ParameterSet&, int, int)) {
  const int n = p.n();
  SeriesSolution s;
  s.k = k;
  s.exponent = fundamental_exponent(p, k);
  s.source = SeriesSource::Hypergeometric;
  s.frame = SeriesFrame::Original;
  for (int i = 0; i <= n; ++i) {
    const bool leading = i <= k;
    auto comp = make(p, k, leading ? k - i : n + k + 1 - i);
    comp.shift = leading ? 0 : 1;
    s.components.push_back(std::move(comp));
  }
  s.coeffs.assign(std::max(depth, 0), Vector::Zero(n + 1));
  for (int i = 0; i <= n; ++i) {
    const auto& comp = s.components[i];
    const auto c = series_coefficients(comp.spec, depth);
    for (int m = comp.shift; m < depth; ++m) s.coeffs[m](i) = comp.prefactor * c[m - comp.shift];
  }
  return s;
}

}  // namespace

Matrix LinearSystem::coefficient(cplx t) const {
  if (t == cplx(0.0)) throw DomainError("t = 0 is a singular point");
  if (kind == SystemKind::Fuchsian) {
    if (t == cplx(1.0)) throw DomainError("t = 1 is a singular point");
    return A0 / t + A1 / (1.0 - t);
  }
  return A0 / t + A1;
}

LinearSystem build_fuchsian(const ParameterSet& p) {
  require_generic(p, "build_fuchsian");
  const int n = p.n();
  Matrix a0 = Matrix::Zero(n + 1, n + 1), a1 = Matrix::Zero(n + 1, n + 1);
  for (int i = 0; i < n; ++i) {
    a0(i, i) = -partial_sum(p, 2 * i + 2, 2 * n - 2 * i - 1);
    for (int j = i + 1; j <= n; ++j) a0(i, j) = p.alpha(2 * j + 1);
  }
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) a1(i, j) = p.alpha(2 * j + 1);
  return LinearSystem{n, a0, a1, SystemKind::Fuchsian, p, -1};
}

LinearSystem build_dual(const ParameterSet& p) {
  require_generic(p, "build_dual");
  const int n = p.n();
  Matrix a0 = Matrix::Zero(n + 1, n + 1), a1 = Matrix::Zero(n + 1, n + 1);
  for (int i = 0; i < n; ++i) a0(i, i) = partial_sum(p, 2 * i + 2, 2 * n - 2 * i - 1);
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) a0(i, j) = -p.alpha(2 * i + 1);
  for (int j = 0; j <= n; ++j) a0(n, j) += p.alpha(2 * n + 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= n; ++j) a1(i, j) = -p.alpha(2 * i + 1);
  for (int j = 0; j <= n; ++j) a1(n, j) = p.alpha(2 * n + 1);
  return LinearSystem{n, a0, a1, SystemKind::Fuchsian, p, -1};
}

LinearSystem build_confluent(const ParameterSet& p) {
  const int n = p.n();
  const int r = p.level();
  if (r < 1 || r > n + 1) throw InvalidArgument("build_confluent needs a degenerate set, r in 1..n+1");
  Matrix a0 = Matrix::Zero(n + 1, n + 1), a1 = Matrix::Zero(n + 1, n + 1);
  for (int i = 0; i < n; ++i) a0(i, i) = -partial_sum(p, 2 * i + 2, 2 * n - 2 * i - 1);
  for (int i = 0; i <= r - 2; ++i) a0(i, i + 1) += 1.0;
  for (int i = r - 1; i < n; ++i)
    for (int j = i + 1; j <= n; ++j) a0(i, j) += p.alpha(2 * j + 1);
  for (int i = r - 1; i <= n; ++i) a1(i, 0) = 1.0;
  return LinearSystem{n, a0, a1, SystemKind::Confluent, p, -1};
}

cplx fundamental_exponent(const ParameterSet& p, int k) {
  require_k(p, k);
  return -partial_sum(p, 2 * k + 2, 2 * p.n() - 2 * k - 1);
}

Matrix gauge_matrix(const ParameterSet& p, int k, cplx t) {
  require_k(p, k);
  const int n = p.n();
  if (t == cplx(0.0)) throw DomainError("gauge matrix is singular at t = 0");
  Matrix g = Matrix::Zero(n + 1, n + 1);
  for (int i = 0; i <= n - k - 1; ++i) g(i, i + k + 1) = 1.0 / t;
  for (int i = n - k; i <= n; ++i) g(i, i - n + k) = 1.0;
  return std::pow(t, -fundamental_exponent(p, k)) * g;
}

LinearSystem gauge_transform(const LinearSystem& sys, int k) {
  if (sys.kind != SystemKind::Fuchsian || sys.gauge_index != -1)
    throw InvalidArgument("gauge_transform expects the untransformed Fuchsian system");
  require_k(sys.params, k);
  const auto& alpha = sys.params.alphas();
  auto [a0, a1] = algebra::gauge_matrices<cplx>(alpha, sys.n, k);
  return LinearSystem{sys.n, to_matrix(a0), to_matrix(a1), SystemKind::Fuchsian, sys.params, k};
}

Matrix confluence_scaled_matrix(const ParameterSet& target, double eps, cplx t) {
  const int r = target.level();
  if (r < 1) throw InvalidArgument("confluence_scaled_matrix needs a degenerate target");
  const auto before = degenerate_replace(target.as_level(r - 1), eps);
  const auto sys = r == 1 ? build_fuchsian(before) : build_confluent(before);
  Matrix m = eps * sys.coefficient(eps * t);
  for (int i = 0; i <= r - 2; ++i) {
    m.row(i) *= eps;
    m.col(i) /= eps;
  }
  return m;
}

ResidueSpectra structural_spectra(const LinearSystem& sys) {
  ResidueSpectra s;
  s.at_zero = triangular_diagonal(sys.A0, "A0");
  if (sys.kind == SystemKind::Confluent) return s;
  s.at_one = rank_one_spectrum(-sys.A1, "A1");
  s.at_infinity = triangular_diagonal(sys.A1 - sys.A0, "A1 - A0");
  return s;
}

ResidueSpectra listed_spectra(const ParameterSet& p) {
  const int n = p.n();
  ResidueSpectra s;
  for (int i = 0; i < n; ++i) s.at_zero.push_back(-partial_sum(p, 2 * i + 2, 2 * n - 2 * i - 1));
  s.at_zero.push_back(0.0);
  s.at_one.assign(n, 0.0);
  s.at_one.push_back(-p.odd_sum());
  for (int i = 0; i < n; ++i) s.at_infinity.push_back(partial_sum(p, 2 * i + 1, 2 * n - 2 * i));
  s.at_infinity.push_back(p.alpha(2 * n + 1));
  return s;
}

int mod_floor(long i, long modulus) {
  if (modulus <= 0) throw InvalidArgument("mod_floor: modulus must be positive");
  return static_cast<int>(((i % modulus) + modulus) % modulus);
}

Vector SeriesSolution::evaluate(cplx t, double rtol) const {
  const int dim = coeffs.empty() ? static_cast<int>(components.size())
                                 : static_cast<int>(coeffs.front().size());
  if (!components.empty()) {
    Vector x(dim);
    for (int i = 0; i < dim; ++i) {
      const auto& c = components[i];
      x(i) = c.prefactor * std::pow(t, exponent + double(c.shift)) * eval_series(c.spec, t, rtol).value;
    }
    return x;
  }
  Vector x = Vector::Zero(dim);
  cplx tp = 1;
  for (const auto& c : coeffs) {
    x += c * tp;
    tp *= t;
  }
  if (frame == SeriesFrame::Original) x *= std::pow(t, exponent);
  return x;
}

std::pair<cplx, std::vector<cplx>> SeriesSolution::component_frobenius(int i) const {
  std::vector<cplx> c;
  c.reserve(coeffs.size());
  for (const auto& v : coeffs) c.push_back(v(i));
  return {frame == SeriesFrame::Original ? exponent : cplx(0.0), std::move(c)};
}

SeriesSolution solve_recurrence(const LinearSystem& gauge_sys, int depth) {
  if (gauge_sys.gauge_index < 0) throw InvalidArgument("solve_recurrence expects a gauge-frame system");
  if (depth < 1) throw InvalidArgument("depth must be >= 1");
  SeriesSolution s;
  s.k = gauge_sys.gauge_index;
  s.exponent = fundamental_exponent(gauge_sys.params, s.k);
  s.source = SeriesSource::Recurrence;
  s.frame = SeriesFrame::Gauge;
  try {
    s.coeffs = to_vectors(algebra::recurrence<cplx>(to_rows(gauge_sys.A0), to_rows(gauge_sys.A1),
                                                    depth, cplx(1.0), near_zero));
  } catch (const std::domain_error& e) {
    throw ResonanceError(e.what());
  } catch (const std::invalid_argument& e) {
    throw InvalidArgument(e.what());
  }
  return s;
}

SeriesSolution closed_form_coeffs(const ParameterSet& p, int k, int depth) {
  require_generic(p, "closed_form_coeffs");
  require_k(p, k);
  SeriesSolution s;
  s.k = k;
  s.exponent = fundamental_exponent(p, k);
  s.source = SeriesSource::ClosedForm;
  s.frame = SeriesFrame::Gauge;
  try {
    s.coeffs = to_vectors(algebra::closed_form<cplx>(p.alphas(), p.n(), k, depth, near_zero));
  } catch (const std::domain_error& e) {
    throw ResonanceError(e.what());
  }
  return s;
}

SeriesSolution fundamental_solution(const ParameterSet& p, int k, int depth) {
  require_generic(p, "fundamental_solution");
  require_k(p, k);
  return assemble(p, k, depth, generic_component);
}

SeriesSolution confluent_fundamental_solution(const ParameterSet& p, int k, int depth) {
  if (p.is_generic()) throw InvalidArgument("confluent_fundamental_solution needs a degenerate set");
  require_k(p, k);
  return assemble(p, k, depth, confluent_component);
}

HGSpec component_ode_params(const ParameterSet& p, int i) {
  const int n = p.n();
  if (i < 0 || i > n) throw InvalidArgument("component index must be in 0..n");
  HGSpec spec;
  if (p.is_generic()) {
    spec.upper.push_back(partial_sum(p, 1, 2 * n));
    for (int j = 1; j <= n; ++j) {
      const double s = j <= n - i ? 1.0 : 0.0;
      spec.upper.push_back(s + partial_sum(p, 2 * n - 2 * j + 3, 2 * j - 2));
    }
  } else {
    const int r = p.level();
    for (int j = r; j <= n; ++j) {
      const double s = (i <= r - 1 || j <= n + r - i - 1) ? 1.0 : 0.0;
      spec.upper.push_back(s + reduced_partial_sum(p, 2 * r - 2 * j - 1, 2 * n - 2 * r + 2 * j + 2));
    }
  }
  for (int j = 1; j <= n; ++j)
    spec.lower.push_back((j <= n - i ? 1.0 : 0.0) + partial_sum(p, 2 * n - 2 * j + 2, 2 * j - 1));
  return spec;
}

double system_residual(const LinearSystem& sys, const std::function<Vector(cplx)>& x, double t,
                       double h) {
  const Vector xt = x(t);
  // Five-point central stencil; the three-point one loses to h^2 x''' near t = 0.
  const Vector deriv = (x(t - 2 * h) - 8.0 * x(t - h) + 8.0 * x(t + h) - x(t + 2 * h)) / (12.0 * h);
  const double norm = xt.norm();
  const double err = (deriv - sys.rhs(t, xt)).norm();
  return norm > 0 ? err / norm : err;
}

}  // namespace pvi
