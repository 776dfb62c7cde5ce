#include "pvi/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pvi {

CartanData CartanData::affine(int n) {
  if (n < 1) throw InvalidArgument("rank n must be >= 1");
  const int m = 2 * n + 2;
  CartanData c;
  c.n = n;
  c.a = Eigen::MatrixXi::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    c.a(i, i) = 2;
    c.a(i, (i + 1) % m) = -1;
    c.a(i, (i + m - 1) % m) = -1;
  }
  return c;
}

PhaseFunction coordinate_x(int n, int i) {
  if (i < 0 || i > n) throw InvalidArgument("coordinate index out of range");
  PhaseFunction f{Vector::Zero(n + 1), Vector::Zero(n + 1)};
  f.dx(i) = 1.0;
  return f;
}

PhaseFunction coordinate_y(int n, int i) {
  if (i < 0 || i > n) throw InvalidArgument("coordinate index out of range");
  PhaseFunction f{Vector::Zero(n + 1), Vector::Zero(n + 1)};
  f.dy(i) = 1.0;
  return f;
}

PhaseFunction linear_combination(cplx a, const PhaseFunction& f, cplx b, const PhaseFunction& g) {
  return {a * f.dx + b * g.dx, a * f.dy + b * g.dy};
}

cplx poisson_bracket(const PhaseFunction& f, const PhaseFunction& g) {
  if (f.dx.size() != g.dx.size() || f.dy.size() != g.dy.size())
    throw InvalidArgument("poisson_bracket: dimension mismatch");
  return -((f.dx.array() * g.dy.array()).sum() - (f.dy.array() * g.dx.array()).sum());
}

namespace {

std::string singular_message(int generator, const std::string& denominator, long position) {
  std::ostringstream os;
  os << "r_" << generator << ": denominator " << denominator << " vanishes";
  if (position >= 0) os << " (letter " << position << " of the word)";
  return os.str();
}

const char* denominator_name(int i, int n) {
  if (i == 0) return "x_n - t x_0";
  if (i == 2 * n + 1) return "y_n";
  return i % 2 ? "y_i" : "x_{i-1} - x_i";
}

bool finite(const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!std::isfinite(v(i).real()) || !std::isfinite(v(i).imag())) return false;
  return true;
}

}  // namespace

SingularTransform::SingularTransform(int generator, std::string denominator, long position)
    : DomainError(singular_message(generator, denominator, position)),
      generator_(generator),
      denominator_(std::move(denominator)),
      position_(position) {}

cplx generator_denominator(int i, const SymmetricState& s, const ParameterSet& p, double t) {
  const int n = p.n();
  if (i < 0 || i > 2 * n + 1) throw InvalidArgument("generator index out of range 0..2n+1");
  if (i == 0) return s.x(n) - t * s.x(0);
  if (i == 2 * n + 1) return s.y(n);
  if (i % 2 == 1) return s.y((i - 1) / 2);
  return s.x(i / 2 - 1) - s.x(i / 2);
}

WeylImage apply_generator(int i, const SymmetricState& s, const ParameterSet& p, double t) {
  const int n = p.n();
  const int m = 2 * n + 2;
  if (i < 0 || i >= m) throw InvalidArgument("generator index out of range 0..2n+1");
  if (s.x.size() != n + 1 || s.y.size() != n + 1) throw InvalidArgument("apply_generator: wrong state dimension");
  if ((i == 0 || i == m - 1) && !(t > 0))
    throw DomainError("r_" + std::to_string(i) + " uses t^alpha on the principal branch; needs t > 0");

  const cplx d = generator_denominator(i, s, p, t);
  if (d == cplx(0.0)) throw SingularTransform(i, denominator_name(i, n));
  const cplx a = p.alpha(i);
  SymmetricState out = s;

  if (i == 0) {
    const PhaseFunction f = linear_combination(1.0, coordinate_x(n, n), -t, coordinate_x(n, 0));
    const cplx up = std::pow(cplx(t), a), down = std::pow(cplx(t), -a);
    for (int j = 0; j <= n; ++j) {
      out.x(j) = down * s.x(j);
      out.y(j) = up * (s.y(j) + a / d * poisson_bracket(f, coordinate_y(n, j)));
    }
  } else if (i == m - 1) {
    const PhaseFunction f = coordinate_y(n, n);
    const cplx up = std::pow(cplx(t), a), down = std::pow(cplx(t), -a);
    for (int j = 0; j <= n; ++j) {
      out.x(j) = up * (s.x(j) + a / d * poisson_bracket(f, coordinate_x(n, j)));
      out.y(j) = down * s.y(j);
    }
  } else if (i % 2 == 1) {
    const PhaseFunction f = coordinate_y(n, (i - 1) / 2);
    for (int j = 0; j <= n; ++j) out.x(j) = s.x(j) + a / d * poisson_bracket(f, coordinate_x(n, j));
  } else {
    const int k = i / 2;
    const PhaseFunction f = linear_combination(1.0, coordinate_x(n, k - 1), -1.0, coordinate_x(n, k));
    for (int j = 0; j <= n; ++j) out.y(j) = s.y(j) + a / d * poisson_bracket(f, coordinate_y(n, j));
  }
  if (!finite(out.x) || !finite(out.y)) throw SingularTransform(i, denominator_name(i, n));

  static thread_local CartanData cartan;
  if (cartan.n != n || cartan.a.size() == 0) cartan = CartanData::affine(n);
  std::vector<cplx> alpha(m);
  for (int j = 0; j < m; ++j) alpha[j] = p.alpha(j) - static_cast<double>(cartan.a(i, j)) * a;
  const cplx eta = p.eta() + (i % 2 ? -a : a);
  return {out, p.with_values(std::move(alpha), eta)};
}

WeylImage apply_word(const std::vector<int>& word, const SymmetricState& s, const ParameterSet& p, double t) {
  WeylImage cur{s, p};
  for (std::size_t k = 0; k < word.size(); ++k) {
    try {
      cur = apply_generator(word[k], cur.state, cur.params, t);
    } catch (const SingularTransform& e) {
      throw SingularTransform(e.generator(), e.denominator(), static_cast<long>(k));
    }
  }
  return cur;
}

std::vector<int> parse_word(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("bad generator index '" + item + "'");
    }
    if (used != item.size()) throw InvalidArgument("bad generator index '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::vector<int>> relation_words(int n) {
  const CartanData c = CartanData::affine(n);
  const int m = c.size();
  std::vector<std::vector<int>> words;
  for (int i = 0; i < m; ++i) words.push_back({i, i});
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const int reps = 2 - c.a(i, j);
      std::vector<int> w;
      for (int k = 0; k < reps; ++k) {
        w.push_back(i);
        w.push_back(j);
      }
      words.push_back(std::move(w));
    }
  return words;
}

SymmetricState sample_constrained_state(int n, cplx eta, std::uint64_t seed, double y_scale, double imag) {
  auto rng = make_rng(seed, 0x5717e000ull + static_cast<std::uint64_t>(n));
  std::uniform_real_distribution<double> mag(0.5, 1.5), val(-1.0, 1.0), sgn(0.0, 1.0);
  SymmetricState s{Vector(n + 1), Vector(n + 1)};
  for (int i = 0; i <= n; ++i) {
    s.x(i) = mag(rng) * (sgn(rng) < 0.5 ? -1.0 : 1.0);
    s.y(i) = y_scale * val(rng);
    if (imag != 0.0) {
      s.x(i) += cplx(0.0, imag * val(rng));
      s.y(i) += cplx(0.0, imag * y_scale * val(rng));
    }
  }
  cplx rest = eta;
  for (int i = 1; i <= n; ++i) rest += s.x(i) * s.y(i);
  s.y(0) = -rest / s.x(0);
  return s;
}

namespace {

double state_distance(const SymmetricState& a, const SymmetricState& b) {
  double e = 0;
  for (Eigen::Index i = 0; i < a.x.size(); ++i) {
    e = std::max(e, std::abs(a.x(i) - b.x(i)) / std::max(1.0, std::abs(b.x(i))));
    e = std::max(e, std::abs(a.y(i) - b.y(i)) / std::max(1.0, std::abs(b.y(i))));
  }
  return e;
}

double param_distance(const ParameterSet& a, const ParameterSet& b) {
  double e = std::abs(a.eta() - b.eta());
  for (int j = 0; j < a.period(); ++j) e = std::max(e, std::abs(a.alpha(j) - b.alpha(j)));
  return e;
}

// Denominator measured against the size of the coordinates it is built from.
// r_0 and r_{2n+1} rescale whole blocks by t^alpha, so an absolute bound
// would reject most small t.
double relative_denominator(int g, const SymmetricState& s, const ParameterSet& p, double t) {
  const int n = p.n();
  const double d = std::abs(generator_denominator(g, s, p, t));
  double scale;
  if (g == 0)
    scale = std::max(std::abs(s.x(n)), t * std::abs(s.x(0)));
  else if (g % 2 == 1 || g == 2 * n + 1)
    scale = s.y.cwiseAbs().maxCoeff();
  else
    scale = std::max(std::abs(s.x(g / 2 - 1)), std::abs(s.x(g / 2)));
  return scale > 0 ? d / scale : 0.0;
}

// Smallest relative denominator met while applying the word; intermediate failures count as zero.
double word_margin(const std::vector<int>& word, const SymmetricState& s, const ParameterSet& p, double t) {
  WeylImage cur{s, p};
  double margin = INFINITY;
  for (int g : word) {
    margin = std::min(margin, relative_denominator(g, cur.state, cur.params, t));
    if (margin == 0.0) return 0.0;
    try {
      cur = apply_generator(g, cur.state, cur.params, t);
    } catch (const SingularTransform&) {
      return 0.0;
    }
  }
  return margin;
}

}  // namespace

RelationReport verify_relations(int n, int trials, std::uint64_t seed, double tol, double margin) {
  if (trials < 1) throw InvalidArgument("verify_relations needs at least one trial");
  RelationReport rep;
  rep.n = n;
  rep.trials = trials;
  const auto words = relation_words(n);
  const int m = 2 * n + 2;
  auto rng = make_rng(seed, 0xb0b0ull + static_cast<std::uint64_t>(n));
  std::uniform_real_distribution<double> time(0.2, 0.8);
  std::uniform_int_distribution<std::uint64_t> draw;

  // A fresh state until the word meets the margin at every letter.
  auto regular_point = [&](const std::vector<int>& word, const ParameterSet& p, double t) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      SymmetricState s = sample_constrained_state(n, p.eta(), draw(rng));
      if (word_margin(word, s, p, t) >= margin) return s;
    }
    std::string letters;
    for (int g : word) letters += (letters.empty() ? "" : " ") + std::to_string(g);
    throw ConvergenceError("verify_relations: no regular point found for word [" + letters + "]");
  };

  for (int trial = 0; trial < trials; ++trial) {
    const ParameterSet p = sample_generic(n, draw(rng));
    const double t = time(rng);
    for (int i = 0; i < m; ++i) {
      const SymmetricState s = regular_point({i}, p, t);
      const WeylImage img = apply_generator(i, s, p, t);
      rep.max_sum_drift = std::max(rep.max_sum_drift, std::abs(img.params.total() - p.total()));
      rep.max_constraint_error =
          std::max(rep.max_constraint_error, std::abs(img.state.constraint(img.params.eta())));
    }
    for (const auto& w : words) {
      const SymmetricState s = regular_point(w, p, t);
      const WeylImage img = apply_word(w, s, p, t);
      RelationCheck c{w, state_distance(img.state, s), param_distance(img.params, p), false};
      c.pass = c.state_error <= tol && c.param_error <= tol;
      ++rep.checked;
      rep.max_state_error = std::max(rep.max_state_error, c.state_error);
      rep.max_param_error = std::max(rep.max_param_error, c.param_error);
      if (!c.pass) {
        ++rep.failed;
        if (rep.failures.size() < 20) rep.failures.push_back(c);
      }
    }
  }
  return rep;
}

MappingReport verify_solution_mapping(int generator, const ParameterSet& p, const SymmetricState& start, double t0,
                                      double t1, int samples, const IntegratorOptions& options) {
  if (samples < 1) throw InvalidArgument("verify_solution_mapping needs samples >= 1");
  if (!(t0 > 0 && t1 > t0 && t1 < 1)) throw InvalidArgument("verify_solution_mapping needs 0 < t0 < t1 < 1");
  const double h = 1e-4;
  const double lo = t0 + 2 * h, hi = t1 - 2 * h;
  std::vector<double> centers = linspace(lo, hi, samples);
  std::vector<double> times;
  for (double c : centers)
    for (int k = -2; k <= 2; ++k) times.push_back(c + k * h);

  IntegratorOptions opt = options;
  opt.singular_points = {0.0, 1.0};
  const VectorField f = [&](double t, const Vector& z) { return symmetric_field(p, SymmetricState::unpack(z), t); };
  const Trajectory tr = integrate(f, t0, start.packed(), t1, times, opt);

  MappingReport rep;
  rep.generator = generator;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    Vector img[5];
    ParameterSet mapped = p;
    for (int k = 0; k < 5; ++k) {
      const std::size_t idx = 5 * c + k;
      const WeylImage w = apply_generator(generator, SymmetricState::unpack(tr.states[idx]), p, tr.t[idx]);
      img[k] = w.state.packed();
      if (k == 2) mapped = w.params;
    }
    const Vector numeric = (img[0] - 8.0 * img[1] + 8.0 * img[3] - img[4]) / (12.0 * h);
    const Vector field = symmetric_field(mapped, SymmetricState::unpack(img[2]), centers[c]);
    const double scale = std::max(1.0, field.norm());
    rep.max_residual = std::max(rep.max_residual, (numeric - field).norm() / scale);
    ++rep.samples;
  }
  return rep;
}

}  // namespace pvi
