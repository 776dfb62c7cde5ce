#include "pvi/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace pvi {

ParameterSet::ParameterSet(int n, int r, std::vector<cplx> alpha, cplx eta)
    : n_(n), r_(r), alpha_(std::move(alpha)), eta_(eta) {}

ParameterSet ParameterSet::generic(int n, std::vector<cplx> alpha, cplx eta) {
  ParameterSet p(n, 0, std::move(alpha), eta);
  p.validate();
  return p;
}

ParameterSet ParameterSet::degenerate(int n, int r, std::vector<cplx> alpha, cplx eta) {
  if (r < 1) throw InvalidArgument("degeneration level must be in 1..n+1");
  ParameterSet p(n, r, std::move(alpha), eta);
  p.validate();
  return p;
}

void ParameterSet::validate() const {
  if (n_ < 1) throw InvalidArgument("rank n must be >= 1");
  if (alpha_.size() != static_cast<std::size_t>(period()))
    throw InvalidArgument("expected " + std::to_string(period()) + " alpha values, got " +
                          std::to_string(alpha_.size()));
  if (r_ < 0 || r_ > n_ + 1) throw InvalidArgument("degeneration level must be in 1..n+1");
  for (int i = 0; i < r_; ++i)
    if (std::abs(alpha_[2 * i]) > kConstraintTol)
      throw InvalidArgument("degenerate set of level " + std::to_string(r_) + " needs alpha_" +
                            std::to_string(2 * i) + " = 0");
  // For both kinds the constraint reduces to a total of one.
  if (std::abs(total() - 1.0) > kConstraintTol)
    throw InvalidArgument("alpha values must sum to 1");
}

cplx ParameterSet::odd_sum() const {
  cplx s = 0;
  for (int j = 0; j <= n_; ++j) s += alpha_[2 * j + 1];
  return s;
}

cplx ParameterSet::total() const {
  cplx s = 0;
  for (const auto& a : alpha_) s += a;
  return s;
}

ParameterSet ParameterSet::with_values(std::vector<cplx> alpha, cplx eta) const {
  if (alpha.size() != alpha_.size()) throw InvalidArgument("alpha size mismatch");
  return ParameterSet(n_, r_, std::move(alpha), eta);
}

ParameterSet ParameterSet::as_level(int r) const {
  ParameterSet p(n_, r, alpha_, eta_);
  p.validate();
  return p;
}

cplx partial_sum(const ParameterSet& p, long k, long l) {
  cplx s = 0;
  for (long i = 0; i <= l; ++i) s += p.alpha(k + i);
  return s;
}

cplx reduced_partial_sum(const ParameterSet& p, long k, long l) {
  if (l < 0) return 0;
  return partial_sum(p, k, l % p.period());
}

double distance_to_integers(cplx z) {
  return std::hypot(z.real() - std::round(z.real()), z.imag());
}

double resonance_margin(const ParameterSet& p) {
  const int n = p.n();
  double m = distance_to_integers(p.odd_sum());
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n - i + 1; ++j) {
      m = std::min(m, distance_to_integers(partial_sum(p, 2 * i, 2 * j - 1)));
      m = std::min(m, distance_to_integers(partial_sum(p, 2 * i - 1, 2 * j - 1)));
    }
  }
  return m;
}

double degenerate_resonance_margin(const ParameterSet& p) {
  double m = std::numeric_limits<double>::infinity();
  for (long s = 0; s < p.period(); ++s)
    for (long len = 2; len < p.period(); len += 2)
      m = std::min(m, distance_to_integers(partial_sum(p, s, len - 1)));
  return m;
}

double arc_margin(const ParameterSet& p) {
  double m = std::numeric_limits<double>::infinity();
  for (long k = 0; k < p.period(); ++k)
    for (long l = 0; l + 1 < p.period(); ++l) m = std::min(m, distance_to_integers(partial_sum(p, k, l)));
  return m;
}

namespace {

constexpr int kMaxSampleAttempts = 100000;

}  // namespace

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

ParameterSet sample_generic(int n, std::uint64_t seed, double margin) {
  if (n < 1) throw InvalidArgument("rank n must be >= 1");
  auto rng = make_rng(seed, static_cast<std::uint64_t>(n));
  std::uniform_real_distribution<double> value(-0.5, 0.5);
  const int m = 2 * n + 2;
  for (int attempt = 0; attempt < kMaxSampleAttempts; ++attempt) {
    std::vector<cplx> alpha(m);
    double rest = 0;
    for (int i = 1; i < m; ++i) {
      alpha[i] = value(rng);
      rest += alpha[i].real();
    }
    alpha[0] = 1.0 - rest;
    const double eta = value(rng);
    auto p = ParameterSet::generic(n, std::move(alpha), eta);
    if (resonance_margin(p) >= margin) return p;
  }
  throw ConvergenceError("sample_generic: no parameter set with margin " + std::to_string(margin) +
                         " after " + std::to_string(kMaxSampleAttempts) + " attempts");
}

ParameterSet sample_separated(int n, std::uint64_t seed, double margin) {
  if (n < 1) throw InvalidArgument("rank n must be >= 1");
  const int m = 2 * n + 2;
  if (!(margin > 0) || m * margin >= 1.0)
    throw InvalidArgument("sample_separated: margin must be in (0, 1/(2n+2))");
  // Positive entries of at least `margin` each: every arc shorter than the
  // period then lies in [margin, 1 - margin].
  auto rng = make_rng(seed, 0xa5c0000ull + static_cast<std::uint64_t>(n));
  std::uniform_real_distribution<double> weight(0.05, 1.0), value(-0.5, 0.5);
  std::vector<double> w(m);
  double total = 0;
  for (auto& x : w) total += x = weight(rng);
  std::vector<cplx> alpha(m);
  for (int j = 0; j < m; ++j) alpha[j] = margin + (1.0 - m * margin) * w[j] / total;
  const double eta = value(rng);
  return ParameterSet::generic(n, std::move(alpha), eta);
}

ParameterSet sample_degenerate(int n, int r, std::uint64_t seed, double margin) {
  if (n < 1) throw InvalidArgument("rank n must be >= 1");
  if (r < 1 || r > n + 1) throw InvalidArgument("degeneration level must be in 1..n+1");
  auto rng = make_rng(seed, static_cast<std::uint64_t>(1000 * n + r));
  std::uniform_real_distribution<double> value(-0.5, 0.5);
  const int m = 2 * n + 2;
  for (int attempt = 0; attempt < kMaxSampleAttempts; ++attempt) {
    std::vector<cplx> alpha(m, 0.0);
    double rest = 0;
    for (int i = 2; i < m; ++i) {
      if (i % 2 == 0 && i / 2 < r) continue;
      alpha[i] = value(rng);
      rest += alpha[i].real();
    }
    alpha[1] = 1.0 - rest;
    const double eta = value(rng);
    auto p = ParameterSet::degenerate(n, r, std::move(alpha), eta);
    if (degenerate_resonance_margin(p) >= margin) return p;
  }
  throw ConvergenceError("sample_degenerate: no parameter set with margin " +
                         std::to_string(margin));
}

ParameterSet degenerate_replace(const ParameterSet& p, double eps) {
  if (eps == 0.0) throw InvalidArgument("degenerate_replace: eps must be nonzero");
  const int r = p.level() + 1;
  if (r > p.n() + 1) throw InvalidArgument("degenerate_replace: already at the last level");
  std::vector<cplx> alpha(p.alphas().begin(), p.alphas().end());
  alpha[2 * r - 2] = -1.0 / eps;
  alpha[2 * r - 1] += 1.0 / eps;
  return ParameterSet(p.n(), p.level(), std::move(alpha), p.eta());
}

}  // namespace pvi
