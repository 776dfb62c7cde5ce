#pragma once

// Scalar-generic kernels behind the series solutions at t = 0. Production
// code instantiates them with std::complex<double>; the exact tests use
// rationals to check the closed form against the recurrence with no rounding.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pvi::algebra {

template <class S>
using Rows = std::vector<std::vector<S>>;

/// alpha_k^l with modular indices; zero for l < 0.
template <class S>
S arc(std::span<const S> alpha, long k, long l) {
  const long m = static_cast<long>(alpha.size());
  S s(0);
  for (long i = 0; i <= l; ++i) s += alpha[static_cast<std::size_t>((((k + i) % m) + m) % m)];
  return s;
}

template <class S>
Rows<S> square(int dim) {
  return Rows<S>(dim, std::vector<S>(dim, S(0)));
}

/// Matrices of the k-th gauge-transformed Fuchsian system.
template <class S>
std::pair<Rows<S>, Rows<S>> gauge_matrices(std::span<const S> alpha, int n, int k) {
  auto a0 = square<S>(n + 1);
  auto a1 = square<S>(n + 1);
  for (int i = 0; i < n; ++i) {
    a0[i][i] = -arc(alpha, 2 * k + 2 * i + 4, 2 * n - 2 * i - 1);
    for (int j = i + 1; j <= n; ++j) a0[i][j] = arc(alpha, 2 * j + 2 * k + 3, 0);
  }
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) a1[i][j] = arc(alpha, 2 * j + 2 * k + 3, 0);
  return {std::move(a0), std::move(a1)};
}

/// Coefficient vectors x_0..x_{depth-1} of the k-th gauge frame, built from
/// the Pochhammer-product formulas. Row m carries
///   prod_{j<n-m} (alpha_{2k-2j+1}^{2j})_{i+1} / (alpha_{2k-2j}^{2j+1})_{i+1}
/// * prod_{j<=m} (alpha_{2k+2j+3}^{2n-2j})_i / (alpha_{2k+2j+2}^{2n-2j+1})_i.
/// Throws std::domain_error on a zero denominator.
template <class S, class ZeroTest>
Rows<S> closed_form(std::span<const S> alpha, int n, int k, int depth, ZeroTest is_zero) {
  Rows<S> out(depth, std::vector<S>(n + 1, S(0)));
  if (depth <= 0) return out;
  for (int m = 0; m <= n; ++m) {
    std::vector<S> up1, down1, up0, down0;
    for (int j = 0; j < n - m; ++j) {
      up1.push_back(arc(alpha, 2 * k - 2 * j + 1, 2 * j));
      down1.push_back(arc(alpha, 2 * k - 2 * j, 2 * j + 1));
    }
    for (int j = 0; j <= m; ++j) {
      up0.push_back(arc(alpha, 2 * k + 2 * j + 3, 2 * n - 2 * j));
      down0.push_back(arc(alpha, 2 * k + 2 * j + 2, 2 * n - 2 * j + 1));
    }
    S c(1);
    for (std::size_t j = 0; j < up1.size(); ++j) {
      if (is_zero(down1[j])) throw std::domain_error("closed form: vanishing Pochhammer base");
      c = c * up1[j] / down1[j];
    }
    out[0][m] = c;
    for (int i = 1; i < depth; ++i) {
      // (a)_{i+1} / (a)_i = a + i and (a)_i / (a)_{i-1} = a + i - 1
      for (std::size_t j = 0; j < up1.size(); ++j) {
        const S d = down1[j] + S(i);
        if (is_zero(d)) throw std::domain_error("closed form: vanishing Pochhammer factor");
        c = c * (up1[j] + S(i)) / d;
      }
      for (std::size_t j = 0; j < up0.size(); ++j) {
        const S d = down0[j] + S(i - 1);
        if (is_zero(d)) throw std::domain_error("closed form: vanishing Pochhammer factor");
        c = c * (up0[j] + S(i - 1)) / d;
      }
      out[i][m] = c;
    }
  }
  return out;
}

/// Solves A0 x_0 = 0 and (A0 - (i+1)) x_{i+1} = (A0 - A1 - i) x_i for an
/// upper-triangular A0 whose last diagonal entry is zero, fixing the scale by
/// the last entry of x_0. Throws std::domain_error on a vanishing pivot.
template <class S, class ZeroTest>
Rows<S> recurrence(const Rows<S>& a0, const Rows<S>& a1, int depth, const S& last_entry,
                   ZeroTest is_zero) {
  const int dim = static_cast<int>(a0.size());
  Rows<S> out(depth, std::vector<S>(dim, S(0)));
  if (depth <= 0) return out;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < i; ++j)
      if (!is_zero(a0[i][j])) throw std::invalid_argument("recurrence: A0 is not upper triangular");
  if (!is_zero(a0[dim - 1][dim - 1]))
    throw std::invalid_argument("recurrence: A0 has no kernel along the last coordinate");

  auto& x0 = out[0];
  x0[dim - 1] = last_entry;
  for (int j = dim - 2; j >= 0; --j) {
    if (is_zero(a0[j][j])) throw std::domain_error("recurrence: A0 has a second zero pivot");
    S s(0);
    for (int m = j + 1; m < dim; ++m) s += a0[j][m] * x0[m];
    x0[j] = -s / a0[j][j];
  }
  for (int i = 0; i + 1 < depth; ++i) {
    const auto& cur = out[i];
    std::vector<S> rhs(dim, S(0));
    for (int r = 0; r < dim; ++r) {
      S s = -S(i) * cur[r];
      for (int c = 0; c < dim; ++c) s += (a0[r][c] - a1[r][c]) * cur[c];
      rhs[r] = s;
    }
    auto& next = out[i + 1];
    for (int r = dim - 1; r >= 0; --r) {
      const S pivot = a0[r][r] - S(i + 1);
      if (is_zero(pivot)) throw std::domain_error("recurrence: singular step matrix");
      S s = rhs[r];
      for (int c = r + 1; c < dim; ++c) s -= a0[r][c] * next[c];
      next[r] = s / pivot;
    }
  }
  return out;
}

}  // namespace pvi::algebra
