#pragma once

// Rational instantiation of the series kernels.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pvi/series_algebra.hpp"

namespace exact {

using Q = boost::multiprecision::cpp_rational;

// Positive weights normalised to total one. Every arc shorter than the
// period then lies strictly inside (0, 1), so no denominator can vanish.
inline std::vector<Q> rational_generic(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(1, 60);
  std::uniform_int_distribution<int> den(7, 97);
  std::vector<Q> w;
  Q total = 0;
  for (int j = 0; j < 2 * n + 2; ++j) {
    w.emplace_back(num(rng), den(rng));
    total += w.back();
  }
  for (auto& x : w) x /= total;
  return w;
}

inline bool recurrence_matches_closed_form(const std::vector<Q>& alpha, int n, int k, int depth) {
  const std::span<const Q> a(alpha);
  auto zero = [](const Q& q) { return q == 0; };
  const auto [a0, a1] = pvi::algebra::gauge_matrices<Q>(a, n, k);
  const auto closed = pvi::algebra::closed_form<Q>(a, n, k, depth, zero);
  const auto rec = pvi::algebra::recurrence<Q>(a0, a1, depth, closed[0][n], zero);
  return rec == closed;
}

}  // namespace exact
