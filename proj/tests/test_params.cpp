#include <cmath>

#include "doctest.h"
#include "pvi/params.hpp"

using namespace pvi;

TEST_SUITE("params") {
  TEST_CASE("partial sums") {
    const auto p = ParameterSet::generic(1, {0.1, 0.2, 0.3, 0.4}, 0.0);
    CHECK(partial_sum(p, 0, -3) == cplx(0.0));
    CHECK(std::abs(partial_sum(p, 2, 1) - 0.7) < 1e-15);
    // wraps around the circle
    CHECK(std::abs(partial_sum(p, 3, 1) - 0.5) < 1e-15);
    for (long k = 0; k < 4; k += 2) CHECK(std::abs(partial_sum(p, k, 3) - 1.0) < 1e-15);
  }

  TEST_CASE("even arcs of full length sum to one") {
    for (int n = 1; n <= 4; ++n) {
      const auto p = sample_generic(n, 11 * n);
      for (int k = 0; k <= n; ++k) CHECK(std::abs(partial_sum(p, 2 * k + 2, 2 * n + 1) - 1.0) < 1e-14);
    }
  }

  TEST_CASE("partial sums are additive") {
    const auto p = sample_generic(3, 5);
    for (long k = 0; k < p.period(); ++k)
      for (long a = 0; a < 10; ++a)
        for (long b = 0; b < 10; ++b) {
          const cplx lhs = partial_sum(p, k, a + b + 1);
          const cplx rhs = partial_sum(p, k, a) + partial_sum(p, k + a + 1, b);
          CHECK(std::abs(lhs - rhs) < 1e-13);
        }
  }

  TEST_CASE("sampled sets") {
    const auto p1 = sample_generic(1, 1);
    CHECK(std::abs(p1.total() - 1.0) < 1e-14);

    const auto p2 = sample_generic(2, 7);
    for (int i = 1; i <= 2; ++i)
      for (int j = 1; j <= 2 - i + 1; ++j) CHECK(distance_to_integers(partial_sum(p2, 2 * i, 2 * j - 1)) >= 0.05);
    CHECK(resonance_margin(p2) >= 0.05);

    const auto a = sample_generic(3, 3), b = sample_generic(3, 3);
    for (int j = 0; j < a.period(); ++j) CHECK(a.alpha(j) == b.alpha(j));
    CHECK(a.eta() == b.eta());
    CHECK(sample_generic(3, 4).alpha(1) != a.alpha(1));
  }

  TEST_CASE("separated sets keep every arc away from the integers") {
    for (int n = 1; n <= 4; ++n) {
      const auto p = sample_separated(n, 20 + n);
      CHECK(arc_margin(p) >= 0.05);
      CHECK(std::abs(p.total() - 1.0) < 1e-14);
    }
  }

  TEST_CASE("degenerate sets") {
    for (int n = 1; n <= 3; ++n)
      for (int r = 1; r <= n + 1; ++r) {
        const auto p = sample_degenerate(n, r, 17);
        CHECK(p.level() == r);
        for (int i = 0; i < r; ++i) CHECK(p.alpha(2 * i) == cplx(0.0));
        CHECK(std::abs(p.total() - 1.0) < 1e-14);
        CHECK(degenerate_resonance_margin(p) >= 0.05);
      }
  }

  TEST_CASE("confluence replacement") {
    const auto p = ParameterSet::generic(1, {0.1, 0.2, 0.3, 0.4}, 0.0);
    const auto q = degenerate_replace(p, 0.01);
    CHECK(std::abs(q.alpha(0) + 100.0) < 1e-12);
    CHECK(std::abs(q.alpha(1) - 100.2) < 1e-12);
    CHECK(q.alpha(2) == p.alpha(2));
    CHECK(q.alpha(3) == p.alpha(3));

    const auto d = ParameterSet::degenerate(2, 1, {0.0, 0.2, 0.3, 0.1, 0.2, 0.2}, 0.0);
    const auto e = degenerate_replace(d, 1e-3);
    CHECK(std::abs(e.alpha(2) + 1000.0) < 1e-9);
    CHECK(std::abs(e.alpha(3) - (d.alpha(3) + 1000.0)) < 1e-9);
  }

  TEST_CASE("replacement keeps the total when the replaced entry is zero") {
    const auto d = sample_degenerate(3, 2, 4);
    // relabelled one level down, so the entry being replaced is alpha_2 = 0
    const auto e = degenerate_replace(d.as_level(1), 1e-4);
    CHECK(std::abs(e.total() - d.total()) < 1e-10);
  }

  TEST_CASE("invalid sets are rejected") {
    CHECK_THROWS_AS(ParameterSet::generic(1, {0.1, 0.2, 0.3, 0.3}, 0.0), InvalidArgument);
    CHECK_THROWS_AS(ParameterSet::generic(1, {0.1, 0.2, 0.7}, 0.0), InvalidArgument);
    CHECK_THROWS_AS(ParameterSet::degenerate(1, 1, {0.1, 0.2, 0.3, 0.4}, 0.0), InvalidArgument);
    CHECK_THROWS_AS(sample_generic(0, 1), InvalidArgument);
  }
}
