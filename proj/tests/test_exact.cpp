// Recurrence against the closed form with no rounding at all.

#include "doctest.h"
#include "exact_check.hpp"

TEST_SUITE("exact") {
  TEST_CASE("recurrence equals closed form in rationals") {
    for (int n = 1; n <= 3; ++n)
      for (int set = 0; set < 5; ++set) {
        const auto alpha = exact::rational_generic(n, 1000 * n + set);
        for (int k = 0; k <= n; ++k) {
          CAPTURE(n);
          CAPTURE(set);
          CAPTURE(k);
          CHECK(exact::recurrence_matches_closed_form(alpha, n, k, 21));
        }
      }
  }

  TEST_CASE("rational sets are generic") {
    const auto alpha = exact::rational_generic(2, 5);
    exact::Q sum = 0;
    for (const auto& a : alpha) sum += a;
    CHECK(sum == 1);
  }
}
