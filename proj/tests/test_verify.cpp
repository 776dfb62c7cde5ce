#include "doctest.h"
#include "pvi/verify.hpp"

using namespace pvi;

TEST_SUITE("verify") {
  TEST_CASE("scenario list") {
    const auto all = all_scenarios(4);
    CHECK(all.size() == 16);
    CHECK(all_scenarios(1).size() == 4);
  }

  TEST_CASE("rank one scenarios pass") {
    CHECK(scenario_particular_solution(1, 5).pass());
    CHECK(scenario_degeneration(1, 2, 5).pass());
    CHECK(scenario_weyl(1, 5).pass());
  }

  TEST_CASE("reports are deterministic") {
    const auto a = scenario_particular_solution(2, 11);
    const auto b = scenario_particular_solution(2, 11);
    CHECK(report_to_json(a, false) == report_to_json(b, false));
  }

  TEST_CASE("thread count does not change the results") {
    const auto specs = all_scenarios(1);
    const auto one = run_scenarios(specs, 3, 1);
    const auto two = run_scenarios(specs, 3, 2);
    REQUIRE(one.size() == two.size());
    for (std::size_t i = 0; i < one.size(); ++i) CHECK(report_to_json(one[i], false) == report_to_json(two[i], false));
  }

  TEST_CASE("perturbed series are caught") {
    ScenarioOptions opt;
    opt.perturb_a0 = 0.1;
    const auto rep = scenario_particular_solution(2, 4, opt);
    CHECK_FALSE(rep.pass());
    double worst = 0;
    for (const auto& m : rep.measurements)
      if (!m.pass && m.bound == Bound::Below) worst = std::max(worst, m.value);
    CHECK(worst >= 1e-4);
  }
}
