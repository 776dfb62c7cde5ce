#include <sstream>
#include <string>

#include "doctest.h"
#include "pvi/io.hpp"
#include "pvi/verify.hpp"

using namespace pvi;

TEST_SUITE("io") {
  TEST_CASE("complex numbers") {
    CHECK(io::complex_to_json(2.5).dump() == "2.5");
    CHECK(io::complex_to_json({1.0, -2.0}).dump() == "[1.0,-2.0]");
    CHECK(io::complex_from_json(io::json(1.25)) == cplx(1.25));
    CHECK(io::complex_from_json(io::json::array({1.0, -2.0})) == cplx(1.0, -2.0));
    CHECK_THROWS_AS(io::complex_from_json(io::json("one")), InvalidArgument);
    CHECK_THROWS_AS(io::complex_from_json(io::json::array({1.0, 2.0, 3.0})), InvalidArgument);
  }

  TEST_CASE("parameter files round trip") {
    const auto p = sample_generic(3, 8);
    const auto q = io::params_from_json(io::json::parse(io::params_to_json(p).dump()));
    CHECK(q.n() == 3);
    CHECK(q.is_generic());
    for (int j = 0; j < p.period(); ++j) CHECK(q.alpha(j) == p.alpha(j));
    CHECK(q.eta() == p.eta());

    const auto d = sample_degenerate(2, 2, 1);
    const auto e = io::params_from_json(io::params_to_json(d));
    CHECK(e.level() == 2);

    auto bad = io::params_to_json(p);
    bad["alpha"][0] = 5.0;
    CHECK_THROWS_AS(io::params_from_json(bad), InvalidArgument);
  }

  TEST_CASE("states round trip") {
    SymmetricState s{Vector(2), Vector(2)};
    s.x << cplx(1.0, 0.5), -0.8;
    s.y << 0.14, cplx(0.3, -1e-3);
    const auto t = io::symmetric_state_from_json(io::state_to_json(s));
    CHECK(t.packed() == s.packed());
    CanonicalState c{Vector::Constant(2, 0.5), Vector::Constant(2, -1.0)};
    CHECK(io::canonical_state_from_json(io::state_to_json(c)).packed() == c.packed());
  }

  TEST_CASE("trajectory CSV is exact") {
    Trajectory tr;
    tr.t = {0.1, 1.0 / 3.0, 0.9};
    for (double t : tr.t) {
      Vector v(2);
      v << cplx(std::exp(t), -1.0 / (7.0 + t)), cplx(1e-300 * t, 3.0e200);
      tr.states.push_back(v);
    }
    std::stringstream ss;
    io::write_trajectory_csv(ss, tr, {"q1", "p1"});
    CHECK(ss.str().rfind("t,re_q1,im_q1,re_p1,im_p1\n", 0) == 0);
    std::vector<std::string> names;
    const auto back = io::read_trajectory_csv(ss, &names);
    CHECK(names == std::vector<std::string>{"q1", "p1"});
    REQUIRE(back.t.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(back.t[i] == tr.t[i]);
      CHECK(back.states[i] == tr.states[i]);
    }
  }

  TEST_CASE("coordinate names") {
    CHECK(io::symmetric_names(1) == std::vector<std::string>{"x0", "x1", "y0", "y1"});
    CHECK(io::canonical_names(2) == std::vector<std::string>{"q1", "q2", "p1", "p2"});
  }

  TEST_CASE("series sweep") {
    std::stringstream ss;
    emit_series_csv(ss, {1.0, 1.0}, {2.0}, 0.0, 0.9, 0.05);
    std::string line;
    int rows = -1;
    while (std::getline(ss, line)) ++rows;
    CHECK(rows == 19);
  }

  TEST_CASE("truncation sweep decreases") {
    const auto p0 = sample_generic(2, 3);
    const auto p = p0.with_values({p0.alphas().begin(), p0.alphas().end()}, 0.0);
    std::stringstream ss;
    emit_residual_sweep_csv(ss, p, 1, 0.3, {2, 5, 10, 20});
    std::string line;
    std::getline(ss, line);
    CHECK(line == "depth,residual");
    std::vector<double> res;
    while (std::getline(ss, line)) res.push_back(std::stod(line.substr(line.find(',') + 1)));
    REQUIRE(res.size() == 4);
    for (std::size_t i = 1; i < res.size(); ++i) CHECK(res[i] < res[i - 1]);
  }
}
