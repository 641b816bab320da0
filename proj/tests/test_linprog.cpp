#include <doctest.h>

#include <cmath>

#include "irlab/linprog.hpp"
#include "irlab/rng.hpp"

using namespace irlab;

TEST_CASE("1-D box projection LP") {
  // min -x s.t. x <= 1, -x <= 1  ->  x = 1
  LpResult r = lp_minimize({{1.0}, {-1.0}}, {1.0, 1.0}, {-1.0});
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.x[0] == doctest::Approx(1.0));
  CHECK(r.objective == doctest::Approx(-1.0));
}

TEST_CASE("2-D LP with a diagonal cut") {
  // min -(x+y) over the unit square intersected with x + y <= 1.5
  std::vector<std::vector<double>> A = {
      {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}};
  std::vector<double> b = {1, 1, 1, 1, 1.5};
  LpResult r = lp_minimize(A, b, {-1, -1});
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.objective == doctest::Approx(-1.5));
  CHECK(r.x[0] + r.x[1] == doctest::Approx(1.5));
}

TEST_CASE("infeasible system is certified") {
  // x <= -1 and -x <= -1  ->  x <= -1 and x >= 1
  LpResult r = lp_minimize({{1.0}, {-1.0}}, {-1.0, -1.0}, {0.0});
  CHECK(r.status == LpStatus::infeasible);
}

TEST_CASE("unbounded objective is certified") {
  LpResult r = lp_minimize({{1.0}}, {1.0}, {1.0});  // min x, x <= 1
  CHECK(r.status == LpStatus::unbounded);
}

TEST_CASE("negative right-hand sides (phase 1 required)") {
  // x >= 2, x <= 5, min x  ->  2
  LpResult r = lp_minimize({{-1.0}, {1.0}}, {-2.0, 5.0}, {1.0});
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.x[0] == doctest::Approx(2.0));
}

TEST_CASE("degenerate vertex does not cycle") {
  // Four planes meeting at the origin in 2-D plus a box; min -x - 2y.
  std::vector<std::vector<double>> A = {
      {1, 1}, {1, -1}, {-1, 1}, {-1, -1}, {1, 0}, {0, 1}};
  std::vector<double> b = {1, 1, 1, 1, 0.5, 0.5};
  LpResult r = lp_minimize(A, b, {-1, -2});
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.objective == doctest::Approx(-1.5));  // x = 0.5, y = 0.5
}

TEST_CASE("random LPs agree with vertex brute force in 2-D") {
  SplitMix64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    // Random rows around the unit box; objective random.
    std::vector<std::vector<double>> A = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    std::vector<double> b = {1, 1, 1, 1};
    for (int extra = 0; extra < 3; ++extra) {
      A.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
      b.push_back(rng.uniform(0.2, 1.2));  // keeps the origin feasible
    }
    std::vector<double> c = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    LpResult r = lp_minimize(A, b, c);
    REQUIRE(r.status == LpStatus::optimal);
    // Brute force: intersect every row pair, keep feasible points.
    double best = 0.0;  // origin is feasible with value 0
    const int m = static_cast<int>(A.size());
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        double det = A[i][0] * A[j][1] - A[i][1] * A[j][0];
        if (std::abs(det) < 1e-9) continue;
        double x = (b[i] * A[j][1] - A[i][1] * b[j]) / det;
        double y = (A[i][0] * b[j] - b[i] * A[j][0]) / det;
        bool ok = true;
        for (int k = 0; k < m && ok; ++k)
          ok = A[k][0] * x + A[k][1] * y <= b[k] + 1e-8;
        if (ok) best = std::min(best, c[0] * x + c[1] * y);
      }
    CHECK(r.objective == doctest::Approx(best).epsilon(1e-7));
  }
}
