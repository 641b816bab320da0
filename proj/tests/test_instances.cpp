#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "irlab/analysis.hpp"
#include "irlab/geometry.hpp"
#include "irlab/instances.hpp"
#include "irlab/us_irl.hpp"

using namespace irlab;

namespace {

double row_l1(const MdpR& a, const MdpR& b, int h, int s, int ac) {
  double d = 0.0;
  for (int sp = 0; sp < a.S; ++sp) d += std::abs(a.at(h, s, ac, sp) - b.at(h, s, ac, sp));
  return d;
}

std::vector<double> kernel_row(const MdpR& m, int h, int s, int a) {
  return {m.row(h, s, a), m.row(h, s, a) + m.S};
}

}  // namespace

TEST_CASE("registry lists every generator") {
  auto names = instance_names();
  for (const char* n :
       {"example_state_only", "example_time_homogeneous", "example_beta_margin",
        "fact_large_reward", "lb_small_delta", "lb_large_delta", "lb_policy"})
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
}

TEST_CASE("state-only pair: kernel gap, witness, exact separation") {
  InstanceBundle b = example_state_only(0.2);
  b.validate();
  CHECK(row_l1(b.m, *b.m_hat, 0, 0, 0) == doctest::Approx(b.fact("l1_gap")).epsilon(1e-12));
  CHECK(is_feasible(b.m, b.pi, *b.witness, 1e-9).feasible);

  RewardPolytope p = build_polytope(b.m, b.pi, b.restriction);
  RewardPolytope q = build_polytope(*b.m_hat, *b.pi_hat, b.restriction);
  CHECK(contains(p, b.witness->r));
  HausdorffResult hd = hausdorff(p, q, HausdorffMethod::exact);
  CHECK(hd.exact);
  CHECK(hd.value == doctest::Approx(b.fact("hausdorff")).epsilon(1e-6));
}

TEST_CASE("time-homogeneous pair: witness distance is a quarter") {
  InstanceBundle b = example_time_homogeneous(0.2);
  b.validate();
  CHECK(row_l1(b.m, *b.m_hat, 0, 0, 0) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(row_l1(b.m, *b.m_hat, 1, 0, 0) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(is_feasible(b.m, b.pi, *b.witness, 1e-9).feasible);

  RewardPolytope p = build_polytope(b.m, b.pi, b.restriction);
  RewardPolytope q = build_polytope(*b.m_hat, *b.pi_hat, b.restriction);
  CHECK(contains(p, b.witness->r));
  DistanceResult d = point_to_set_distance(b.witness->r, q);
  CHECK(d.distance == doctest::Approx(b.fact("witness_distance")).epsilon(1e-6));
  HausdorffResult hd = hausdorff(p, q, HausdorffMethod::exact);
  CHECK(hd.value >= b.fact("hausdorff_lower") - 1e-6);
}

TEST_CASE("margin pair: the alternative polytope is empty") {
  InstanceBundle b = example_beta_margin(0.1, 11);
  b.validate();
  CHECK(b.fact("beta_1") == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(static_cast<int>(b.beta.size()) == 11);

  // The bundled reward is feasible in the plain sense and attains the stage-1
  // margin exactly at the decision triple.
  CHECK(is_feasible(b.m, b.pi, *b.witness, 1e-9).feasible);
  std::vector<double> adv = advantage(b.m, b.pi, *b.witness);
  CHECK(adv[0 * b.m.A + 1] == doctest::Approx(-b.fact("margin_gap")).epsilon(1e-9));

  RewardPolytope alt = build_polytope(*b.m_hat, *b.pi_hat, b.restriction, b.beta);
  CHECK(is_empty(alt));
}

TEST_CASE("large-reward pair carries its analytic anchors") {
  InstanceBundle b = fact_large_reward();
  b.validate();
  CHECK(b.m.H == 10);
  CHECK(is_feasible(b.m, b.pi, *b.witness, 1e-9).feasible);
  // Every coin flip is swapped in the alternative kernel.
  for (int s = 0; s < 2; ++s)
    for (int a = 0; a < 2; ++a)
      for (int sp = 0; sp < 2; ++sp)
        CHECK(b.m.at(0, s, a, sp) == doctest::Approx(1.0 - b.m_hat->at(0, s, a, sp)));
}

TEST_CASE("funnel gadget: base and perturbed differ in exactly one row") {
  TargetTriple t{0, 1, 3};
  InstanceBundle base = lb_small_delta(1, 1, 12, 2, 0.1);
  InstanceBundle pert = lb_small_delta(1, 1, 12, 2, 0.1, t);
  base.validate();
  pert.validate();
  CHECK(!base.m_hat);
  CHECK(pert.m_hat);

  int diff_rows = 0;
  for (int h = 0; h < 12; ++h)
    for (int s = 0; s < pert.m.S; ++s)
      for (int a = 0; a < pert.m.A; ++a)
        if (row_l1(pert.m, *pert.m_hat, h, s, a) > 0.0) ++diff_rows;
  CHECK(diff_rows == 1);
  CHECK(row_l1(pert.m, *pert.m_hat, t.h - 1, 2 + t.s, t.a) ==
        doctest::Approx(0.2).epsilon(1e-12));

  // Per-query KL at the perturbed triple matches the fact and the 8 eps'^2 cap.
  double kl = kl_categorical(kernel_row(*pert.m_hat, t.h - 1, 2 + t.s, t.a),
                             kernel_row(pert.m, t.h - 1, 2 + t.s, t.a));
  CHECK(kl == doctest::Approx(pert.fact("kl_per_query")).epsilon(1e-9));
  CHECK(kl <= pert.fact("kl_bound") + 1e-12);
}

TEST_CASE("funnel gadget: witness certifies the stated separation") {
  TargetTriple t{0, 1, 3};
  InstanceBundle pert = lb_small_delta(1, 1, 12, 2, 0.1, t);
  REQUIRE(pert.witness);
  CHECK(is_feasible(pert.m, pert.pi, *pert.witness, 1e-9).feasible);
  CHECK(pert.fact("separation") == doctest::Approx(0.9).epsilon(1e-12));

  RewardPolytope base_set = build_polytope(*pert.m_hat, *pert.pi_hat, Restriction::none);
  DistanceResult d = point_to_set_distance(pert.witness->r, base_set);
  CHECK(d.distance >= pert.fact("separation") - 1e-6);
}

TEST_CASE("fan-out gadget: rows are stochastic and KL stays quadratic") {
  std::vector<int> v{1, 1, -1, -1};
  TargetTriple t{0, 1, 3};
  InstanceBundle b = lb_large_delta(4, 1, 8, 2, 0.3, {{t, v}});
  b.validate();
  REQUIRE(b.m_hat);

  double kl = kl_categorical(kernel_row(b.m, t.h - 1, 2 + t.s, t.a),
                             kernel_row(*b.m_hat, t.h - 1, 2 + t.s, t.a));
  CHECK(kl == doctest::Approx(b.fact("kl_per_query")).epsilon(1e-9));
  CHECK(kl <= b.fact("kl_bound") + 1e-12);

  CHECK_THROWS_AS(lb_large_delta(4, 1, 8, 2, 0.3, {{t, {1, 1, 1, -1}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(lb_large_delta(3, 1, 8, 2, 0.3, {}), std::invalid_argument);
}

TEST_CASE("fan-out gadget: witness separation across sign assignments") {
  std::vector<int> v{1, 1, -1, -1};
  std::vector<int> w{1, -1, 1, -1};
  TargetTriple t{0, 1, 3};
  InstanceBundle bv = lb_large_delta(4, 1, 8, 2, 0.3, {{t, v}});
  InstanceBundle bw = lb_large_delta(4, 1, 8, 2, 0.3, {{t, w}});
  REQUIRE(bv.witness);
  CHECK(is_feasible(bv.m, bv.pi, *bv.witness, 1e-9).feasible);

  RewardPolytope other = build_polytope(bw.m, bw.pi, Restriction::none);
  DistanceResult d = point_to_set_distance(bv.witness->r, other);
  CHECK(d.distance >= bv.fact("separation_bound") - 1e-6);
}

TEST_CASE("policy gadget: only the expert changes") {
  PolicyTarget t{0, 3};
  InstanceBundle b = lb_policy(1, 3, 1, 0.3, t);
  b.validate();
  REQUIRE(b.m_hat);
  REQUIRE(b.pi_hat);
  CHECK(b.m.p == b.m_hat->p);
  CHECK(b.pi_hat->at(2, 2, 1) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(b.fact("kl_per_query") == doctest::Approx(std::log(1.0 / 0.7)).epsilon(1e-12));

  REQUIRE(b.witness);
  CHECK(is_feasible(b.m, b.pi, *b.witness, 1e-9).feasible);
  RewardPolytope pert_set = build_polytope(*b.m_hat, *b.pi_hat, Restriction::none);
  DistanceResult d = point_to_set_distance(b.witness->r, pert_set);
  CHECK(d.distance >= b.fact("separation") - 1e-6);
}

TEST_CASE("packing sets are large, balanced, and well separated") {
  for (int D : {16, 32}) {
    auto set = packing_set(D, 4242);
    const double needed = std::exp2(D / 5.0);
    CHECK(static_cast<double>(set.size()) >= needed);
    for (const auto& v : set) {
      CHECK(static_cast<int>(v.size()) == D);
      int sum = 0;
      for (int x : v) sum += x;
      CHECK(sum == 0);
    }
    for (std::size_t i = 0; i < set.size(); ++i)
      for (std::size_t j = i + 1; j < set.size(); ++j) {
        int d = 0;
        for (int k = 0; k < D; ++k) d += std::abs(set[i][k] - set[j][k]);
        CHECK(d >= D / 16);
      }
  }
}

TEST_CASE("generators reject out-of-range parameters") {
  CHECK_THROWS_AS(example_state_only(0.0), std::invalid_argument);
  CHECK_THROWS_AS(example_beta_margin(0.6, 11), std::invalid_argument);
  CHECK_THROWS_AS(lb_small_delta(1, 1, 12, 2, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(lb_small_delta(1, 1, 12, 2, 0.1, TargetTriple{0, 1, 9}),
                  std::invalid_argument);
  CHECK_THROWS_AS(lb_policy(1, 3, 1, 0.0, std::nullopt), std::invalid_argument);
  CHECK_THROWS_AS(packing_set(15, 1), std::invalid_argument);
}
