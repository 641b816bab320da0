#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "irlab/analysis.hpp"
#include "irlab/geometry.hpp"
#include "irlab/instances.hpp"
#include "irlab/mdp.hpp"
#include "irlab/rng.hpp"

using namespace irlab;
using namespace testutil;

TEST_CASE("d_g is the sup distance over the grid") {
  RewardTable a = zero_reward(2, 2, 2);
  RewardTable b = zero_reward(2, 2, 2);
  CHECK(d_g(a, b) == 0.0);
  b.at(1, 0, 1) = -0.75;
  b.at(0, 1, 0) = 0.5;
  CHECK(d_g(a, b) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("premetric chain holds on random triples") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const int S = 2 + static_cast<int>(rng.below(3));
    const int A = 2 + static_cast<int>(rng.below(2));
    const int H = 2 + static_cast<int>(rng.below(3));
    MdpR m = random_mdp(S, A, H, rng);
    RewardTable r = random_reward(S, A, H, rng);
    RewardTable r2 = random_reward(S, A, H, rng);
    const double dg = d_g(r, r2);
    const double dq = d_qstar(r, r2, m);
    const double dv = d_vstar(r, r2, m);
    CHECK(dq <= H * dg + 1e-8);
    CHECK(dv <= 2.0 * H * dg + 1e-8);
    CHECK(dv <= 2.0 * H * dq + 1e-8);
  }
}

TEST_CASE("d_qstar and d_vstar vanish on identical rewards") {
  SplitMix64 rng(7);
  MdpR m = random_mdp(3, 2, 3, rng);
  RewardTable r = random_reward(3, 2, 3, rng);
  CHECK(d_qstar(r, r, m) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(d_vstar(r, r, m) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("decomposition round-trips and reconstructs feasible rewards") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const int S = 3, A = 2, H = 3;
    MdpR m = random_mdp(S, A, H, rng);
    PolicyTable pi = random_deterministic_policy(S, A, H, rng);

    RewardDecomposition dec;
    dec.S = S;
    dec.A = A;
    dec.H = H;
    dec.a_term.assign(static_cast<std::size_t>(H) * S * A, 0.0);
    dec.v_term.assign(static_cast<std::size_t>(H + 1) * S, 0.0);
    // Small magnitudes keep the reconstruction inside the [-1,1] box.
    for (int h = 0; h < H; ++h)
      for (int s = 0; s < S; ++s) {
        dec.v_term[static_cast<std::size_t>(h) * S + s] =
            rng.uniform(-0.5 / H, 0.5 / H);
        for (int a = 0; a < A; ++a)
          if (pi.at(h, s, a) == 0.0)
            dec.a_term[(static_cast<std::size_t>(h) * S + s) * A + a] =
                rng.uniform(0.0, 0.5 / H);
      }

    RewardTable r = reconstruct_reward(m, pi, dec);
    Feasibility f = is_feasible(m, pi, r, 1e-9);
    CHECK(f.feasible);

    RewardDecomposition back = decompose_reward(m, pi, r);
    for (std::size_t i = 0; i < dec.a_term.size(); ++i)
      CHECK(back.a_term[i] == doctest::Approx(dec.a_term[i]).epsilon(1e-8));
    for (std::size_t i = 0; i < dec.v_term.size(); ++i)
      CHECK(back.v_term[i] == doctest::Approx(dec.v_term[i]).epsilon(1e-8));
  }
}

TEST_CASE("transport on the same problem is the identity") {
  SplitMix64 rng(41);
  MdpR m = random_mdp(3, 2, 3, rng);
  PolicyTable pi = random_deterministic_policy(3, 2, 3, rng);
  RewardTable r = zero_reward(3, 2, 3);
  TransportResult t = transport_reward(r, m, pi, m, pi);
  CHECK(t.epsilon == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(d_g(r, t.r_hat) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("transport reproduces the two-state large-reward pair") {
  InstanceBundle b = fact_large_reward();
  const MdpR& m = b.m;
  const PolicyTable& pi = b.pi;
  const RewardTable& r = *b.witness;

  // Advantage anchors under the ground-truth problem.
  std::vector<double> adv = advantage(m, pi, r);
  const int A = m.A, S = m.S;
  CHECK(adv[0 * A + 1] == doctest::Approx(b.fact("advantage_s1_a2_h1")).epsilon(1e-12));
  CHECK(adv[1 * A + 0] == doctest::Approx(b.fact("advantage_s2_a1_h1")).epsilon(1e-12));

  TransportResult t = transport_reward(r, m, pi, *b.m_hat, *b.pi_hat);
  CHECK(t.r_tilde[(0 * S + 0) * A + 0] ==
        doctest::Approx(b.fact("r_tilde_s1_a1_h1")).epsilon(1e-12));
  double max_abs = 0.0;
  for (double v : t.r_tilde) max_abs = std::max(max_abs, std::abs(v));
  CHECK(max_abs == doctest::Approx(b.fact("r_tilde_max_abs")).epsilon(1e-12));
  CHECK(t.epsilon == doctest::Approx(b.fact("transport_epsilon")).epsilon(1e-12));

  for (double v : t.r_hat.r) CHECK(std::abs(v) <= 1.0 + 1e-12);
  CHECK(is_feasible(*b.m_hat, *b.pi_hat, t.r_hat, 1e-9).feasible);
  CHECK(d_g(r, t.r_hat) <= 2.0 * t.epsilon / (1.0 + t.epsilon) + 1e-12);
}

TEST_CASE("transported rewards stay feasible on random nearby problems") {
  SplitMix64 rng(314);
  for (int trial = 0; trial < 25; ++trial) {
    const int S = 3, A = 2, H = 3;
    MdpR m = random_mdp(S, A, H, rng);
    PolicyTable pi = random_deterministic_policy(S, A, H, rng);
    MdpR m2 = random_mdp(S, A, H, rng);
    PolicyTable pi2 = random_deterministic_policy(S, A, H, rng);

    // A feasible source reward via the decomposition.
    RewardDecomposition dec;
    dec.S = S;
    dec.A = A;
    dec.H = H;
    dec.a_term.assign(static_cast<std::size_t>(H) * S * A, 0.0);
    dec.v_term.assign(static_cast<std::size_t>(H + 1) * S, 0.0);
    for (int h = 0; h < H; ++h)
      for (int s = 0; s < S; ++s) {
        dec.v_term[static_cast<std::size_t>(h) * S + s] = rng.uniform(-0.3 / H, 0.3 / H);
        for (int a = 0; a < A; ++a)
          if (pi.at(h, s, a) == 0.0)
            dec.a_term[(static_cast<std::size_t>(h) * S + s) * A + a] =
                rng.uniform(0.0, 0.3 / H);
      }
    RewardTable r = reconstruct_reward(m, pi, dec);
    REQUIRE(is_feasible(m, pi, r, 1e-9).feasible);

    TransportResult t = transport_reward(r, m, pi, m2, pi2);
    CHECK(is_feasible(m2, pi2, t.r_hat, 1e-8).feasible);
    CHECK(d_g(r, t.r_hat) <= 2.0 * t.epsilon / (1.0 + t.epsilon) + 1e-10);
  }
}

TEST_CASE("problem premetric on the branch pair") {
  MdpR m = branch_mdp(2, 0.55);
  MdpR m2 = branch_mdp(2, 0.45);
  PolicyTable pi = deterministic_policy(3, 2, 2, 0);
  ProblemDistance d = rho_g(m, pi, m2, pi);
  // Only the first-stage branch row differs: L1 gap 0.2 weighted by (H-h+1)=2.
  CHECK(d.rho == doctest::Approx(0.4).epsilon(1e-12));
  for (double v : d.support_term) CHECK(v == 0.0);
  ProblemDistance self = rho_g(m, pi, m, pi);
  CHECK(self.rho == 0.0);
}

TEST_CASE("problem premetric counts support changes, not probabilities") {
  SplitMix64 rng(55);
  MdpR m = random_mdp(2, 2, 2, rng);
  PolicyTable det = deterministic_policy(2, 2, 2, 0);
  PolicyTable mixed = det;
  mixed.homogeneous = false;
  mixed.at(0, 0, 0) = 0.6;
  mixed.at(0, 0, 1) = 0.4;
  // Action 1 goes from unsupported to supported at (h=1, s=0).
  ProblemDistance d = rho_g(m, det, m, mixed);
  CHECK(d.rho == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("feasible sets move Lipschitz-continuously with the problem") {
  SplitMix64 rng(777);
  int checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int S = 2, A = 2, H = 2;
    MdpR m = random_mdp(S, A, H, rng);
    PolicyTable pi = random_deterministic_policy(S, A, H, rng);
    MdpR m2 = m;
    // Perturb one row slightly and renormalize.
    int h = static_cast<int>(rng.below(H));
    int s = static_cast<int>(rng.below(S));
    int a = static_cast<int>(rng.below(A));
    double total = 0.0;
    for (int sp = 0; sp < S; ++sp) {
      double v = std::max(1e-6, m2.at(h, s, a, sp) + rng.uniform(-0.05, 0.05));
      m2.at(h, s, a, sp) = v;
      total += v;
    }
    for (int sp = 0; sp < S; ++sp) m2.at(h, s, a, sp) /= total;
    m2.homogeneous = false;

    RewardPolytope p = build_polytope(m, pi, Restriction::none);
    RewardPolytope q = build_polytope(m2, pi, Restriction::none);
    HausdorffResult hd = hausdorff(p, q, HausdorffMethod::exact);
    double rho = rho_g(m, pi, m2, pi).rho;
    CHECK(hd.value <= 2.0 * rho / (1.0 + rho) + 1e-6);
    ++checked;
  }
  CHECK(checked == 20);
}
