#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "helpers.hpp"
#include "irlab/us_irl.hpp"

using namespace irlab;
using namespace testutil;

namespace {

std::vector<double> balanced_row(int D, const std::vector<int>& v, double eps) {
  std::vector<double> p(D);
  for (int i = 0; i < D; ++i) p[i] = (1.0 + eps * v[i]) / D;
  return p;
}

// All balanced sign vectors of even length D, by direct enumeration.
void balanced_vectors(int D, std::vector<std::vector<int>>& out) {
  std::vector<int> v(D, -1);
  for (unsigned mask = 0; mask < (1u << D); ++mask) {
    if (__builtin_popcount(mask) != D / 2) continue;
    for (int i = 0; i < D; ++i) v[i] = (mask >> i) & 1 ? 1 : -1;
    out.push_back(v);
  }
}

}  // namespace

TEST_CASE("variant names round-trip") {
  for (Variant v : {Variant::inhomogeneous_known, Variant::homogeneous_known,
                    Variant::inhomogeneous_unknown, Variant::homogeneous_unknown})
    CHECK(variant_from_name(variant_name(v)) == v);
  CHECK_THROWS_AS(variant_from_name("nope"), std::invalid_argument);
}

TEST_CASE("concentration radii have the stated closed forms") {
  // log(SAH/delta) + (S-1) log(e (1 + n/(S-1)))
  const double expected = std::log(2.0 * 2.0 * 2.0 / 0.1) + std::log(std::exp(1.0) * 4.0);
  CHECK(beta(3, 0.1, 2, 2, 2) == doctest::Approx(expected).epsilon(1e-12));
  const double expected_t = std::log(2.0 * 2.0 / 0.1) + std::log(std::exp(1.0) * 4.0);
  CHECK(beta_tilde(3, 0.1, 2, 2) == doctest::Approx(expected_t).epsilon(1e-12));
  // Halving delta adds exactly log 2.
  CHECK(beta(3, 0.05, 2, 2, 2) ==
        doctest::Approx(expected + std::log(2.0)).epsilon(1e-12));
  // The (S-1) term vanishes for S = 1.
  CHECK(beta(10, 0.1, 1, 2, 2) == doctest::Approx(std::log(4.0 / 0.1)).epsilon(1e-12));
}

TEST_CASE("support-detection threshold has the stated closed form") {
  // log(2 S A H n^2 / delta) / log(1/(1-pi_min)) = log 16 / log 2 = 4
  CHECK(xi(1, 1.0, 2, 2, 2, 0.5) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(xi_tilde(1, 1.0, 4, 2, 0.5) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("confidence widths match the plug-in formulas") {
  const int S = 2, A = 2, H = 2;
  SampleDataset d(S, A, H);
  for (int i = 0; i < 5; ++i) d.add(0, 0, 0, 1, 0);

  ConfidenceConfig cfg;
  cfg.epsilon = 0.5;
  cfg.delta = 0.1;
  cfg.variant = Variant::inhomogeneous_known;
  const double expect =
      2.0 * std::sqrt(2.0) * H * std::sqrt(2.0 * beta(5, 0.1, S, A, H) / 5.0);
  CHECK(confidence(d, 0, 0, 0, cfg) == doctest::Approx(expect).epsilon(1e-12));
  // Unvisited triples force another round.
  CHECK(confidence(d, 1, 1, 1, cfg) == std::numeric_limits<double>::infinity());

  // Homogeneous widths use stage-merged counts and the stage-free radius.
  SampleDataset d2(S, A, H);
  for (int i = 0; i < 2; ++i) d2.add(0, 0, 0, 1, 0);
  for (int i = 0; i < 3; ++i) d2.add(0, 0, 1, 1, 0);
  ConfidenceConfig hom = cfg;
  hom.variant = Variant::homogeneous_known;
  const double expect_h =
      2.0 * std::sqrt(2.0) * H * std::sqrt(2.0 * beta_tilde(5, 0.1, S, A) / 5.0);
  CHECK(confidence(d2, 0, 0, 0, hom) == doctest::Approx(expect_h).epsilon(1e-12));

  // Unknown-policy widths split delta and add the support indicator.
  ConfidenceConfig unk = cfg;
  unk.variant = Variant::inhomogeneous_unknown;
  unk.pi_min = 0.3;
  double n_s = 5.0;
  double threshold = xi(5, 0.05, S, A, H, 0.3);
  double indicator = n_s < std::max(1.0, threshold) ? 1.0 : 0.0;
  const double expect_u =
      2.0 * H * (indicator + std::sqrt(2.0 * beta(5, 0.05, S, A, H) / 5.0));
  CHECK(confidence(d, 0, 0, 0, unk) == doctest::Approx(expect_u).epsilon(1e-12));
}

TEST_CASE("uniform sampling stops exactly when the worst width clears epsilon") {
  MdpR m = branch_mdp(2, 0.6);
  PolicyTable pi = deterministic_policy(3, 2, 2, 0);
  ConfidenceConfig cfg;
  cfg.epsilon = 1.5;
  cfg.delta = 0.1;
  cfg.variant = Variant::inhomogeneous_known;
  cfg.validate(3, 2, 2);

  GenerativeOracle oracle(m, pi, 77);
  RunTrace t = run_us_irl(oracle, cfg);
  CHECK(t.completed);
  CHECK(t.tau == static_cast<long long>(t.rounds) * 3 * 2 * 2);
  CHECK(t.tau == oracle.queries());
  REQUIRE(!t.eps_history.empty());
  CHECK(t.eps_history.back() <= cfg.epsilon);
  if (t.rounds > 1) CHECK(t.eps_history[t.rounds - 2] > cfg.epsilon);
  t.empirical_m.validate();
  t.empirical_pi.validate();

  // Counts are uniform, so the stopping round is seed-independent.
  GenerativeOracle oracle2(m, pi, 1234);
  RunTrace t2 = run_us_irl(oracle2, cfg);
  CHECK(t2.tau == t.tau);

  // The safety cap truncates and reports an incomplete run.
  ConfidenceConfig capped = cfg;
  capped.epsilon = 1e-3;
  capped.max_samples = 1200;
  GenerativeOracle oracle3(m, pi, 77);
  RunTrace t3 = run_us_irl(oracle3, capped);
  CHECK(!t3.completed);
  CHECK(t3.tau <= capped.max_samples);
}

TEST_CASE("run trace serializes to json") {
  MdpR m = branch_mdp(2, 0.6);
  PolicyTable pi = deterministic_policy(3, 2, 2, 0);
  ConfidenceConfig cfg;
  cfg.epsilon = 1.5;
  GenerativeOracle oracle(m, pi, 5);
  RunTrace t = run_us_irl(oracle, cfg);
  std::string j = t.to_json();
  CHECK(j.find("\"tau\"") != std::string::npos);
  CHECK(j.find("\"eps_history\"") != std::string::npos);
  CHECK(j.find("\"completed\"") != std::string::npos);
}

TEST_CASE("closed-form bounds are positive, monotone, and ordered") {
  const double ub = upper_bound_tau(4, 3, 3, 0.5, 0.1, Variant::inhomogeneous_known);
  CHECK(ub > 0.0);
  CHECK(upper_bound_tau(4, 3, 6, 0.5, 0.1, Variant::inhomogeneous_known) > ub);
  CHECK(upper_bound_tau(4, 3, 3, 0.25, 0.1, Variant::inhomogeneous_known) > ub);
  // Homogeneous kernels are one H factor cheaper.
  CHECK(upper_bound_tau(4, 3, 3, 0.5, 0.1, Variant::homogeneous_known) < ub);
  // Unknown-policy runs pay for support detection on top of the known-policy rate.
  CHECK(upper_bound_tau(4, 3, 3, 0.5, 0.1, Variant::inhomogeneous_unknown, 0.3) > ub);

  LowerBound lb = lower_bound_tau(9, 2, 12, 0.5, 1.0 / 32.0, Variant::inhomogeneous_known);
  CHECK(lb.in_range);
  CHECK(lb.value > 0.0);
  CHECK(lb.value <=
        upper_bound_tau(9, 2, 12, 0.5, 1.0 / 32.0, Variant::inhomogeneous_known));
  // Out-of-range parameters still evaluate but carry the flag.
  LowerBound out = lower_bound_tau(4, 2, 3, 0.5, 0.2, Variant::inhomogeneous_known);
  CHECK(!out.in_range);

  LowerBound pol = lower_bound_tau(7, 2, 3, 0.5, 0.05, Variant::inhomogeneous_unknown, 0.3);
  CHECK(pol.in_range);
  CHECK(pol.value == doctest::Approx(7.0 * 3.0 / (8.0 * std::log(1.0 / 0.7)) *
                                     std::log(1.0 / 0.05))
                         .epsilon(1e-12));
}

TEST_CASE("categorical KL basics") {
  std::vector<double> p{0.5, 0.5};
  CHECK(kl_categorical(p, p) == doctest::Approx(0.0).epsilon(1e-15));
  std::vector<double> q{0.75, 0.25};
  const double expect = 0.5 * std::log(0.5 / 0.75) + 0.5 * std::log(0.5 / 0.25);
  CHECK(kl_categorical(p, q) == doctest::Approx(expect).epsilon(1e-12));
  std::vector<double> r{1.0, 0.0};
  CHECK(kl_categorical(r, q) > 0.0);
  CHECK(kl_categorical(p, r) == std::numeric_limits<double>::infinity());
}

TEST_CASE("balanced perturbations keep KL below twice epsilon squared") {
  for (int D : {2, 4, 8}) {
    std::vector<std::vector<int>> vs;
    balanced_vectors(D, vs);
    std::vector<double> uniform(D, 1.0 / D);
    for (double eps : {0.1, 0.25, 0.5})
      for (const auto& v : vs) {
        std::vector<double> row = balanced_row(D, v, eps);
        CHECK(kl_categorical(row, uniform) <= 2.0 * eps * eps + 1e-12);
        CHECK(kl_categorical(uniform, row) <= 2.0 * eps * eps + 1e-12);
      }
  }
}

TEST_CASE("pinsker inequality on random pairs") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const int D = 2 + static_cast<int>(rng.below(4));
    std::vector<double> p(D), q(D);
    double sp = 0.0, sq = 0.0;
    for (int i = 0; i < D; ++i) {
      p[i] = rng.uniform() + 1e-3;
      q[i] = rng.uniform() + 1e-3;
      sp += p[i];
      sq += q[i];
    }
    double tv = 0.0;
    for (int i = 0; i < D; ++i) {
      p[i] /= sp;
      q[i] /= sq;
      tv += std::abs(p[i] - q[i]);
    }
    tv *= 0.5;
    CHECK(2.0 * tv * tv <= kl_categorical(p, q) + 1e-12);
  }
}

TEST_CASE("anytime concentration event holds with the stated rate") {
  std::vector<double> p{0.2, 0.3, 0.5};
  double failure = good_event_check(p, 50, 0.1, 2000, 99);
  CHECK(failure <= 0.1);
}

TEST_CASE("support-detection sample threshold") {
  // log(1/0.1)/log(2) ~ 3.32: four visits suffice, three do not.
  CHECK(support_detection_bound(4, 0.5, 0.1));
  CHECK(!support_detection_bound(3, 0.5, 0.1));
  CHECK(!support_detection_bound(0, 0.5, 0.1));
}

TEST_CASE("config validation rejects bad parameters") {
  ConfidenceConfig cfg;
  cfg.epsilon = 0.5;
  cfg.delta = 0.1;
  CHECK_NOTHROW(cfg.validate(2, 2, 2));
  ConfidenceConfig bad = cfg;
  bad.epsilon = 0.0;
  CHECK_THROWS_AS(bad.validate(2, 2, 2), std::invalid_argument);
  bad = cfg;
  bad.variant = Variant::inhomogeneous_unknown;
  bad.pi_min = 0.0;
  CHECK_THROWS_AS(bad.validate(2, 2, 2), std::invalid_argument);
}
