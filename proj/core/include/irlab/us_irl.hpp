#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "irlab/mdp.hpp"
#include "irlab/sampling.hpp"

namespace irlab {

// Which confidence function drives the stopping rule. Homogeneous variants
// merge counts across stages; unknown-policy variants add a support-detection
// indicator and split delta in half between policy and transitions.
enum class Variant {
  inhomogeneous_known,
  homogeneous_known,
  inhomogeneous_unknown,
  homogeneous_unknown,
};

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& name);

struct ConfidenceConfig {
  double epsilon = 0.5;   // accuracy target, in (0,2)
  double delta = 0.05;    // confidence, in (0,1)
  Variant variant = Variant::inhomogeneous_known;
  double pi_min = 0.0;    // required > 0 for unknown-policy variants
  long long max_samples = 10'000'000;  // safety cap on total queries

  void validate(int S, int A, int H) const;
};

// Concentration radius for one transition row after n samples over S next
// states; the (S-1) term vanishes for S = 1.
double beta(long long n, double delta, int S, int A, int H);
// Stage-merged version (no H factor in the union bound).
double beta_tilde(long long n, double delta, int S, int A);

// Samples of a state visit needed before support detection is reliable.
double xi(long long n, double delta, int S, int A, int H, double pi_min);
double xi_tilde(long long n, double delta, int S, int A, double pi_min);

// Per-triple confidence width given current counts; +infinity when the
// relevant count is zero (forces another round).
double confidence(const SampleDataset& counts, int s, int a, int h,
                  const ConfidenceConfig& cfg);

struct RunTrace {
  ConfidenceConfig cfg;
  std::uint64_t seed = 0;
  std::vector<double> eps_history;  // max confidence after each round
  long long tau = 0;                // total samples = rounds * S*A*H
  int rounds = 0;
  bool completed = false;  // false when the safety cap stopped the run
  MdpR empirical_m;
  PolicyTable empirical_pi;

  std::string to_json() const;
};

// Uniform-sampling loop: one query per (s,a,h) per round, stop when the worst
// confidence falls to cfg.epsilon. Deterministic in (oracle seed, cfg).
RunTrace run_us_irl(GenerativeOracle& oracle, const ConfidenceConfig& cfg);

// Closed-form sample-size bounds, evaluated exactly as stated.
double upper_bound_tau(int S, int A, int H, double epsilon, double delta,
                       Variant variant, double pi_min = 0.0);

struct LowerBound {
  double value = 0.0;
  bool in_range = true;  // false when (S,A,H,delta) violate the theorem's hypotheses
};

LowerBound lower_bound_tau(int S, int A, int H, double epsilon, double delta,
                           Variant variant, double pi_min = 0.0);

// KL divergence of categorical distributions; +infinity when p charges a
// point that q does not.
double kl_categorical(const std::vector<double>& p, const std::vector<double>& q);

// Monte Carlo failure rate of the anytime concentration event at a fixed n:
// fraction of trials where n * KL(empirical, p) exceeds
// log(1/delta) + (D-1) log(e (1 + n/(D-1))).
double good_event_check(const std::vector<double>& p, long long n, double delta,
                        int trials, std::uint64_t seed);

// True iff n visits suffice to observe every action of weight >= pi_min with
// probability at least 1 - delta.
bool support_detection_bound(long long n, double pi_min, double delta);

}  // namespace irlab
