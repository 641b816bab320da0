#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "irlab/mdp.hpp"

namespace irlab {

struct NamedFact {
  std::string name;
  double value = 0.0;
};

// A generated problem instance together with everything a test or experiment
// needs to exercise it: the ground-truth model/policy, an optional alternative
// pair, the restriction under which its feasible set should be built, and
// analytically known facts about it (separations, KL rates, margins, ...).
struct InstanceBundle {
  std::string name;
  MdpR m;
  PolicyTable pi;
  std::optional<MdpR> m_hat;
  std::optional<PolicyTable> pi_hat;
  Restriction restriction = Restriction::none;
  std::vector<double> beta;  // per-stage margins when restriction == beta_margin
  // A reward known to lie in the feasible set of (m, pi); used as the anchor
  // for directed-distance certificates. Omitted when the analytic anchor
  // would leave the [-1,1] box at the requested parameters.
  std::optional<RewardTable> witness;
  std::vector<NamedFact> facts;

  double fact(const std::string& key) const;  // throws std::out_of_range
  void validate() const;
};

// ---- Small counterexample pairs --------------------------------------------

// Two-stage branch gadget whose state-only feasible sets sit at Hausdorff
// distance 1 while the kernels differ by eps in L1 at a single row.
InstanceBundle example_state_only(double eps);

// Two-stage loop gadget for the time-homogeneous restriction; the bundled
// witness reward is feasible and sits at distance 1/4 from the alternative
// restricted set.
InstanceBundle example_time_homogeneous(double eps);

// Branch gadget with a suboptimality margin beta_1 = 2 + 2*eps*(H-1); for
// H >= 1 + 1/eps the alternative margin polytope is empty.
InstanceBundle example_beta_margin(double eps, int H);

// Two-state H=10 pair whose transported reward is unbounded before rescaling:
// the unscaled intermediate reaches -(H-1) at (s1,a1,h=1).
InstanceBundle fact_large_reward();

// ---- Hard-family gadgets ----------------------------------------------------

// Location of a perturbed kernel row inside a hard-family gadget.
// `s` indexes the middle states s_1..s_Sbar (0-based, < S_bar), `a` is the
// played action index (1-based: action 0 is the expert's), `h` is the 1-based
// stage and must lie in [3, H_bar + 2].
struct TargetTriple {
  int s = 0;
  int a = 1;
  int h = 3;
};

// Funnel gadget (start -> root -> middle -> +/- leaves). Without a target this
// is the base instance; with one, action `a` at (s, h) shifts the s_+ mass by
// +eps_prime. The perturbed bundle carries a witness whose distance to the
// base feasible set is eps_prime * (H - h).
InstanceBundle lb_small_delta(int S_bar, int A_bar, int H, int H_bar, double eps_prime,
                              std::optional<TargetTriple> target = std::nullopt);

// One reweighted next-state row: at `at`, played action a >= 1 reaches leaf k
// with probability (1 + eps_prime * v[k]) / S_bar. `v` must be a balanced
// sign vector of length S_bar.
struct SignPerturbation {
  TargetTriple at;
  std::vector<int> v;
};

// Fan-out gadget with S_bar middle states and S_bar absorbing leaves; action 0
// always mixes uniformly over the leaves, actions >= 1 follow the sign
// assignment (uniform where unassigned).
InstanceBundle lb_large_delta(int S_bar, int A_bar, int H, int H_bar, double eps_prime,
                              const std::vector<SignPerturbation>& assignment = {});

// Location of a policy perturbation: middle-state index and 1-based stage.
struct PolicyTarget {
  int s = 0;
  int h = 3;
};

// Sink gadget where only the policy varies: the base expert always plays
// action 0; the perturbed expert also plays action 1 with probability pi_min
// at the target. Transitions are identical across the two bundles.
InstanceBundle lb_policy(int S_bar, int H, int H_bar, double pi_min,
                         std::optional<PolicyTarget> target = std::nullopt);

// ---- Packing ----------------------------------------------------------------

// Greedy packing of balanced sign vectors in {-1,1}^D: every kept pair is at
// L1 distance >= D/16 and the set has size >= 2^(D/5). Throws std::runtime_error
// if the candidate budget is exhausted before reaching that cardinality.
std::vector<std::vector<int>> packing_set(int D, std::uint64_t seed);

// Names accepted by the CLI `instance` subcommand.
std::vector<std::string> instance_names();

}  // namespace irlab
