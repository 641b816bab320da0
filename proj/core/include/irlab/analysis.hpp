#pragma once

#include <vector>

#include "irlab/mdp.hpp"

namespace irlab {

// Reward premetrics. All are max-norms over the (s,a,h) grid.
double d_g(const RewardTable& r, const RewardTable& r2);
double d_qstar(const RewardTable& r, const RewardTable& r2, const MdpR& m);

// Worst-case value loss of running any near-optimal policy of r2 under r.
// Near-optimal actions are those within opt_tol of the stage optimum; the sup
// over that policy set is computed exactly by a minimizing DP.
double d_vstar(const RewardTable& r, const RewardTable& r2, const MdpR& m,
               double opt_tol = 1e-9);

// Premetric between IRL problems: max over (s,a,h) of (H-h+1) times the
// policy-support disagreement plus the transition L1 gap.
struct ProblemDistance {
  double rho = 0.0;
  std::vector<double> support_term;  // [(h*S+s)*A+a] in {0,1}
  std::vector<double> l1_term;       // [(h*S+s)*A+a]
};

ProblemDistance rho_g(const MdpR& m, const PolicyTable& pi_e, const MdpR& m2,
                      const PolicyTable& pi_e2);

// Feasible rewards split into an advantage part (non-negative, zero on the
// expert's support) and a value part: r = -A.1{unsupported} + V - pV'.
struct RewardDecomposition {
  int S = 0, A = 0, H = 0;
  std::vector<double> a_term;  // [(h*S+s)*A+a], >= 0
  std::vector<double> v_term;  // [h*S+s], h in [0,H] with V_{H+1} = 0
};

RewardDecomposition decompose_reward(const MdpR& m, const PolicyTable& pi_e,
                                     const RewardTable& r);

// Inverse of the decomposition; used by tests and by the transport below.
RewardTable reconstruct_reward(const MdpR& m, const PolicyTable& pi_e,
                               const RewardDecomposition& dec);

// Constructive transport of a feasible reward onto a nearby problem. The
// unscaled reward (r_tilde) replays the decomposition under the new kernel and
// may leave [-1,1]; dividing by 1+epsilon restores the bound while keeping
// feasibility, at distance d_g(r, r_hat) <= 2 epsilon / (1 + epsilon).
struct TransportResult {
  RewardTable r_hat;                 // scaled, feasible for the target problem
  double epsilon = 0.0;              // max |eps_table|
  std::vector<double> r_tilde;       // unscaled transported reward
  std::vector<double> eps_table;     // per-(s,a,h) transport error
};

TransportResult transport_reward(const RewardTable& r, const MdpR& m,
                                 const PolicyTable& pi_e, const MdpR& m2,
                                 const PolicyTable& pi_e2);

}  // namespace irlab
