#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace irlab {

// Stage indices are 1-based in file formats and error messages, 0-based in
// memory (h in [0, H)). This is the only place where the convention is stated;
// all in-memory indices below are 0-based.

inline constexpr double kStochasticTol = 1e-12;  // row-sum tolerance
inline constexpr double kBellmanTol = 1e-10;     // DP consistency tolerance

// Markov decision process without reward: states, actions, horizon, kernels.
struct MdpR {
  int S = 0;
  int A = 0;
  int H = 0;
  bool homogeneous = false;
  // p[((h*S + s)*A + a)*S + s'] = p_h(s'|s,a)
  std::vector<double> p;

  double at(int h, int s, int a, int sp) const {
    return p[(((static_cast<std::size_t>(h) * S + s) * A + a) * S) + sp];
  }
  double& at(int h, int s, int a, int sp) {
    return p[(((static_cast<std::size_t>(h) * S + s) * A + a) * S) + sp];
  }
  const double* row(int h, int s, int a) const {
    return &p[((static_cast<std::size_t>(h) * S + s) * A + a) * S];
  }

  // Throws std::invalid_argument on bad shape, non-stochastic rows, or a
  // homogeneous flag that the kernels contradict. Call after construction;
  // treat validated instances as immutable.
  void validate() const;
};

struct PolicyTable {
  int S = 0;
  int A = 0;
  int H = 0;
  bool homogeneous = false;
  // pi[(h*S + s)*A + a] = pi_h(a|s)
  std::vector<double> pi;

  double at(int h, int s, int a) const {
    return pi[(static_cast<std::size_t>(h) * S + s) * A + a];
  }
  double& at(int h, int s, int a) {
    return pi[(static_cast<std::size_t>(h) * S + s) * A + a];
  }
  const double* row(int h, int s) const {
    return &pi[(static_cast<std::size_t>(h) * S + s) * A];
  }

  bool is_deterministic() const;
  // The single supported action at (h,s); requires a deterministic table.
  int action(int h, int s) const;

  void validate() const;
};

enum class Restriction { none, state_only, time_homogeneous, beta_margin };

std::string restriction_name(Restriction r);
Restriction restriction_from_name(const std::string& name);

struct RewardTable {
  int S = 0;
  int A = 0;
  int H = 0;
  // r[(h*S + s)*A + a]
  std::vector<double> r;
  Restriction restriction = Restriction::none;
  std::vector<double> beta;  // per-stage margins, used when restriction == beta_margin

  double at(int h, int s, int a) const {
    return r[(static_cast<std::size_t>(h) * S + s) * A + a];
  }
  double& at(int h, int s, int a) {
    return r[(static_cast<std::size_t>(h) * S + s) * A + a];
  }

  void validate() const;
};

// Q_h(s,a) and V_h(s) from backward induction; v has H+1 stages with V_{H+1}=0.
struct ValueSet {
  int S = 0;
  int A = 0;
  int H = 0;
  std::vector<double> q;  // [(h*S+s)*A+a]
  std::vector<double> v;  // [h*S+s], h in [0, H]

  double q_at(int h, int s, int a) const {
    return q[(static_cast<std::size_t>(h) * S + s) * A + a];
  }
  double v_at(int h, int s) const { return v[static_cast<std::size_t>(h) * S + s]; }
};

ValueSet evaluate_policy(const MdpR& m, const PolicyTable& pi, const RewardTable& r);
ValueSet optimal_values(const MdpR& m, const RewardTable& r);

// A_h^pi(s,a;r) = Q_h^pi(s,a) - V_h^pi(s), flattened like a reward table.
std::vector<double> advantage(const MdpR& m, const PolicyTable& pi, const RewardTable& r);

struct Feasibility {
  bool feasible = false;
  double max_violation = 0.0;  // largest constraint violation (advantage or bound)
  int h = -1, s = -1, a = -1;  // triple attaining it (0-based)
};

// Eq.-style feasibility: advantage of the expert non-positive everywhere and
// |r| bounded by 1, both up to tol.
Feasibility is_feasible(const MdpR& m, const PolicyTable& pi_e, const RewardTable& r,
                        double tol);

// Greedy deterministic policy from a ValueSet (ties -> lowest action index).
PolicyTable greedy_policy(const MdpR& m, const ValueSet& vs);

// ---- JSON I/O -------------------------------------------------------------
// Instance files couple the kernel and a policy:
// {"S":int,"A":int,"H":int,"homogeneous":bool,"p":[h][s][a][s'],"policy":[h][s][a]}
// Reward files: {"r":[h][s][a],"restriction":string,"beta":[h] (optional)}

std::string instance_to_json(const MdpR& m, const PolicyTable& pi);
std::pair<MdpR, PolicyTable> instance_from_json(const std::string& text);
std::string reward_to_json(const RewardTable& r);
RewardTable reward_from_json(const std::string& text, int S, int A, int H);

}  // namespace irlab
