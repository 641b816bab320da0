#include "irlab/instances.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "irlab/rng.hpp"

namespace irlab {

namespace {

MdpR blank_mdp(int S, int A, int H) {
  MdpR m;
  m.S = S;
  m.A = A;
  m.H = H;
  m.p.assign(static_cast<std::size_t>(H) * S * A * S, 0.0);
  return m;
}

PolicyTable constant_policy(int S, int A, int H, int action) {
  PolicyTable pi;
  pi.S = S;
  pi.A = A;
  pi.H = H;
  pi.homogeneous = true;
  pi.pi.assign(static_cast<std::size_t>(H) * S * A, 0.0);
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s) pi.at(h, s, action) = 1.0;
  return pi;
}

RewardTable blank_reward(int S, int A, int H, Restriction tag = Restriction::none) {
  RewardTable r;
  r.S = S;
  r.A = A;
  r.H = H;
  r.restriction = tag;
  r.r.assign(static_cast<std::size_t>(H) * S * A, 0.0);
  return r;
}

// Point every action at (h, s) to the same next-state row.
void set_uniform_row(MdpR& m, int h, int s, const std::vector<int>& succ) {
  for (int a = 0; a < m.A; ++a)
    for (int sp : succ) m.at(h, s, a, sp) = 1.0 / static_cast<double>(succ.size());
}

void set_absorbing(MdpR& m, int h, int s) {
  for (int a = 0; a < m.A; ++a) m.at(h, s, a, s) = 1.0;
}

bool stage_independent(const MdpR& m) {
  const std::size_t block = static_cast<std::size_t>(m.S) * m.A * m.S;
  for (int h = 1; h < m.H; ++h)
    for (std::size_t i = 0; i < block; ++i)
      if (m.p[h * block + i] != m.p[i]) return false;
  return true;
}

void finalize(MdpR& m) {
  m.homogeneous = stage_independent(m);
  m.validate();
}

// Three-state branch: state 0 splits to the absorbing pair (1, 2); the played
// action reaches state 1 with probability q, the other action with 1/2.
MdpR branch_kernel(int H, double q) {
  MdpR m = blank_mdp(3, 2, H);
  for (int h = 0; h < H; ++h) {
    m.at(h, 0, 0, 1) = q;
    m.at(h, 0, 0, 2) = 1.0 - q;
    m.at(h, 0, 1, 1) = 0.5;
    m.at(h, 0, 1, 2) = 0.5;
    set_absorbing(m, h, 1);
    set_absorbing(m, h, 2);
  }
  finalize(m);
  return m;
}

// Two-state loop: the played action keeps state 0 with probability q, the
// other with 1/2; state 1 absorbs.
MdpR loop_kernel(int H, double q) {
  MdpR m = blank_mdp(2, 2, H);
  for (int h = 0; h < H; ++h) {
    m.at(h, 0, 0, 0) = q;
    m.at(h, 0, 0, 1) = 1.0 - q;
    m.at(h, 0, 1, 0) = 0.5;
    m.at(h, 0, 1, 1) = 0.5;
    set_absorbing(m, h, 1);
  }
  finalize(m);
  return m;
}

double bernoulli_kl(double p, double q) {
  auto term = [](double x, double y) { return x == 0.0 ? 0.0 : x * std::log(x / y); };
  return term(p, q) + term(1.0 - p, 1.0 - q);
}

void check_target(const TargetTriple& t, int S_bar, int A_bar, int H, int H_bar) {
  if (t.s < 0 || t.s >= S_bar) throw std::invalid_argument("target state out of range");
  if (t.a < 1 || t.a > A_bar) throw std::invalid_argument("target action out of range");
  if (t.h < 3 || t.h > H_bar + 2 || t.h > H)
    throw std::invalid_argument("target stage out of range");
}

void check_gadget_sizes(int S_bar, int A_bar, int H, int H_bar) {
  if (S_bar < 1 || A_bar < 1) throw std::invalid_argument("gadget sizes must be positive");
  if (H_bar < 1 || H_bar > H) throw std::invalid_argument("H_bar must lie in [1, H]");
  if (H < 3) throw std::invalid_argument("gadget horizon must be at least 3");
}

// Shared funnel prefix: state 0 drifts toward state 1 (1/2 per stage before
// stage H_bar, deterministically afterwards); state 1 fans out uniformly over
// the `mids` states.
void build_funnel_prefix(MdpR& m, int H_bar, const std::vector<int>& mids) {
  for (int h = 0; h < m.H; ++h) {
    if (h + 1 < H_bar) {
      for (int a = 0; a < m.A; ++a) {
        m.at(h, 0, a, 0) = 0.5;
        m.at(h, 0, a, 1) = 0.5;
      }
    } else {
      for (int a = 0; a < m.A; ++a) m.at(h, 0, a, 1) = 1.0;
    }
    set_uniform_row(m, h, 1, mids);
  }
}

}  // namespace

double InstanceBundle::fact(const std::string& key) const {
  for (const auto& f : facts)
    if (f.name == key) return f.value;
  throw std::out_of_range("InstanceBundle: no fact named " + key);
}

void InstanceBundle::validate() const {
  m.validate();
  pi.validate();
  if (pi.S != m.S || pi.A != m.A || pi.H != m.H)
    throw std::invalid_argument("InstanceBundle: policy shape mismatch");
  if (m_hat) {
    m_hat->validate();
    if (m_hat->S != m.S || m_hat->A != m.A || m_hat->H != m.H)
      throw std::invalid_argument("InstanceBundle: alternative shape mismatch");
  }
  if (pi_hat) {
    pi_hat->validate();
    if (pi_hat->S != m.S || pi_hat->A != m.A || pi_hat->H != m.H)
      throw std::invalid_argument("InstanceBundle: alternative policy shape mismatch");
  }
  if (restriction == Restriction::beta_margin &&
      static_cast<int>(beta.size()) != m.H)
    throw std::invalid_argument("InstanceBundle: beta must have one margin per stage");
  if (witness) {
    witness->validate();
    if (witness->S != m.S || witness->A != m.A || witness->H != m.H)
      throw std::invalid_argument("InstanceBundle: witness shape mismatch");
  }
}

InstanceBundle example_state_only(double eps) {
  if (!(eps > 0.0 && eps <= 1.0))
    throw std::invalid_argument("example_state_only: eps must lie in (0, 1]");
  InstanceBundle b;
  b.name = "example_state_only";
  b.m = branch_kernel(2, 0.5 + eps / 4.0);
  b.m_hat = branch_kernel(2, 0.5 - eps / 4.0);
  b.pi = constant_policy(3, 2, 2, 0);
  b.pi_hat = b.pi;
  b.restriction = Restriction::state_only;
  RewardTable w = blank_reward(3, 2, 2, Restriction::state_only);
  for (int a = 0; a < 2; ++a) {
    w.at(1, 1, a) = 1.0;   // second-stage reward on the favored leaf
    w.at(1, 2, a) = -1.0;
  }
  b.witness = w;
  b.facts = {{"l1_gap", eps}, {"hausdorff", 1.0}};
  return b;
}

InstanceBundle example_time_homogeneous(double eps) {
  if (!(eps > 0.0 && eps <= 1.0))
    throw std::invalid_argument("example_time_homogeneous: eps must lie in (0, 1]");
  InstanceBundle b;
  b.name = "example_time_homogeneous";
  b.m = loop_kernel(2, 0.5 + eps / 4.0);
  b.m_hat = loop_kernel(2, 0.5 - eps / 4.0);
  PolicyTable pi;
  pi.S = 2;
  pi.A = 2;
  pi.H = 2;
  pi.homogeneous = false;
  pi.pi.assign(2 * 2 * 2, 0.0);
  pi.at(0, 0, 0) = 1.0;  // loop action first, then the fair one
  pi.at(1, 0, 1) = 1.0;
  pi.at(0, 1, 0) = 1.0;  // the absorbing state's choice is immaterial
  pi.at(1, 1, 1) = 1.0;
  pi.validate();
  b.pi = pi;
  b.pi_hat = pi;
  b.restriction = Restriction::time_homogeneous;
  RewardTable w = blank_reward(2, 2, 2, Restriction::time_homogeneous);
  for (int h = 0; h < 2; ++h) {
    w.at(h, 0, 0) = 1.0 - eps / 12.0;
    w.at(h, 0, 1) = 1.0;
    w.at(h, 1, 0) = 0.5;
    w.at(h, 1, 1) = 0.5;
  }
  b.witness = w;
  b.facts = {{"l1_gap", eps}, {"hausdorff_lower", 0.25}, {"witness_distance", 0.25}};
  return b;
}

InstanceBundle example_beta_margin(double eps, int H) {
  if (!(eps > 0.0 && eps <= 0.5))
    throw std::invalid_argument("example_beta_margin: eps must lie in (0, 1/2]");
  if (H < 2) throw std::invalid_argument("example_beta_margin: H must be at least 2");
  InstanceBundle b;
  b.name = "example_beta_margin";
  b.m = branch_kernel(H, 0.5 + eps);
  b.m_hat = branch_kernel(H, 0.5 - eps);
  b.pi = constant_policy(3, 2, H, 0);
  b.pi_hat = b.pi;
  b.restriction = Restriction::beta_margin;
  const double beta1 = 2.0 + 2.0 * eps * (H - 1);
  b.beta.assign(H, beta1);
  // Plain feasible reward that attains the stage-1 margin exactly: the gap
  // between the two branch actions is 2 + 2*eps*(H-1) under the true kernel.
  RewardTable w = blank_reward(3, 2, H);
  w.at(0, 0, 0) = 1.0;
  w.at(0, 0, 1) = -1.0;
  for (int h = 1; h < H; ++h)
    for (int a = 0; a < 2; ++a) {
      w.at(h, 1, a) = 1.0;
      w.at(h, 2, a) = -1.0;
    }
  b.witness = w;
  b.facts = {{"beta_1", beta1}, {"margin_gap", beta1}};
  return b;
}

InstanceBundle fact_large_reward() {
  const int H = 10;
  InstanceBundle b;
  b.name = "fact_large_reward";
  MdpR m = blank_mdp(2, 2, H);
  MdpR mh = blank_mdp(2, 2, H);
  for (int h = 0; h < H; ++h) {
    m.at(h, 0, 0, 0) = 1.0;  // stay put under the expert's action
    m.at(h, 0, 1, 0) = 0.9;
    m.at(h, 0, 1, 1) = 0.1;
    m.at(h, 1, 0, 0) = 0.1;
    m.at(h, 1, 0, 1) = 0.9;
    m.at(h, 1, 1, 1) = 1.0;
    // Alternative kernel: every one of those coin flips lands the other way.
    mh.at(h, 0, 0, 1) = 1.0;
    mh.at(h, 0, 1, 0) = 0.1;
    mh.at(h, 0, 1, 1) = 0.9;
    mh.at(h, 1, 0, 0) = 0.9;
    mh.at(h, 1, 0, 1) = 0.1;
    mh.at(h, 1, 1, 0) = 1.0;
  }
  finalize(m);
  finalize(mh);
  b.m = m;
  b.m_hat = mh;
  PolicyTable pi;
  pi.S = 2;
  pi.A = 2;
  pi.H = H;
  pi.homogeneous = true;
  pi.pi.assign(static_cast<std::size_t>(H) * 2 * 2, 0.0);
  for (int h = 0; h < H; ++h) {
    pi.at(h, 0, 0) = 1.0;
    pi.at(h, 1, 1) = 1.0;
  }
  pi.validate();
  b.pi = pi;
  b.pi_hat = pi;
  RewardTable w = blank_reward(2, 2, H);
  for (int h = 0; h < H; ++h) {
    w.at(h, 0, 1) = -1.0;
    w.at(h, 1, 1) = 1.0;
  }
  b.witness = w;
  b.facts = {{"advantage_s1_a2_h1", -1.0 + (H - 1) / 10.0},
             {"advantage_s2_a1_h1", -1.0 - (H - 1) / 10.0},
             {"r_tilde_s1_a1_h1", -(H - 1.0)},
             {"transport_epsilon", H - 1.0},
             {"r_tilde_max_abs", static_cast<double>(H)}};
  return b;
}

InstanceBundle lb_small_delta(int S_bar, int A_bar, int H, int H_bar, double eps_prime,
                              std::optional<TargetTriple> target) {
  check_gadget_sizes(S_bar, A_bar, H, H_bar);
  if (!(eps_prime >= 0.0 && eps_prime <= 0.25))
    throw std::invalid_argument("lb_small_delta: eps_prime must lie in [0, 1/4]");
  if (target) check_target(*target, S_bar, A_bar, H, H_bar);

  const int S = S_bar + 4;
  const int A = A_bar + 1;
  const int plus = 2 + S_bar;
  const int minus = 3 + S_bar;
  std::vector<int> mids(S_bar);
  for (int i = 0; i < S_bar; ++i) mids[i] = 2 + i;

  MdpR base = blank_mdp(S, A, H);
  build_funnel_prefix(base, H_bar, mids);
  for (int h = 0; h < H; ++h) {
    for (int mid : mids)
      for (int a = 0; a < A; ++a) {
        base.at(h, mid, a, plus) = 0.5;
        base.at(h, mid, a, minus) = 0.5;
      }
    set_absorbing(base, h, plus);
    set_absorbing(base, h, minus);
  }

  InstanceBundle b;
  b.name = "lb_small_delta";
  b.pi = constant_policy(S, A, H, 0);
  if (!target) {
    finalize(base);
    b.m = base;
    return b;
  }

  MdpR pert = base;
  const int h0 = target->h - 1;
  const int ts = 2 + target->s;
  pert.at(h0, ts, target->a, plus) = 0.5 + eps_prime;
  pert.at(h0, ts, target->a, minus) = 0.5 - eps_prime;
  finalize(base);
  finalize(pert);
  b.m = pert;
  b.m_hat = base;
  b.pi_hat = b.pi;

  const int tail = H - target->h;  // stages strictly after the decision point
  const double sep = eps_prime * tail;
  // Anchor reward: the favored branch action pays 1, the baseline action gives
  // up exactly the perturbed continuation edge 2*eps_prime*tail.
  if (1.0 - 2.0 * sep >= -1.0) {
    RewardTable w = blank_reward(S, A, H);
    for (int h = h0 + 1; h < H; ++h)
      for (int a = 0; a < A; ++a) {
        w.at(h, minus, a) = 1.0;
        w.at(h, plus, a) = -1.0;
      }
    w.at(h0, ts, target->a) = 1.0;
    w.at(h0, ts, 0) = 1.0 - 2.0 * sep;
    for (int a = 1; a < A; ++a)
      if (a != target->a) w.at(h0, ts, a) = -1.0;
    b.witness = w;
  }
  b.facts = {{"separation", sep},
             {"kl_bound", 8.0 * eps_prime * eps_prime},
             {"kl_per_query", bernoulli_kl(0.5, 0.5 + eps_prime)}};
  return b;
}

InstanceBundle lb_large_delta(int S_bar, int A_bar, int H, int H_bar, double eps_prime,
                              const std::vector<SignPerturbation>& assignment) {
  check_gadget_sizes(S_bar, A_bar, H, H_bar);
  if (S_bar % 2 != 0) throw std::invalid_argument("lb_large_delta: S_bar must be even");
  if (!(eps_prime >= 0.0 && eps_prime <= 0.5))
    throw std::invalid_argument("lb_large_delta: eps_prime must lie in [0, 1/2]");

  const int S = 2 + 2 * S_bar;
  const int A = A_bar + 1;
  std::vector<int> mids(S_bar), leaves(S_bar);
  for (int i = 0; i < S_bar; ++i) {
    mids[i] = 2 + i;
    leaves[i] = 2 + S_bar + i;
  }

  MdpR base = blank_mdp(S, A, H);
  build_funnel_prefix(base, H_bar, mids);
  for (int h = 0; h < H; ++h) {
    for (int mid : mids)
      for (int a = 0; a < A; ++a)
        for (int leaf : leaves) base.at(h, mid, a, leaf) = 1.0 / S_bar;
    for (int leaf : leaves) set_absorbing(base, h, leaf);
  }

  InstanceBundle b;
  b.name = "lb_large_delta";
  b.pi = constant_policy(S, A, H, 0);
  if (assignment.empty()) {
    finalize(base);
    b.m = base;
    return b;
  }

  MdpR pert = base;
  for (const auto& sp : assignment) {
    check_target(sp.at, S_bar, A_bar, H, H_bar);
    if (static_cast<int>(sp.v.size()) != S_bar)
      throw std::invalid_argument("lb_large_delta: sign vector length mismatch");
    int sum = 0;
    for (int x : sp.v) {
      if (x != 1 && x != -1)
        throw std::invalid_argument("lb_large_delta: sign vector entries must be +/-1");
      sum += x;
    }
    if (sum != 0) throw std::invalid_argument("lb_large_delta: sign vector must be balanced");
    const int h0 = sp.at.h - 1;
    const int ts = 2 + sp.at.s;
    for (int k = 0; k < S_bar; ++k)
      pert.at(h0, ts, sp.at.a, leaves[k]) = (1.0 + eps_prime * sp.v[k]) / S_bar;
  }
  finalize(base);
  finalize(pert);
  b.m = pert;
  b.m_hat = base;
  b.pi_hat = b.pi;

  const double kl_row =
      0.5 * (1.0 + eps_prime) * std::log(1.0 + eps_prime) +
      0.5 * (1.0 - eps_prime) * (eps_prime < 1.0 ? std::log(1.0 - eps_prime) : 0.0);
  b.facts = {{"kl_bound", 2.0 * eps_prime * eps_prime}, {"kl_per_query", kl_row}};

  if (assignment.size() == 1) {
    const auto& sp = assignment.front();
    const int tail = H - sp.at.h;
    const double edge = eps_prime * tail;
    b.facts.push_back({"separation_bound", edge / 32.0});
    if (1.0 - edge >= -1.0) {
      RewardTable w = blank_reward(S, A, H);
      const int h0 = sp.at.h - 1;
      const int ts = 2 + sp.at.s;
      for (int h = h0 + 1; h < H; ++h)
        for (int k = 0; k < S_bar; ++k)
          for (int a = 0; a < A; ++a) w.at(h, leaves[k], a) = -sp.v[k];
      w.at(h0, ts, sp.at.a) = 1.0;
      w.at(h0, ts, 0) = 1.0 - edge;
      for (int a = 1; a < A; ++a)
        if (a != sp.at.a) w.at(h0, ts, a) = -1.0;
      b.witness = w;
    }
  }
  return b;
}

InstanceBundle lb_policy(int S_bar, int H, int H_bar, double pi_min,
                         std::optional<PolicyTarget> target) {
  check_gadget_sizes(S_bar, 1, H, H_bar);
  if (!(pi_min > 0.0 && pi_min <= 0.5))
    throw std::invalid_argument("lb_policy: pi_min must lie in (0, 1/2]");
  if (target) check_target({target->s, 1, target->h}, S_bar, 1, H, H_bar);

  const int S = S_bar + 3;
  const int A = 2;
  const int sink = 2 + S_bar;
  std::vector<int> mids(S_bar);
  for (int i = 0; i < S_bar; ++i) mids[i] = 2 + i;

  MdpR m = blank_mdp(S, A, H);
  build_funnel_prefix(m, H_bar, mids);
  for (int h = 0; h < H; ++h) {
    for (int mid : mids)
      for (int a = 0; a < A; ++a) m.at(h, mid, a, sink) = 1.0;
    set_absorbing(m, h, sink);
  }
  finalize(m);

  InstanceBundle b;
  b.name = "lb_policy";
  b.m = m;
  b.pi = constant_policy(S, A, H, 0);
  if (!target) return b;

  PolicyTable pert = b.pi;
  pert.homogeneous = false;
  pert.at(target->h - 1, 2 + target->s, 0) = 1.0 - pi_min;
  pert.at(target->h - 1, 2 + target->s, 1) = pi_min;
  pert.validate();
  b.m_hat = m;
  b.pi_hat = pert;

  // Anchor reward feasible for the base expert but 1 away (in sup norm) from
  // every reward that keeps both actions tied at the perturbed decision.
  RewardTable w = blank_reward(S, A, H);
  w.at(target->h - 1, 2 + target->s, 0) = 1.0;
  w.at(target->h - 1, 2 + target->s, 1) = -1.0;
  b.witness = w;
  b.facts = {{"separation", 1.0},
             {"kl_per_query", std::log(1.0 / (1.0 - pi_min))}};
  return b;
}

std::vector<std::vector<int>> packing_set(int D, std::uint64_t seed) {
  if (D < 16 || D % 2 != 0)
    throw std::invalid_argument("packing_set: D must be even and at least 16");
  const double threshold = D / 16.0;
  const std::size_t wanted =
      static_cast<std::size_t>(std::ceil(std::exp2(D / 5.0)));

  std::vector<std::vector<int>> kept;
  auto l1 = [D](const std::vector<int>& a, const std::vector<int>& b) {
    int d = 0;
    for (int i = 0; i < D; ++i) d += std::abs(a[i] - b[i]);
    return static_cast<double>(d);
  };
  auto offer = [&](const std::vector<int>& v) {
    for (const auto& u : kept)
      if (l1(u, v) < threshold) return;
    kept.push_back(v);
  };

  // Systematic phase: walk the balanced vectors in lexicographic order of
  // their +1 positions until the candidate allowance runs out.
  std::vector<int> pos(D / 2);
  for (int i = 0; i < D / 2; ++i) pos[i] = i;
  std::size_t budget = 4096;
  while (budget-- > 0 && kept.size() < wanted) {
    std::vector<int> v(D, -1);
    for (int p : pos) v[p] = 1;
    offer(v);
    // next combination
    int i = D / 2 - 1;
    while (i >= 0 && pos[i] == D - (D / 2 - i)) --i;
    if (i < 0) break;
    ++pos[i];
    for (int j = i + 1; j < D / 2; ++j) pos[j] = pos[j - 1] + 1;
  }

  // Randomized phase: uniform balanced vectors via partial shuffles.
  SplitMix64 rng(seed);
  std::size_t random_budget = 512 * wanted + 65536;
  std::vector<int> v(D);
  while (kept.size() < wanted && random_budget-- > 0) {
    for (int i = 0; i < D; ++i) v[i] = i < D / 2 ? 1 : -1;
    for (int i = D - 1; i > 0; --i)
      std::swap(v[i], v[rng.below(static_cast<std::uint64_t>(i) + 1)]);
    offer(v);
  }
  if (kept.size() < wanted)
    throw std::runtime_error("packing_set: candidate budget exhausted at D=" +
                             std::to_string(D));
  return kept;
}

std::vector<std::string> instance_names() {
  return {"example_state_only", "example_time_homogeneous", "example_beta_margin",
          "fact_large_reward",  "lb_small_delta",           "lb_large_delta",
          "lb_policy"};
}

}  // namespace irlab
