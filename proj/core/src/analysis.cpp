#include "irlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace irlab {

namespace {

void check_same_shape(const RewardTable& r, const RewardTable& r2) {
  if (r.S != r2.S || r.A != r2.A || r.H != r2.H)
    throw std::invalid_argument("reward tables have different shapes");
}

void require_feasible(const MdpR& m, const PolicyTable& pi_e, const RewardTable& r) {
  Feasibility f = is_feasible(m, pi_e, r, 1e-9);
  if (!f.feasible)
    throw std::invalid_argument(
        "reward is infeasible for the given problem: violation " +
        std::to_string(f.max_violation) + " at (h=" + std::to_string(f.h + 1) +
        ", s=" + std::to_string(f.s) + ", a=" + std::to_string(f.a) + ")");
}

}  // namespace

double d_g(const RewardTable& r, const RewardTable& r2) {
  check_same_shape(r, r2);
  double best = 0.0;
  for (std::size_t i = 0; i < r.r.size(); ++i)
    best = std::max(best, std::abs(r.r[i] - r2.r[i]));
  return best;
}

double d_qstar(const RewardTable& r, const RewardTable& r2, const MdpR& m) {
  check_same_shape(r, r2);
  ValueSet a = optimal_values(m, r);
  ValueSet b = optimal_values(m, r2);
  double best = 0.0;
  for (std::size_t i = 0; i < a.q.size(); ++i)
    best = std::max(best, std::abs(a.q[i] - b.q[i]));
  return best;
}

double d_vstar(const RewardTable& r, const RewardTable& r2, const MdpR& m,
               double opt_tol) {
  check_same_shape(r, r2);
  if (opt_tol < 0.0) throw std::invalid_argument("opt_tol must be non-negative");
  const int S = m.S, A = m.A, H = m.H;
  ValueSet opt_r = optimal_values(m, r);
  ValueSet opt_r2 = optimal_values(m, r2);

  // Minimizing DP under r, restricted to actions near-optimal for r2. The
  // pointwise minimum over all policies supported on those sets is attained by
  // one Markov policy, so backward induction is exact.
  std::vector<double> vmin(static_cast<std::size_t>(H + 1) * S, 0.0);
  for (int h = H - 1; h >= 0; --h)
    for (int s = 0; s < S; ++s) {
      double best = std::numeric_limits<double>::infinity();
      for (int a = 0; a < A; ++a) {
        if (opt_r2.q_at(h, s, a) < opt_r2.v_at(h, s) - opt_tol) continue;
        double q = r.at(h, s, a);
        for (int sp = 0; sp < S; ++sp)
          q += m.at(h, s, a, sp) * vmin[static_cast<std::size_t>(h + 1) * S + sp];
        best = std::min(best, q);
      }
      vmin[static_cast<std::size_t>(h) * S + s] = best;
    }

  double out = 0.0;
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s)
      out = std::max(out, opt_r.v_at(h, s) - vmin[static_cast<std::size_t>(h) * S + s]);
  return out;
}

ProblemDistance rho_g(const MdpR& m, const PolicyTable& pi_e, const MdpR& m2,
                      const PolicyTable& pi_e2) {
  if (m.S != m2.S || m.A != m2.A || m.H != m2.H)
    throw std::invalid_argument("rho_g: problems have different shapes");
  const int S = m.S, A = m.A, H = m.H;
  ProblemDistance out;
  out.support_term.assign(static_cast<std::size_t>(H) * S * A, 0.0);
  out.l1_term.assign(static_cast<std::size_t>(H) * S * A, 0.0);
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a) {
        const std::size_t i = (static_cast<std::size_t>(h) * S + s) * A + a;
        const bool z1 = pi_e.at(h, s, a) == 0.0;
        const bool z2 = pi_e2.at(h, s, a) == 0.0;
        out.support_term[i] = (z1 != z2) ? 1.0 : 0.0;
        double l1 = 0.0;
        for (int sp = 0; sp < S; ++sp)
          l1 += std::abs(m.at(h, s, a, sp) - m2.at(h, s, a, sp));
        out.l1_term[i] = l1;
        out.rho = std::max(out.rho, (H - h) * (out.support_term[i] + l1));
      }
  return out;
}

RewardDecomposition decompose_reward(const MdpR& m, const PolicyTable& pi_e,
                                     const RewardTable& r) {
  require_feasible(m, pi_e, r);
  const int S = m.S, A = m.A, H = m.H;
  ValueSet vs = evaluate_policy(m, pi_e, r);
  std::vector<double> adv = advantage(m, pi_e, r);
  RewardDecomposition dec;
  dec.S = S;
  dec.A = A;
  dec.H = H;
  dec.v_term = vs.v;
  dec.a_term.assign(adv.size(), 0.0);
  // Supported actions carry zero advantage for any feasible reward (the mixing
  // identity forces it), so -adv is non-negative everywhere up to tolerance.
  for (std::size_t i = 0; i < adv.size(); ++i) dec.a_term[i] = std::max(0.0, -adv[i]);
  return dec;
}

RewardTable reconstruct_reward(const MdpR& m, const PolicyTable& pi_e,
                               const RewardDecomposition& dec) {
  const int S = dec.S, A = dec.A, H = dec.H;
  RewardTable r;
  r.S = S;
  r.A = A;
  r.H = H;
  r.r.assign(static_cast<std::size_t>(H) * S * A, 0.0);
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a) {
        const std::size_t i = (static_cast<std::size_t>(h) * S + s) * A + a;
        double pv = 0.0;
        for (int sp = 0; sp < S; ++sp)
          pv += m.at(h, s, a, sp) * dec.v_term[static_cast<std::size_t>(h + 1) * S + sp];
        const double ind = pi_e.at(h, s, a) == 0.0 ? 1.0 : 0.0;
        r.r[i] = -dec.a_term[i] * ind + dec.v_term[static_cast<std::size_t>(h) * S + s] - pv;
      }
  return r;
}

TransportResult transport_reward(const RewardTable& r, const MdpR& m,
                                 const PolicyTable& pi_e, const MdpR& m2,
                                 const PolicyTable& pi_e2) {
  if (m.S != m2.S || m.A != m2.A || m.H != m2.H)
    throw std::invalid_argument("transport_reward: problems have different shapes");
  RewardDecomposition dec = decompose_reward(m, pi_e, r);
  const int S = m.S, A = m.A, H = m.H;

  TransportResult out;
  out.eps_table.assign(static_cast<std::size_t>(H) * S * A, 0.0);
  out.r_tilde.assign(static_cast<std::size_t>(H) * S * A, 0.0);
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a) {
        const std::size_t i = (static_cast<std::size_t>(h) * S + s) * A + a;
        const double ind1 = pi_e.at(h, s, a) == 0.0 ? 1.0 : 0.0;
        const double ind2 = pi_e2.at(h, s, a) == 0.0 ? 1.0 : 0.0;
        double dpv = 0.0, p2v = 0.0;
        for (int sp = 0; sp < S; ++sp) {
          const double v = dec.v_term[static_cast<std::size_t>(h + 1) * S + sp];
          dpv += (m.at(h, s, a, sp) - m2.at(h, s, a, sp)) * v;
          p2v += m2.at(h, s, a, sp) * v;
        }
        out.eps_table[i] = dec.a_term[i] * (ind1 - ind2) + dpv;
        out.r_tilde[i] =
            -dec.a_term[i] * ind2 + dec.v_term[static_cast<std::size_t>(h) * S + s] - p2v;
      }
  for (double e : out.eps_table) out.epsilon = std::max(out.epsilon, std::abs(e));

  out.r_hat.S = S;
  out.r_hat.A = A;
  out.r_hat.H = H;
  out.r_hat.r.resize(out.r_tilde.size());
  for (std::size_t i = 0; i < out.r_tilde.size(); ++i)
    out.r_hat.r[i] = out.r_tilde[i] / (1.0 + out.epsilon);
  return out;
}

}  // namespace irlab
