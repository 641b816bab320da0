#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "irlab/mdp.hpp"
#include "irlab/rng.hpp"

// Hand-built copies of the two-figure counterexample family, used by the unit
// tests independently of the instance generators.
namespace testutil {

using irlab::MdpR;
using irlab::PolicyTable;
using irlab::RewardTable;

// Three states (0: start, 1: plus, 2: minus), two actions, arbitrary horizon.
// From the start state, action 0 reaches plus with probability q1 and minus
// otherwise; action 1 reaches both with probability 1/2. Plus and minus absorb.
inline MdpR branch_mdp(int H, double q1) {
  MdpR m;
  m.S = 3;
  m.A = 2;
  m.H = H;
  m.homogeneous = true;
  m.p.assign(static_cast<std::size_t>(H) * 3 * 2 * 3, 0.0);
  for (int h = 0; h < H; ++h) {
    m.at(h, 0, 0, 1) = q1;
    m.at(h, 0, 0, 2) = 1.0 - q1;
    m.at(h, 0, 1, 1) = 0.5;
    m.at(h, 0, 1, 2) = 0.5;
    for (int a = 0; a < 2; ++a) {
      m.at(h, 1, a, 1) = 1.0;
      m.at(h, 2, a, 2) = 1.0;
    }
  }
  return m;
}

inline PolicyTable deterministic_policy(int S, int A, int H, int action) {
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

inline RewardTable zero_reward(int S, int A, int H) {
  RewardTable r;
  r.S = S;
  r.A = A;
  r.H = H;
  r.r.assign(static_cast<std::size_t>(H) * S * A, 0.0);
  return r;
}

// Two states (0: start, 1: sink), two actions. Action 0 from the start state
// stays with probability q1 and moves to the sink otherwise; action 1 moves
// with probability 1/2. The sink absorbs.
inline MdpR loop_mdp(int H, double q1) {
  MdpR m;
  m.S = 2;
  m.A = 2;
  m.H = H;
  m.homogeneous = true;
  m.p.assign(static_cast<std::size_t>(H) * 2 * 2 * 2, 0.0);
  for (int h = 0; h < H; ++h) {
    m.at(h, 0, 0, 0) = q1;
    m.at(h, 0, 0, 1) = 1.0 - q1;
    m.at(h, 0, 1, 0) = 0.5;
    m.at(h, 0, 1, 1) = 0.5;
    for (int a = 0; a < 2; ++a) m.at(h, 1, a, 1) = 1.0;
  }
  return m;
}

// Small random instance for property checks.
inline MdpR random_mdp(int S, int A, int H, irlab::SplitMix64& rng) {
  MdpR m;
  m.S = S;
  m.A = A;
  m.H = H;
  m.p.assign(static_cast<std::size_t>(H) * S * A * S, 0.0);
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a) {
        double total = 0.0;
        std::vector<double> w(S);
        for (int sp = 0; sp < S; ++sp) {
          w[sp] = -std::log(1.0 - rng.uniform());
          total += w[sp];
        }
        for (int sp = 0; sp < S; ++sp) m.at(h, s, a, sp) = w[sp] / total;
      }
  return m;
}

inline PolicyTable random_policy(int S, int A, int H, irlab::SplitMix64& rng) {
  PolicyTable pi;
  pi.S = S;
  pi.A = A;
  pi.H = H;
  pi.pi.assign(static_cast<std::size_t>(H) * S * A, 0.0);
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s) {
      double total = 0.0;
      for (int a = 0; a < A; ++a) {
        pi.at(h, s, a) = rng.uniform() + 1e-3;
        total += pi.at(h, s, a);
      }
      for (int a = 0; a < A; ++a) pi.at(h, s, a) /= total;
    }
  return pi;
}

inline PolicyTable random_deterministic_policy(int S, int A, int H,
                                               irlab::SplitMix64& rng) {
  PolicyTable pi;
  pi.S = S;
  pi.A = A;
  pi.H = H;
  pi.pi.assign(static_cast<std::size_t>(H) * S * A, 0.0);
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s)
      pi.at(h, s, static_cast<int>(rng.below(A))) = 1.0;
  return pi;
}

inline RewardTable random_reward(int S, int A, int H, irlab::SplitMix64& rng) {
  RewardTable r = zero_reward(S, A, H);
  for (double& v : r.r) v = rng.uniform(-1.0, 1.0);
  return r;
}

}  // namespace testutil
