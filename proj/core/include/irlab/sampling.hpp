#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "irlab/mdp.hpp"
#include "irlab/rng.hpp"

namespace irlab {

// Count tables for generative-model samples. Only counts are stored; raw
// tuples can be retained on request for debugging.
struct SampleDataset {
  int S = 0, A = 0, H = 0;
  long long total = 0;
  std::vector<long long> n_sas;  // [((h*S+s)*A+a)*S+s']
  std::vector<long long> n_sa;   // [(h*S+s)*A+a]
  std::vector<long long> n_s;    // [h*S+s]
  std::vector<long long> n_e;    // [(h*S+s)*A+a], expert action counts
  bool keep_tuples = false;
  struct Tuple {
    int s, a, h, sp, ae;
  };
  std::vector<Tuple> tuples;

  SampleDataset() = default;
  SampleDataset(int S_, int A_, int H_, bool keep = false);

  void add(int s, int a, int h, int sp, int ae);
  // Count-wise sum; associative and order-independent.
  void merge(const SampleDataset& other);

  long long count_sas(int h, int s, int a, int sp) const {
    return n_sas[(((static_cast<std::size_t>(h) * S + s) * A + a) * S) + sp];
  }
  long long count_sa(int h, int s, int a) const {
    return n_sa[(static_cast<std::size_t>(h) * S + s) * A + a];
  }
  long long count_s(int h, int s) const {
    return n_s[static_cast<std::size_t>(h) * S + s];
  }
  long long count_e(int h, int s, int a) const {
    return n_e[(static_cast<std::size_t>(h) * S + s) * A + a];
  }

  // Two sections: transition counts (h,s,a,s',count) then expert-action
  // counts (h,s,a_e,count); zero rows omitted, stages 1-based.
  std::string to_csv() const;
};

// Seeded generative model over a ground-truth problem. One oracle per worker;
// not safe to share across threads.
class GenerativeOracle {
 public:
  GenerativeOracle(MdpR m, PolicyTable pi_e, std::uint64_t seed);

  // Draw s' ~ p_h(.|s,a) and a^E ~ pi^E_h(.|s); increments the query counter.
  std::pair<int, int> query(int s, int a, int h);

  const MdpR& model() const { return m_; }
  const PolicyTable& expert() const { return pi_; }
  long long queries() const { return queries_; }
  std::uint64_t seed() const { return seed_; }

 private:
  MdpR m_;
  PolicyTable pi_;
  SplitMix64 rng_;
  std::uint64_t seed_;
  long long queries_ = 0;
};

// Maximum-likelihood empirical problem; unvisited rows fall back to uniform.
// The homogeneous flag merges counts across stages before normalizing.
std::pair<MdpR, PolicyTable> build_empirical(const SampleDataset& d, int S, int A,
                                             int H, bool homogeneous);

}  // namespace irlab
