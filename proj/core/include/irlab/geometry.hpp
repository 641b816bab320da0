#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "irlab/mdp.hpp"

namespace irlab {

// Feasible reward set as an explicit linear system over the flattened reward
// vector x (index (h*S+s)*A+a). Advantage rows are the exact linear
// functionals x -> A_h^{pi}(s,a;x); box rows are always present.
struct RewardPolytope {
  int n = 0;  // ambient dimension S*A*H
  int S = 0, A = 0, H = 0;
  Restriction restriction = Restriction::none;
  std::vector<std::vector<double>> rows;  // a_i . x <= rhs_i
  std::vector<double> rhs;
  std::vector<std::vector<double>> eq_rows;  // c_i . x == eq_rhs_i
  std::vector<double> eq_rhs;

  std::string to_json() const;
};

// Margins beta (one per stage) are read from `beta` when restriction ==
// beta_margin; beta-margin requires a deterministic expert.
RewardPolytope build_polytope(const MdpR& m, const PolicyTable& pi_e,
                              Restriction restriction,
                              const std::vector<double>& beta = {});

bool is_empty(const RewardPolytope& p);

// Membership up to tol in every inequality and equality row.
bool contains(const RewardPolytope& p, const std::vector<double>& x, double tol = 1e-9);

struct DistanceResult {
  double distance = 0.0;  // +inf when the set is empty
  std::vector<double> nearest;
  bool set_empty = false;
};

// L_inf projection distance: min t s.t. -t <= x_i - y_i <= t, y in p.
DistanceResult point_to_set_distance(const std::vector<double>& x, const RewardPolytope& p);

// Raised when exact enumeration is refused (dimension or basis-candidate cap);
// callers should fall back to the randomized Hausdorff method.
struct EnumerationCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultDimCap = 12;
inline constexpr long long kBasisCandidateCap = 2'000'000;

// All extreme points (ambient coordinates), deduplicated within 1e-9.
// Equality rows are eliminated by substitution first; the effective dimension
// after elimination must be <= dim_cap.
std::vector<std::vector<double>> enumerate_vertices(const RewardPolytope& p,
                                                    int dim_cap = kDefaultDimCap);

enum class HausdorffMethod { exact, randomized };

struct HausdorffResult {
  double value = 0.0;  // +inf when exactly one set is empty
  double directed_pq = 0.0;
  double directed_qp = 0.0;
  std::vector<double> witness_pq;  // point of p attaining directed_pq
  std::vector<double> witness_qp;
  bool exact = false;  // true only when both directions used vertex enumeration
  bool p_empty = false;
  bool q_empty = false;

  std::string to_json() const;
};

// Exact: sup_x dist(x, other) is attained at a vertex (the inner distance is
// convex in x), so both directions scan vertex lists. Randomized: maximizes
// over `samples` vertices found by random-objective LPs; lower bound only.
HausdorffResult hausdorff(const RewardPolytope& p, const RewardPolytope& q,
                          HausdorffMethod method, int samples = 64,
                          std::uint64_t seed = 0, int dim_cap = kDefaultDimCap);

}  // namespace irlab
