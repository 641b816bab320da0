#pragma once

#include <stdexcept>
#include <vector>

namespace irlab {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;
  double objective = 0.0;
};

// Raised when the solver cannot certify a result (pivot breakdown, iteration
// cap). Callers surface it as a numerical failure, never as a silent answer.
struct LpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Minimize c.x subject to A x <= b over free x.
// Dense two-phase tableau simplex; Dantzig pricing with a Bland fallback for
// anti-cycling. Deterministic. Intended for small desk-scale problems.
LpResult lp_minimize(const std::vector<std::vector<double>>& A,
                     const std::vector<double>& b, const std::vector<double>& c,
                     int max_iterations = 50000);

}  // namespace irlab
