#pragma once

#include <chrono>
#include <vector>

#include "lns/model.hpp"
#include "lns/solver.hpp"

namespace lns {

struct SimplexResult {
  SolveStatus status = SolveStatus::Error;
  std::vector<double> x;  // structural values, valid for Optimal/FeasibleLimit
  double objective = 0.0;
  long iterations = 0;
};

// Dense bounded-variable primal simplex, two-phase, Bland's rule for
// anti-cycling. Integrality information on the model is ignored; bounds are
// honored exactly (nonbasic variables sit on a bound).
//
// Status mapping: Optimal / Infeasible / Unbounded as proved; a deadline hit
// in phase II returns FeasibleLimit with the current (primal feasible)
// iterate, in phase I it returns NoSolutionLimit.
class BoundedSimplex {
 public:
  explicit BoundedSimplex(const MipModel& model, double lp_tol = 1e-7);

  SimplexResult solve(std::chrono::steady_clock::time_point deadline);

 private:
  enum class VarState { Basic, AtLower, AtUpper, FreeNonbasic };

  int n_ = 0;      // structurals
  int m_ = 0;      // rows
  int n_tot_ = 0;  // structurals + slacks + artificials
  double lp_tol_;

  std::vector<std::vector<double>> cols_;  // column-major, m_ entries each
  std::vector<double> cost_;               // phase II objective
  std::vector<double> lower_, upper_;
  std::vector<double> rhs_;

  std::vector<int> basis_;        // basic variable per row
  std::vector<VarState> state_;
  std::vector<double> value_;     // nonbasic values (basic entries refreshed)
  std::vector<double> binv_;      // m_ x m_, row-major
  long pivots_since_refactor_ = 0;

  void compute_basic_values();
  std::vector<double> dual_values(const std::vector<double>& cost) const;
  double reduced_cost(int j, const std::vector<double>& y, const std::vector<double>& cost) const;
  std::vector<double> ftran(const std::vector<double>& col) const;
  bool refactorize();
  void pivot(int leave_row, int entering, const std::vector<double>& w, bool leave_to_upper);

  // returns Optimal when the phase objective is minimized
  SolveStatus run_phase(const std::vector<double>& cost, bool phase_one,
                        std::chrono::steady_clock::time_point deadline, long max_iters,
                        long& iterations);
};

}  // namespace lns
