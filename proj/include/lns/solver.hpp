#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "lns/model.hpp"

namespace lns {

enum class SolveStatus { Optimal, FeasibleLimit, Infeasible, NoSolutionLimit, Unbounded, Error };

std::string to_string(SolveStatus s);

struct SolveOutcome {
  SolveStatus status = SolveStatus::Error;
  std::optional<Solution> best;      // Feasible when present
  double bound = -kInfinity;         // dual bound (minimization)
  std::vector<Solution> observed;    // incumbents + node relaxations, by time
  double runtime = 0.0;
};

struct BackendConfig {
  double time_limit = 600.0;
  uint64_t seed = 0;
  double integrality_tol = 1e-6;
  double lp_tol = 1e-7;
  // desk-scale determinism knob: stop branch-and-bound after this many
  // explored nodes (0 = no limit); treated like a time limit status-wise
  long node_limit = 0;
};

using SolutionObserver = std::function<void(const Solution&)>;

// Uniform solving contract. A backend handle serves one solve at a time;
// distinct handles may run concurrently on distinct models.
//
// Adapter contract for wiring an external MIP solver:
//  - honor cfg.time_limit and cfg.seed;
//  - install the warm start, when given, as a solution hint;
//  - forward every new incumbent (kind Feasible) and every node relaxation
//    solution (kind Fractional) to the observer, stamped with the seconds
//    elapsed since the solve started;
//  - map the solver's termination into SolveStatus and never throw past
//    this interface (return Error instead).
class SolverBackend {
 public:
  virtual ~SolverBackend() = default;

  virtual SolveOutcome solve_mip(const MipModel& model, const std::optional<Solution>& warm_start,
                                 const BackendConfig& cfg, const SolutionObserver& observer = {}) = 0;

  virtual SolveOutcome solve_lp(const MipModel& model, const BackendConfig& cfg) = 0;
};

// Desk-scale reference backend: bounded-variable primal simplex for LPs and
// a best-bound branch-and-bound (most-fractional branching, depth-first
// tie-break) for MIPs. Deterministic for a fixed config.
class ReferenceSolver : public SolverBackend {
 public:
  SolveOutcome solve_mip(const MipModel& model, const std::optional<Solution>& warm_start,
                         const BackendConfig& cfg, const SolutionObserver& observer = {}) override;

  SolveOutcome solve_lp(const MipModel& model, const BackendConfig& cfg) override;
};

// Exact optimum of a pure-binary model (W = Q = empty, |B| <= 20) by
// exhaustive enumeration with direct constraint checking. Throws
// std::invalid_argument when the precondition fails.
SolveOutcome enumerate_oracle(const MipModel& model);

}  // namespace lns
