#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lns/model.hpp"
#include "lns/policies.hpp"
#include "lns/rng.hpp"
#include "lns/solver.hpp"

namespace lns {

// Adaptive fixing-ratio manager. The ratio shrinks geometrically when the
// sub-problem is solved or infeasible (too small a neighbourhood is
// pointless) and grows when the solver times out without improvement.
struct NeighbourhoodSizeManager {
  double ratio = 0.2;
  double scale = 1.5;  // lambda_r
  double r_min = 0.01;
  double r_max = 0.9;
};

// Applies the update rule in place and returns the new ratio:
//   Optimal/Infeasible            -> r / (1 + lambda), floored at r_min
//   Feasible/NoSolution limit and
//   no improvement                -> r * (1 + lambda), capped at r_max
//   anything else                 -> unchanged
double update_ratio(NeighbourhoodSizeManager& manager, SolveStatus status, bool improved);

struct IterationRecord {
  int index = 0;
  double ratio_used = 0.0;
  std::string policy_used;
  bool fallback = false;
  SolveStatus status = SolveStatus::Error;
  double objective_after = 0.0;
  double wall_time = 0.0;
};

struct SearchState {
  Solution incumbent;
  double best_objective = 0.0;
  int iteration = 0;
  double elapsed = 0.0;
  int non_improving = 0;
  std::vector<IterationRecord> history;
  Rng rng;

  explicit SearchState(uint64_t seed) : rng(seed) {}
};

struct EngineConfig {
  double total_budget = 600.0;
  double iter_budget = 20.0;
  double initial_ratio = 0.2;
  double ratio_scale = 1.5;  // lambda_r
  double r_min = 0.01;
  double r_max = 0.9;
  int fallback_after = 2;
  // desk-scale determinism knobs (0 = unlimited)
  int max_iterations = 0;
  long solve_node_limit = 0;

  void validate() const;  // throws std::invalid_argument
};

// Run-level inputs consumed by the destroy policies.
struct PolicyInputs {
  std::optional<Solution> root_relaxation;
  std::vector<Solution> pool;  // feasible solutions; the engine appends improvements
  std::optional<std::vector<int>> predictions;    // per binary index, 0/1
  std::optional<std::vector<int>> oracle_labels;  // per binary index, 0/1
  double lp_time_limit = 5.0;
};

struct RunOutput {
  Solution best;
  std::vector<IterationRecord> history;
  // incumbent improvements: (elapsed seconds, objective); first entry is x0
  std::vector<std::pair<double, double>> improvements;
};

// greedy acceptance: candidate replaces current only when strictly better
Solution update_solution(const Solution& current, const std::optional<Solution>& candidate);

// true once the non-improving counter reaches the threshold
bool should_fallback(const SearchState& state, int threshold);

// Destroy/repair loop: ratio -> cut (policy, or random fallback) ->
// sub-problem solve with the incumbent as warm start -> state update ->
// greedy incumbent update. Throws std::invalid_argument when x0 is not
// feasible for the problem.
RunOutput run(const MipModel& problem, const Solution& x0, NeighbourhoodSizeManager manager,
              DestroyPolicy& policy, SolverBackend& backend, const EngineConfig& cfg,
              const PolicyInputs& inputs, uint64_t seed);

// JSON-lines serialization of the iteration history (one record per line)
std::string history_to_jsonl(const std::vector<IterationRecord>& history);

}  // namespace lns
