#include "lns/engine.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace lns {

namespace {
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}
}  // namespace

void EngineConfig::validate() const {
  if (!(r_min > 0.0 && r_min <= initial_ratio && initial_ratio <= r_max && r_max < 1.0))
    throw std::invalid_argument("engine config requires 0 < r_min <= initial_ratio <= r_max < 1");
  if (total_budget < 0.0 || iter_budget <= 0.0)
    throw std::invalid_argument("engine budgets must be non-negative");
  if (fallback_after < 1) throw std::invalid_argument("fallback_after must be >= 1");
}

double update_ratio(NeighbourhoodSizeManager& manager, SolveStatus status, bool improved) {
  switch (status) {
    case SolveStatus::Optimal:
    case SolveStatus::Infeasible:
      manager.ratio = std::max(manager.ratio / (1.0 + manager.scale), manager.r_min);
      break;
    case SolveStatus::FeasibleLimit:
    case SolveStatus::NoSolutionLimit:
      if (!improved)
        manager.ratio = std::min(manager.ratio * (1.0 + manager.scale), manager.r_max);
      break;
    case SolveStatus::Unbounded:
    case SolveStatus::Error:
      break;
  }
  return manager.ratio;
}

Solution update_solution(const Solution& current, const std::optional<Solution>& candidate) {
  if (candidate && candidate->objective < current.objective - kImprovementTol) return *candidate;
  return current;
}

bool should_fallback(const SearchState& state, int threshold) {
  return state.non_improving >= threshold;
}

RunOutput run(const MipModel& problem, const Solution& x0, NeighbourhoodSizeManager manager,
              DestroyPolicy& policy, SolverBackend& backend, const EngineConfig& cfg,
              const PolicyInputs& inputs, uint64_t seed) {
  cfg.validate();
  if (!problem.is_feasible(x0.values)) throw std::invalid_argument("x0 is not feasible");

  const auto start = Clock::now();
  SearchState state(seed);
  state.incumbent = x0;
  state.incumbent.kind = SolutionKind::Feasible;
  state.best_objective = x0.objective;

  std::vector<Solution> pool = inputs.pool;
  if (pool.empty()) pool.push_back(state.incumbent);

  RunOutput out;
  out.improvements.emplace_back(0.0, state.best_objective);

  const std::vector<int> binaries = problem.binary_indices();
  RandomPolicy random_fallback;

  while (true) {
    state.elapsed = seconds_since(start);
    if (state.elapsed >= cfg.total_budget) break;
    if (cfg.max_iterations > 0 && state.iteration >= cfg.max_iterations) break;

    const double iter_started = state.elapsed;
    const double ratio = manager.ratio;
    const auto [k_d, k_f] = fixing_counts(static_cast<int>(binaries.size()), ratio);
    (void)k_d;

    PolicyContext ctx;
    ctx.model = &problem;
    ctx.incumbent = &state.incumbent;
    ctx.root_relaxation = inputs.root_relaxation ? &*inputs.root_relaxation : nullptr;
    ctx.pool = &pool;
    ctx.predictions = inputs.predictions ? &*inputs.predictions : nullptr;
    ctx.oracle_labels = inputs.oracle_labels ? &*inputs.oracle_labels : nullptr;
    ctx.rng = &state.rng;
    ctx.lp_backend = &backend;
    ctx.lp_time_limit = inputs.lp_time_limit;
    ctx.binaries = binaries;

    bool fallback = should_fallback(state, cfg.fallback_after);
    std::optional<NeighbourhoodCut> cut;
    if (!fallback) cut = policy.build(ctx, ratio, k_f);
    if (!cut) {
      // policy could not produce a neighbourhood: random takes this round
      fallback = true;
      cut = random_fallback.build(ctx, ratio, k_f);
    }

    const MipModel sub = apply_cut(problem, *cut);
    BackendConfig solve_cfg;
    solve_cfg.time_limit = std::min(cfg.iter_budget, cfg.total_budget - iter_started);
    solve_cfg.seed = mix_seed(seed, static_cast<uint64_t>(state.iteration));
    solve_cfg.node_limit = cfg.solve_node_limit;
    SolveOutcome outcome = backend.solve_mip(sub, state.incumbent, solve_cfg);

    const bool skipped = outcome.status == SolveStatus::Error;
    const bool improved = !skipped && outcome.best &&
                          outcome.best->objective < state.best_objective - kImprovementTol;

    if (!skipped) {
      update_ratio(manager, outcome.status, improved);
      state.non_improving = (improved || fallback) ? 0 : state.non_improving + 1;
      state.incumbent = update_solution(state.incumbent, outcome.best);
      if (improved) {
        state.best_objective = state.incumbent.objective;
        state.incumbent.kind = SolutionKind::Feasible;
        pool.push_back(state.incumbent);
        out.improvements.emplace_back(seconds_since(start), state.best_objective);
      }
    }

    IterationRecord rec;
    rec.index = state.iteration;
    rec.ratio_used = ratio;
    rec.policy_used = std::string(fallback ? random_fallback.name() : policy.name());
    rec.fallback = fallback;
    rec.status = outcome.status;
    rec.objective_after = state.best_objective;
    rec.wall_time = seconds_since(start) - iter_started;
    state.history.push_back(std::move(rec));
    ++state.iteration;
  }

  out.best = state.incumbent;
  out.history = std::move(state.history);
  return out;
}

std::string history_to_jsonl(const std::vector<IterationRecord>& history) {
  std::ostringstream out;
  for (const IterationRecord& r : history) {
    nlohmann::json j{{"index", r.index},
                     {"ratio_used", r.ratio_used},
                     {"policy_used", r.policy_used},
                     {"fallback", r.fallback},
                     {"status", to_string(r.status)},
                     {"objective_after", r.objective_after},
                     {"wall_time", r.wall_time}};
    out << j.dump() << "\n";
  }
  return out.str();
}

}  // namespace lns
