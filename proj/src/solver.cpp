#include "lns/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "lns/simplex.hpp"

namespace lns {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Clock::time_point deadline_for(Clock::time_point start, double budget) {
  if (budget >= 1e9) return Clock::time_point::max();
  return start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(budget));
}

struct BbNode {
  std::vector<double> lower, upper;
  double bound = -kInfinity;
  int depth = 0;
  uint64_t seq = 0;
};

// best bound first; ties broken depth-first, then most recently created
struct NodeOrder {
  bool operator()(const BbNode& a, const BbNode& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.seq < b.seq;
  }
};

}  // namespace

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::FeasibleLimit: return "feasible_limit";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::NoSolutionLimit: return "no_solution_limit";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::Error: return "error";
  }
  return "error";
}

SolveOutcome ReferenceSolver::solve_lp(const MipModel& model, const BackendConfig& cfg) {
  const auto start = Clock::now();
  SolveOutcome out;
  try {
    BoundedSimplex simplex(model, cfg.lp_tol);
    SimplexResult res = simplex.solve(deadline_for(start, cfg.time_limit));
    out.status = res.status;
    if (res.status == SolveStatus::Optimal || res.status == SolveStatus::FeasibleLimit) {
      const SolutionKind kind = model.is_feasible(res.x, cfg.integrality_tol)
                                    ? SolutionKind::Feasible
                                    : SolutionKind::Fractional;
      Solution s;
      s.values = std::move(res.x);
      s.objective = res.objective;
      s.kind = kind;
      s.time_offset = seconds_since(start);
      out.best = std::move(s);
      out.bound = res.status == SolveStatus::Optimal ? res.objective : -kInfinity;
    } else if (res.status == SolveStatus::Infeasible) {
      out.bound = kInfinity;
    }
  } catch (const std::exception&) {
    out.status = SolveStatus::Error;
  }
  out.runtime = seconds_since(start);
  return out;
}

SolveOutcome ReferenceSolver::solve_mip(const MipModel& model,
                                        const std::optional<Solution>& warm_start,
                                        const BackendConfig& cfg,
                                        const SolutionObserver& observer) {
  const auto start = Clock::now();
  const auto deadline = deadline_for(start, cfg.time_limit);
  SolveOutcome out;

  if (warm_start && static_cast<int>(warm_start->values.size()) != model.num_vars())
    throw std::invalid_argument("warm start length does not match variable count");

  try {
    std::optional<Solution> incumbent;
    auto emit = [&](const Solution& s) {
      out.observed.push_back(s);
      if (observer) observer(s);
    };

    // integral variables of any kind participate in branching
    std::vector<int> branch_vars;
    for (int i = 0; i < model.num_vars(); ++i)
      if (model.variables[i].kind != VarKind::Continuous) branch_vars.push_back(i);

    auto accept_candidate = [&](const std::vector<double>& raw) {
      std::vector<double> rounded = raw;
      for (int i : branch_vars) rounded[i] = std::round(rounded[i]);
      if (!model.is_feasible(rounded, cfg.integrality_tol)) return;
      const double obj = model.objective_value(rounded);
      if (!incumbent || obj < incumbent->objective - kImprovementTol) {
        Solution s;
        s.values = std::move(rounded);
        s.objective = obj;
        s.kind = SolutionKind::Feasible;
        s.time_offset = seconds_since(start);
        incumbent = s;
        emit(*incumbent);
      }
    };

    if (warm_start) accept_candidate(warm_start->values);

    std::priority_queue<BbNode, std::vector<BbNode>, NodeOrder> open;
    uint64_t seq = 0;
    {
      BbNode root;
      root.lower.resize(model.num_vars());
      root.upper.resize(model.num_vars());
      for (int i = 0; i < model.num_vars(); ++i) {
        root.lower[i] = model.variables[i].lower;
        root.upper[i] = model.variables[i].upper;
      }
      root.bound = -kInfinity;
      root.seq = seq++;
      open.push(std::move(root));
    }

    MipModel node_lp = relax(model);
    bool hit_limit = false;
    bool unbounded = false;
    long nodes_explored = 0;

    while (!open.empty()) {
      if (Clock::now() >= deadline || (cfg.node_limit > 0 && nodes_explored >= cfg.node_limit)) {
        hit_limit = true;
        break;
      }
      BbNode node = open.top();
      open.pop();
      if (incumbent && node.bound >= incumbent->objective - kImprovementTol) continue;
      ++nodes_explored;

      for (int i = 0; i < model.num_vars(); ++i) {
        node_lp.variables[i].lower = node.lower[i];
        node_lp.variables[i].upper = node.upper[i];
      }
      BoundedSimplex simplex(node_lp, cfg.lp_tol);
      SimplexResult lp = simplex.solve(deadline);
      if (lp.status == SolveStatus::NoSolutionLimit || lp.status == SolveStatus::FeasibleLimit) {
        open.push(std::move(node));  // keep its bound for the dual bound
        hit_limit = true;
        break;
      }
      if (lp.status == SolveStatus::Infeasible) continue;
      if (lp.status == SolveStatus::Unbounded) {
        unbounded = true;
        break;
      }
      if (lp.status != SolveStatus::Optimal) {
        out.status = SolveStatus::Error;
        out.runtime = seconds_since(start);
        return out;
      }

      // branching variable: most fractional, lowest index on ties
      int branch = -1;
      double best_frac = cfg.integrality_tol;
      for (int i : branch_vars) {
        const double f = lp.x[i] - std::floor(lp.x[i]);
        const double dist = std::min(f, 1.0 - f);
        if (dist > best_frac + 1e-12) {
          best_frac = dist;
          branch = i;
        }
      }

      if (branch < 0) {
        accept_candidate(lp.x);
        continue;
      }

      // fractional node relaxation goes to the observer
      Solution frac;
      frac.values = lp.x;
      frac.objective = lp.objective;
      frac.kind = SolutionKind::Fractional;
      frac.time_offset = seconds_since(start);
      emit(frac);

      if (incumbent && lp.objective >= incumbent->objective - kImprovementTol) continue;

      BbNode down;
      down.lower = node.lower;
      down.upper = node.upper;
      down.upper[branch] = std::floor(lp.x[branch]);
      down.bound = lp.objective;
      down.depth = node.depth + 1;
      down.seq = seq++;
      BbNode up;
      up.lower = node.lower;
      up.upper = node.upper;
      up.lower[branch] = std::ceil(lp.x[branch]);
      up.bound = lp.objective;
      up.depth = node.depth + 1;
      up.seq = seq++;
      open.push(std::move(down));
      open.push(std::move(up));
    }

    if (unbounded) {
      out.status = SolveStatus::Unbounded;
      out.bound = -kInfinity;
    } else if (hit_limit) {
      out.status = incumbent ? SolveStatus::FeasibleLimit : SolveStatus::NoSolutionLimit;
      // valid global dual bound: smallest bound among open nodes, clamped by
      // the incumbent when the tree is effectively exhausted
      double b = open.empty() ? (incumbent ? incumbent->objective : kInfinity) : open.top().bound;
      if (incumbent) b = std::min(b, incumbent->objective);
      out.bound = b;
    } else {
      out.status = incumbent ? SolveStatus::Optimal : SolveStatus::Infeasible;
      out.bound = incumbent ? incumbent->objective : kInfinity;
    }
    out.best = incumbent;
  } catch (const std::exception&) {
    out.status = SolveStatus::Error;
  }
  out.runtime = seconds_since(start);
  return out;
}

SolveOutcome enumerate_oracle(const MipModel& model) {
  const auto start = Clock::now();
  const std::vector<int> binaries = model.binary_indices();
  const int nb = static_cast<int>(binaries.size());
  if (nb != model.num_vars())
    throw std::invalid_argument("enumerate_oracle requires a pure-binary model");
  if (nb > 20) throw std::invalid_argument("enumerate_oracle limited to 20 binaries");

  SolveOutcome out;
  std::vector<double> x(model.num_vars(), 0.0);
  std::optional<std::vector<double>> best;
  double best_obj = kInfinity;

  const uint64_t total = nb == 0 ? 1 : (1ULL << nb);
  for (uint64_t mask = 0; mask < total; ++mask) {
    for (int k = 0; k < nb; ++k) x[binaries[k]] = (mask >> k) & 1ULL ? 1.0 : 0.0;
    bool ok = true;
    for (const LinearConstraint& c : model.constraints) {
      // 1e-9 absorbs dot-product dust while staying exact for integer data
      if (!c.satisfied(x, 1e-9)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    const double obj = model.objective_value(x);
    if (!best || obj < best_obj) {
      best = x;
      best_obj = obj;
    }
  }

  if (best) {
    Solution s;
    s.values = std::move(*best);
    s.objective = best_obj;
    s.kind = SolutionKind::Feasible;
    s.time_offset = seconds_since(start);
    out.best = std::move(s);
    out.status = SolveStatus::Optimal;
    out.bound = best_obj;
  } else {
    out.status = SolveStatus::Infeasible;
    out.bound = kInfinity;
  }
  out.runtime = seconds_since(start);
  return out;
}

}  // namespace lns
