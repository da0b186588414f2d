#include "lns/collect.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace lns {

namespace {
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}
}  // namespace

ProbeRecord probe(const MipModel& problem, SolverBackend& backend, double t_probe, uint64_t seed,
                  long node_limit) {
  const auto start = Clock::now();
  ProbeRecord rec;
  if (t_probe > 0.0) {
    BackendConfig cfg;
    cfg.time_limit = t_probe;
    cfg.seed = seed;
    cfg.node_limit = node_limit;
    backend.solve_mip(problem, std::nullopt, cfg, [&rec](const Solution& s) {
      if (s.kind == SolutionKind::Feasible)
        rec.feasible.push_back(s);
      else
        rec.fractional.push_back(s);
    });
  }
  rec.probe_time = seconds_since(start);
  std::stable_sort(rec.feasible.begin(), rec.feasible.end(),
                   [](const Solution& a, const Solution& b) { return a.objective < b.objective; });
  if (rec.feasible.empty())
    throw NoInitialSolution("probe found no feasible solution for " + problem.name);
  return rec;
}

SampleSet spl(const MipModel& problem, const Solution& x0, SolverBackend& backend, double t_total,
              double per_solve, Rng& rng, int max_samples) {
  const auto start = Clock::now();
  SampleSet set;

  const MipModel relaxed = relax(problem);
  BackendConfig root_cfg;
  root_cfg.time_limit = std::max(per_solve, 1.0);
  const SolveOutcome root = backend.solve_lp(relaxed, root_cfg);
  if (root.status != SolveStatus::Optimal || !root.best) return set;  // empty, with a warning upstream

  const std::vector<int> binaries = problem.binary_indices();
  set.k_prime = l1_distance(x0, *root.best, binaries);

  while (seconds_since(start) < t_total) {
    if (max_samples > 0 && static_cast<int>(set.samples.size()) >= max_samples) break;
    const double r = rng.uniform01();
    const double k_lb = std::max(1.0, std::floor((1.0 - r) * set.k_prime));
    // the cut goes on the original problem (it spans the binary set), the
    // relaxation happens afterwards
    const MipModel cut_lp = relax(apply_cut(problem, NeighbourhoodCut::soft_lb(x0, k_lb)));

    BackendConfig cfg;
    cfg.time_limit = per_solve;
    const SolveOutcome lp = backend.solve_lp(cut_lp, cfg);
    if ((lp.status == SolveStatus::Optimal || lp.status == SolveStatus::FeasibleLimit) && lp.best) {
      SplSample sample;
      sample.solution = *lp.best;
      sample.ratio_used = r;
      sample.k_lb = k_lb;
      sample.status = lp.status;
      set.samples.push_back(std::move(sample));
    }
  }
  return set;
}

}  // namespace lns
