#pragma once

#include <stdexcept>
#include <vector>

#include "lns/model.hpp"
#include "lns/rng.hpp"
#include "lns/solver.hpp"

namespace lns {

// Raised when probing cannot produce an initial feasible solution; the
// instance is dropped by the harness.
class NoInitialSolution : public std::runtime_error {
 public:
  explicit NoInitialSolution(const std::string& what) : std::runtime_error(what) {}
};

struct ProbeRecord {
  std::vector<Solution> feasible;    // ascending objective
  std::vector<Solution> fractional;  // node relaxations in capture order
  double probe_time = 0.0;

  // best feasible solution; the LNS starting point
  const Solution& initial_solution() const { return feasible.front(); }
};

// Short solver run capturing every incumbent and node relaxation. Throws
// NoInitialSolution when the budget yields no feasible solution.
ProbeRecord probe(const MipModel& problem, SolverBackend& backend, double t_probe,
                  uint64_t seed = 0, long node_limit = 0);

struct SplSample {
  Solution solution;  // fractional LP point
  double ratio_used = 0.0;
  double k_lb = 0.0;  // radius of the cut that produced it
  SolveStatus status = SolveStatus::Error;
};

struct SampleSet {
  std::vector<SplSample> samples;
  double k_prime = 0.0;  // L1 distance between x0 and the root relaxation
};

// Sampling loop: draw r ~ U[0,1], add a local-branching ball of radius
// max(1, floor((1-r) k')) around x0 to the relaxation, solve with a short
// limit, and keep the LP point when the solve finished or timed out with a
// feasible iterate. k' comes from one root relaxation solved up front.
// Returns an empty set when the root relaxation is infeasible.
SampleSet spl(const MipModel& problem, const Solution& x0, SolverBackend& backend,
              double t_total, double per_solve, Rng& rng, int max_samples = 0);

}  // namespace lns
