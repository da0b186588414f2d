#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace lns {

struct TrajectoryEvent {
  double time = 0.0;       // seconds since run start
  double objective = 0.0;  // incumbent objective at that time
};

// Incumbent improvements of one run; times strictly increasing, objectives
// strictly decreasing.
struct Trajectory {
  std::vector<TrajectoryEvent> events;
  double horizon = 0.0;
};

// 100 * |obj - best| / max(|best|, 1e-10), capped at 100
double primal_gap(double obj, double best_known);
// convention when a run produced no solution
inline constexpr double kNoSolutionGap = 100.0;

// time-normalized area under the primal-gap step curve; the gap is 100
// before the first event
double primal_integral(const Trajectory& traj, double best_known);

// exp(mean(ln(v + 1))) - 1
double shifted_geomean(std::span<const double> values);

// linear interpolation between order statistics
double quantile(std::vector<double> values, double q);

struct MetricsRow {
  std::string instance;
  std::string scenario;
  uint64_t seed = 0;
  double primal_gap = 0.0;       // percent
  double primal_integral = 0.0;  // percent
  int n_iterations = 0;
  double best_objective = 0.0;
};

struct ScenarioSummary {
  std::string scenario;
  int count = 0;  // rows aggregated
  double q10 = 0.0, q50 = 0.0, q90 = 0.0;
  double mean = 0.0;
  double geomean = 0.0;  // shifted
  int wins = 0;          // instances where this scenario's mean-over-seeds gap is minimal
};

// Per-scenario table over primal gaps; ties in the per-instance minimum are
// credited to every tied scenario.
std::vector<ScenarioSummary> aggregate(std::span<const MetricsRow> rows);

// aligned text table with the Quantiles/Mean/Geomean/Wins layout
std::string format_summary_table(const std::vector<ScenarioSummary>& summaries,
                                 const std::string& metric_name = "primal gap (%)");
void write_summary_csv(std::ostream& out, const std::vector<ScenarioSummary>& summaries);

}  // namespace lns
