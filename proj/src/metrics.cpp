#include "lns/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lns {

double primal_gap(double obj, double best_known) {
  if (!std::isfinite(best_known)) throw std::invalid_argument("best_known must be finite");
  const double denom = std::max(std::abs(best_known), 1e-10);
  const double gap = 100.0 * std::abs(obj - best_known) / denom;
  return std::min(gap, 100.0);
}

double primal_integral(const Trajectory& traj, double best_known) {
  if (traj.horizon <= 0.0) throw std::invalid_argument("trajectory horizon must be positive");
  const double H = traj.horizon;
  double area = 0.0;
  double prev_time = 0.0;
  double prev_gap = kNoSolutionGap;  // before the first feasible solution
  for (const TrajectoryEvent& e : traj.events) {
    const double t = std::min(e.time, H);
    if (t > prev_time) area += prev_gap * (t - prev_time);
    prev_time = std::max(prev_time, t);
    prev_gap = primal_gap(e.objective, best_known);
    if (prev_time >= H) break;
  }
  if (prev_time < H) area += prev_gap * (H - prev_time);
  return area / H;
}

double shifted_geomean(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("shifted_geomean of an empty list");
  double log_sum = 0.0;
  for (double v : values) {
    if (v < 0.0) throw std::invalid_argument("shifted_geomean requires non-negative values");
    log_sum += std::log1p(v);
  }
  return std::expm1(log_sum / static_cast<double>(values.size()));
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty list");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile level outside [0,1]");
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

std::vector<ScenarioSummary> aggregate(std::span<const MetricsRow> rows) {
  // scenario -> all gaps; (scenario, instance) -> gaps over seeds
  std::map<std::string, std::vector<double>> per_scenario;
  std::map<std::string, std::map<std::string, std::vector<double>>> per_instance;
  for (const MetricsRow& r : rows) {
    per_scenario[r.scenario].push_back(r.primal_gap);
    per_instance[r.scenario][r.instance].push_back(r.primal_gap);
  }

  // wins: per instance, the scenarios attaining the minimal mean-over-seeds
  std::map<std::string, int> wins;
  std::map<std::string, std::map<std::string, double>> means_by_instance;
  for (const auto& [scenario, instances] : per_instance) {
    for (const auto& [instance, gaps] : instances) {
      double mean = 0.0;
      for (double g : gaps) mean += g;
      means_by_instance[instance][scenario] = mean / static_cast<double>(gaps.size());
    }
  }
  for (const auto& [instance, by_scenario] : means_by_instance) {
    double best = kNoSolutionGap + 1.0;
    for (const auto& [scenario, mean] : by_scenario) best = std::min(best, mean);
    for (const auto& [scenario, mean] : by_scenario)
      if (mean <= best + 1e-12) wins[scenario] += 1;
  }

  std::vector<ScenarioSummary> out;
  for (const auto& [scenario, gaps] : per_scenario) {
    ScenarioSummary s;
    s.scenario = scenario;
    s.count = static_cast<int>(gaps.size());
    s.q10 = quantile(gaps, 0.1);
    s.q50 = quantile(gaps, 0.5);
    s.q90 = quantile(gaps, 0.9);
    double mean = 0.0;
    for (double g : gaps) mean += g;
    s.mean = mean / static_cast<double>(gaps.size());
    s.geomean = shifted_geomean(gaps);
    s.wins = wins.count(scenario) ? wins[scenario] : 0;
    out.push_back(std::move(s));
  }
  return out;
}

std::string format_summary_table(const std::vector<ScenarioSummary>& summaries,
                                 const std::string& metric_name) {
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-28s %8s %8s %8s %9s %9s %6s\n", metric_name.c_str(),
                "q0.1", "q0.5", "q0.9", "mean", "geomean", "wins");
  out << buf;
  for (const ScenarioSummary& s : summaries) {
    std::snprintf(buf, sizeof(buf), "%-28s %8.2f %8.2f %8.2f %9.2f %9.2f %6d\n",
                  s.scenario.c_str(), s.q10, s.q50, s.q90, s.mean, s.geomean, s.wins);
    out << buf;
  }
  return out.str();
}

void write_summary_csv(std::ostream& out, const std::vector<ScenarioSummary>& summaries) {
  out << "scenario,count,q10,q50,q90,mean,geomean,wins\n";
  for (const ScenarioSummary& s : summaries) {
    out << s.scenario << "," << s.count << "," << s.q10 << "," << s.q50 << "," << s.q90 << ","
        << s.mean << "," << s.geomean << "," << s.wins << "\n";
  }
}

}  // namespace lns
