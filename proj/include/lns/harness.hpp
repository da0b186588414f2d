#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lns/collect.hpp"
#include "lns/engine.hpp"
#include "lns/features.hpp"
#include "lns/gbm.hpp"
#include "lns/metrics.hpp"
#include "lns/model.hpp"
#include "lns/solver.hpp"

namespace lns {

enum class FilterStatus { Selected, Infeasible, Error, LowBinary, NoSolution, Trivial };

std::string to_string(FilterStatus s);

struct InstanceManifest {
  std::string path;
  std::string name;
  int n_vars = 0;
  int n_binary = 0;
  double binary_ratio = 0.0;
  std::vector<std::string> tags;
  FilterStatus filter_status = FilterStatus::Error;
};

// All pipeline budgets in seconds, at full benchmark scale; time_scale
// shrinks them uniformly for desk-scale runs.
struct BudgetConfig {
  double total = 600.0;
  double probe = 120.0;
  double sample = 60.0;
  double iteration = 20.0;
  double lp_solve = 5.0;     // per-solve limit in SPL and LB-RELAX
  double label = 21600.0;    // long offline solve for label generation
  double hardness = 600.0;   // instance-selection condition (5) run
  double time_scale = 1.0;
  // deterministic desk-scale knobs (0 = unlimited)
  long probe_node_limit = 0;
  long hardness_node_limit = 0;  // filter condition (5) run
  int max_samples = 0;
  int max_iterations = 0;
  long solve_node_limit = 0;  // engine sub-problem solves

  double scaled(double v) const { return v * time_scale; }
};

struct ScenarioSpec {
  std::string policy;  // random|rins|crossover|lb|lb-relax|olns|dolns|slns
  FeatureSource source = FeatureSource::PRB;  // slns feature source
  std::string weights_preset = "none";        // none|W1|W2|W3 (slns)
  double m_w = 2.0;                           // olns/slns weight multiplier
  double error_rate = 0.0;                    // olns/dolns noise

  std::string display_name() const;
};

struct HarnessConfig {
  BudgetConfig budgets;
  double initial_ratio = 0.2;
  double ratio_scale = 1.5;
  double r_min = 0.01;
  double r_max = 0.9;
  int fallback_after = 2;
  std::vector<uint64_t> seeds{1, 2, 3};
  std::vector<ScenarioSpec> scenarios;
  GbmConfig gbm;
  uint64_t base_seed = 20177;
  int workers = 1;
  double min_binary_ratio = 0.10;
  double trivial_gap_percent = 10.0;

  EngineConfig engine_config() const;
};

HarnessConfig load_config(const std::string& path);
HarnessConfig parse_config_json(const std::string& text);
std::string config_to_json(const HarnessConfig& cfg);

// Applies the selection conditions in order: parse error -> error; detected
// infeasible -> infeasible; binary ratio below threshold -> low_binary; no
// feasible within the probe budget -> no_solution; optimality gap at most
// the threshold after the hardness budget -> trivial; rest -> selected.
std::vector<InstanceManifest> filter_instances(const std::string& dir, SolverBackend& backend,
                                               const HarnessConfig& cfg);

// Label solution: the exact enumeration optimum for pure-binary desk-scale
// instances, otherwise the best feasible of a long solve. nullopt when no
// feasible solution was found.
std::optional<Solution> generate_labels(const MipModel& model, SolverBackend& backend,
                                        double label_budget);

struct RunRecord {
  std::string instance;
  std::string scenario;
  uint64_t seed = 0;
  Trajectory trajectory;
  MetricsRow metrics;
  std::vector<IterationRecord> iterations;
};

void write_run_records(std::ostream& out, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_run_records(std::istream& in);

void write_manifests_json(std::ostream& out, const std::vector<InstanceManifest>& manifests);
std::vector<InstanceManifest> read_manifests_json(std::istream& in);

void write_labels_json(std::ostream& out, const std::map<std::string, Solution>& labels);
std::map<std::string, Solution> read_labels_json(std::istream& in);

// In-memory pipeline over a fixed instance list: probing, sampling, feature
// assembly, leave-one-out training and scenario execution. Per-instance
// artifacts are memoized; engine runs are scheduled over `workers` threads.
class Experiment {
 public:
  Experiment(std::vector<MipModel> models, HarnessConfig cfg, SolverBackend& backend);

  // labels are required by oracle and slns scenarios
  void set_label(const std::string& instance, Solution label);
  const std::map<std::string, Solution>& labels() const { return labels_; }
  void generate_missing_labels();

  // cache hooks: inject artifacts computed earlier, inspect what this run
  // materialized
  void preload_probe(const std::string& instance, ProbeRecord record);
  void preload_samples(const std::string& instance, SampleSet samples);
  const std::map<std::string, ProbeRecord>& probes() const { return probes_; }
  const std::map<std::string, SampleSet>& samples() const { return samples_; }

  const ProbeRecord& probe_for(const std::string& instance);
  const std::optional<Solution>& relaxation_for(const std::string& instance);
  const SampleSet& samples_for(const std::string& instance);
  InstanceDataset features_for(const std::string& instance, FeatureSource source);

  // leave-one-out model for an instance (trained on every other instance)
  const TrainedModel& model_for(const std::string& instance, FeatureSource source,
                                const std::string& weights_preset);
  std::vector<int> predictions_for(const std::string& instance, FeatureSource source,
                                   const std::string& weights_preset);

  // throws std::invalid_argument when a scenario lacks its required artifact
  std::vector<RunRecord> run_all();

  const MipModel& model(const std::string& instance) const;

 private:
  RunRecord execute(const MipModel& model, const ScenarioSpec& scenario, uint64_t seed);

  std::vector<MipModel> models_;
  std::map<std::string, size_t> by_name_;
  HarnessConfig cfg_;
  SolverBackend& backend_;

  std::map<std::string, Solution> labels_;
  std::map<std::string, ProbeRecord> probes_;
  std::map<std::string, std::optional<Solution>> relaxations_;
  std::map<std::string, SampleSet> samples_;
  std::map<std::string, TrainedModel> loo_models_;  // key: instance|source|preset
};

struct SegmentRow {
  std::string segment;
  int instance_count = 0;
  std::string scenario;
  double mean = 0.0;
  double geomean = 0.0;
};

struct Report {
  std::vector<ScenarioSummary> gap_summary;
  std::vector<ScenarioSummary> integral_summary;
  std::vector<SegmentRow> segments;
  std::string text;
};

// Aggregates gaps and integrals per scenario; when manifests are provided,
// adds median splits on binary count and sample size plus per-tag segments.
Report report(const std::vector<RunRecord>& records,
              const std::vector<InstanceManifest>& manifests = {},
              const std::map<std::string, int>& sample_counts = {});

}  // namespace lns
