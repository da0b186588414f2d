#include "lns/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "lns/mps_io.hpp"
#include "lns/policies.hpp"
#include "lns/serialize.hpp"

namespace lns {

namespace fs = std::filesystem;

std::string to_string(FilterStatus s) {
  switch (s) {
    case FilterStatus::Selected: return "selected";
    case FilterStatus::Infeasible: return "infeasible";
    case FilterStatus::Error: return "error";
    case FilterStatus::LowBinary: return "low_binary";
    case FilterStatus::NoSolution: return "no_solution";
    case FilterStatus::Trivial: return "trivial";
  }
  return "error";
}

std::string ScenarioSpec::display_name() const {
  std::ostringstream name;
  name << policy;
  if (policy == "olns") name << "-" << static_cast<long>(m_w);
  if ((policy == "olns" || policy == "dolns") && error_rate > 0.0)
    name << "-e" << error_rate;
  if (policy == "slns") name << "-" << weights_preset << "-" << to_string(source);
  return name.str();
}

EngineConfig HarnessConfig::engine_config() const {
  EngineConfig e;
  e.total_budget = budgets.scaled(budgets.total);
  e.iter_budget = budgets.scaled(budgets.iteration);
  e.initial_ratio = initial_ratio;
  e.ratio_scale = ratio_scale;
  e.r_min = r_min;
  e.r_max = r_max;
  e.fallback_after = fallback_after;
  e.max_iterations = budgets.max_iterations;
  e.solve_node_limit = budgets.solve_node_limit;
  return e;
}

namespace {

ScenarioSpec scenario_from_json(const nlohmann::json& j) {
  ScenarioSpec s;
  s.policy = j.at("policy").get<std::string>();
  if (j.contains("source")) s.source = feature_source_from_string(j.at("source").get<std::string>());
  if (j.contains("weights")) s.weights_preset = j.at("weights").get<std::string>();
  if (j.contains("m_w")) s.m_w = j.at("m_w").get<double>();
  if (j.contains("error_rate")) s.error_rate = j.at("error_rate").get<double>();
  return s;
}

nlohmann::json scenario_to_json(const ScenarioSpec& s) {
  return nlohmann::json{{"policy", s.policy},
                        {"source", to_string(s.source)},
                        {"weights", s.weights_preset},
                        {"m_w", s.m_w},
                        {"error_rate", s.error_rate}};
}

}  // namespace

HarnessConfig parse_config_json(const std::string& text) {
  HarnessConfig cfg;
  const nlohmann::json j = nlohmann::json::parse(text);
  if (j.contains("budgets")) {
    const auto& b = j.at("budgets");
    auto get = [&](const char* key, double& slot) {
      if (b.contains(key)) slot = b.at(key).get<double>();
    };
    get("total", cfg.budgets.total);
    get("probe", cfg.budgets.probe);
    get("sample", cfg.budgets.sample);
    get("iteration", cfg.budgets.iteration);
    get("lp_solve", cfg.budgets.lp_solve);
    get("label", cfg.budgets.label);
    get("hardness", cfg.budgets.hardness);
    get("time_scale", cfg.budgets.time_scale);
    if (b.contains("probe_node_limit")) cfg.budgets.probe_node_limit = b.at("probe_node_limit");
    if (b.contains("hardness_node_limit"))
      cfg.budgets.hardness_node_limit = b.at("hardness_node_limit");
    if (b.contains("max_samples")) cfg.budgets.max_samples = b.at("max_samples");
    if (b.contains("max_iterations")) cfg.budgets.max_iterations = b.at("max_iterations");
    if (b.contains("solve_node_limit")) cfg.budgets.solve_node_limit = b.at("solve_node_limit");
  }
  if (j.contains("engine")) {
    const auto& e = j.at("engine");
    if (e.contains("initial_ratio")) cfg.initial_ratio = e.at("initial_ratio");
    if (e.contains("ratio_scale")) cfg.ratio_scale = e.at("ratio_scale");
    if (e.contains("r_min")) cfg.r_min = e.at("r_min");
    if (e.contains("r_max")) cfg.r_max = e.at("r_max");
    if (e.contains("fallback_after")) cfg.fallback_after = e.at("fallback_after");
  }
  if (j.contains("gbm")) {
    const auto& g = j.at("gbm");
    if (g.contains("n_trees")) cfg.gbm.n_trees = g.at("n_trees");
    if (g.contains("max_depth")) cfg.gbm.max_depth = g.at("max_depth");
    if (g.contains("learning_rate")) cfg.gbm.learning_rate = g.at("learning_rate");
    if (g.contains("min_leaf")) cfg.gbm.min_leaf = g.at("min_leaf");
  }
  if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<uint64_t>>();
  if (j.contains("base_seed")) cfg.base_seed = j.at("base_seed").get<uint64_t>();
  if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
  if (j.contains("min_binary_ratio")) cfg.min_binary_ratio = j.at("min_binary_ratio");
  if (j.contains("trivial_gap_percent")) cfg.trivial_gap_percent = j.at("trivial_gap_percent");
  if (j.contains("scenarios")) {
    cfg.scenarios.clear();
    for (const auto& sj : j.at("scenarios")) cfg.scenarios.push_back(scenario_from_json(sj));
  }
  return cfg;
}

HarnessConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_json(buf.str());
}

std::string config_to_json(const HarnessConfig& cfg) {
  nlohmann::json scenarios = nlohmann::json::array();
  for (const ScenarioSpec& s : cfg.scenarios) scenarios.push_back(scenario_to_json(s));
  nlohmann::json j{
      {"budgets",
       {{"total", cfg.budgets.total},
        {"probe", cfg.budgets.probe},
        {"sample", cfg.budgets.sample},
        {"iteration", cfg.budgets.iteration},
        {"lp_solve", cfg.budgets.lp_solve},
        {"label", cfg.budgets.label},
        {"hardness", cfg.budgets.hardness},
        {"time_scale", cfg.budgets.time_scale},
        {"probe_node_limit", cfg.budgets.probe_node_limit},
        {"hardness_node_limit", cfg.budgets.hardness_node_limit},
        {"max_samples", cfg.budgets.max_samples},
        {"max_iterations", cfg.budgets.max_iterations},
        {"solve_node_limit", cfg.budgets.solve_node_limit}}},
      {"engine",
       {{"initial_ratio", cfg.initial_ratio},
        {"ratio_scale", cfg.ratio_scale},
        {"r_min", cfg.r_min},
        {"r_max", cfg.r_max},
        {"fallback_after", cfg.fallback_after}}},
      {"gbm",
       {{"n_trees", cfg.gbm.n_trees},
        {"max_depth", cfg.gbm.max_depth},
        {"learning_rate", cfg.gbm.learning_rate},
        {"min_leaf", cfg.gbm.min_leaf}}},
      {"seeds", cfg.seeds},
      {"base_seed", cfg.base_seed},
      {"workers", cfg.workers},
      {"min_binary_ratio", cfg.min_binary_ratio},
      {"trivial_gap_percent", cfg.trivial_gap_percent},
      {"scenarios", std::move(scenarios)}};
  return j.dump(2);
}

std::vector<InstanceManifest> filter_instances(const std::string& dir, SolverBackend& backend,
                                               const HarnessConfig& cfg) {
  if (!fs::is_directory(dir)) throw std::runtime_error("not a readable directory: " + dir);
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".mps")
      files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());

  std::vector<InstanceManifest> out;
  for (const std::string& path : files) {
    InstanceManifest m;
    m.path = path;
    m.name = fs::path(path).stem().string();

    MipModel model;
    try {
      model = parse_mps_file(path);
    } catch (const std::exception&) {
      m.filter_status = FilterStatus::Error;
      out.push_back(std::move(m));
      continue;
    }
    m.name = model.name;
    m.n_vars = model.num_vars();
    m.n_binary = static_cast<int>(model.binary_indices().size());
    m.binary_ratio = m.n_vars > 0 ? static_cast<double>(m.n_binary) / m.n_vars : 0.0;

    // condition (4): short default-settings run looking for any feasible point
    BackendConfig probe_cfg;
    probe_cfg.time_limit = cfg.budgets.scaled(cfg.budgets.probe);
    probe_cfg.node_limit = cfg.budgets.probe_node_limit;
    probe_cfg.seed = cfg.base_seed;
    const SolveOutcome probe_run = backend.solve_mip(model, std::nullopt, probe_cfg);

    // condition (5): longer run measuring the remaining optimality gap
    BackendConfig hard_cfg;
    hard_cfg.time_limit = cfg.budgets.scaled(cfg.budgets.hardness);
    hard_cfg.node_limit = cfg.budgets.hardness_node_limit;
    hard_cfg.seed = cfg.base_seed;
    const SolveOutcome hard_run = backend.solve_mip(model, std::nullopt, hard_cfg);

    double gap = kInfinity;
    if (hard_run.best && std::isfinite(hard_run.bound))
      gap = primal_gap(hard_run.bound, hard_run.best->objective);

    if (probe_run.status == SolveStatus::Infeasible || hard_run.status == SolveStatus::Infeasible)
      m.filter_status = FilterStatus::Infeasible;
    else if (m.binary_ratio < cfg.min_binary_ratio)
      m.filter_status = FilterStatus::LowBinary;
    else if (!probe_run.best)
      m.filter_status = FilterStatus::NoSolution;
    else if (gap <= cfg.trivial_gap_percent)
      m.filter_status = FilterStatus::Trivial;
    else
      m.filter_status = FilterStatus::Selected;
    out.push_back(std::move(m));
  }
  return out;
}

std::optional<Solution> generate_labels(const MipModel& model, SolverBackend& backend,
                                        double label_budget) {
  const int nb = static_cast<int>(model.binary_indices().size());
  if (nb == model.num_vars() && nb <= 20) {
    const SolveOutcome exact = enumerate_oracle(model);
    return exact.best;
  }
  BackendConfig cfg;
  cfg.time_limit = label_budget;
  const SolveOutcome run = backend.solve_mip(model, std::nullopt, cfg);
  return run.best;
}

// --- run records -------------------------------------------------------------

namespace {

nlohmann::json record_to_json(const RunRecord& r) {
  nlohmann::json events = nlohmann::json::array();
  for (const TrajectoryEvent& e : r.trajectory.events)
    events.push_back({{"time", e.time}, {"objective", e.objective}});
  nlohmann::json iters = nlohmann::json::array();
  for (const IterationRecord& it : r.iterations)
    iters.push_back({{"index", it.index},
                     {"ratio_used", it.ratio_used},
                     {"policy_used", it.policy_used},
                     {"fallback", it.fallback},
                     {"status", to_string(it.status)},
                     {"objective_after", it.objective_after},
                     {"wall_time", it.wall_time}});
  return nlohmann::json{{"instance", r.instance},
                        {"scenario", r.scenario},
                        {"seed", r.seed},
                        {"horizon", r.trajectory.horizon},
                        {"events", std::move(events)},
                        {"primal_gap", r.metrics.primal_gap},
                        {"primal_integral", r.metrics.primal_integral},
                        {"n_iterations", r.metrics.n_iterations},
                        {"best_objective", r.metrics.best_objective},
                        {"iterations", std::move(iters)}};
}

RunRecord record_from_json(const nlohmann::json& j) {
  RunRecord r;
  r.instance = j.at("instance").get<std::string>();
  r.scenario = j.at("scenario").get<std::string>();
  r.seed = j.at("seed").get<uint64_t>();
  r.trajectory.horizon = j.at("horizon").get<double>();
  for (const auto& e : j.at("events"))
    r.trajectory.events.push_back({e.at("time").get<double>(), e.at("objective").get<double>()});
  r.metrics.instance = r.instance;
  r.metrics.scenario = r.scenario;
  r.metrics.seed = r.seed;
  r.metrics.primal_gap = j.at("primal_gap").get<double>();
  r.metrics.primal_integral = j.at("primal_integral").get<double>();
  r.metrics.n_iterations = j.at("n_iterations").get<int>();
  r.metrics.best_objective = j.at("best_objective").get<double>();
  for (const auto& it : j.at("iterations")) {
    IterationRecord rec;
    rec.index = it.at("index").get<int>();
    rec.ratio_used = it.at("ratio_used").get<double>();
    rec.policy_used = it.at("policy_used").get<std::string>();
    rec.fallback = it.at("fallback").get<bool>();
    rec.status = solve_status_from_string(it.at("status").get<std::string>());
    rec.objective_after = it.at("objective_after").get<double>();
    rec.wall_time = it.at("wall_time").get<double>();
    r.iterations.push_back(std::move(rec));
  }
  return r;
}

}  // namespace

void write_run_records(std::ostream& out, const std::vector<RunRecord>& records) {
  for (const RunRecord& r : records) out << record_to_json(r).dump() << "\n";
}

std::vector<RunRecord> read_run_records(std::istream& in) {
  std::vector<RunRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(record_from_json(nlohmann::json::parse(line)));
  }
  return out;
}

void write_manifests_json(std::ostream& out, const std::vector<InstanceManifest>& manifests) {
  nlohmann::json arr = nlohmann::json::array();
  for (const InstanceManifest& m : manifests)
    arr.push_back({{"path", m.path},
                   {"name", m.name},
                   {"n_vars", m.n_vars},
                   {"n_binary", m.n_binary},
                   {"binary_ratio", m.binary_ratio},
                   {"tags", m.tags},
                   {"filter_status", to_string(m.filter_status)}});
  out << arr.dump(2) << "\n";
}

namespace {
FilterStatus filter_status_from_string(const std::string& s) {
  if (s == "selected") return FilterStatus::Selected;
  if (s == "infeasible") return FilterStatus::Infeasible;
  if (s == "error") return FilterStatus::Error;
  if (s == "low_binary") return FilterStatus::LowBinary;
  if (s == "no_solution") return FilterStatus::NoSolution;
  if (s == "trivial") return FilterStatus::Trivial;
  throw std::invalid_argument("unknown filter status: " + s);
}
}  // namespace

std::vector<InstanceManifest> read_manifests_json(std::istream& in) {
  nlohmann::json arr;
  in >> arr;
  std::vector<InstanceManifest> out;
  for (const auto& j : arr) {
    InstanceManifest m;
    m.path = j.at("path").get<std::string>();
    m.name = j.at("name").get<std::string>();
    m.n_vars = j.at("n_vars").get<int>();
    m.n_binary = j.at("n_binary").get<int>();
    m.binary_ratio = j.at("binary_ratio").get<double>();
    m.tags = j.at("tags").get<std::vector<std::string>>();
    m.filter_status = filter_status_from_string(j.at("filter_status").get<std::string>());
    out.push_back(std::move(m));
  }
  return out;
}

void write_labels_json(std::ostream& out, const std::map<std::string, Solution>& labels) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, solution] : labels) j[name] = solution;
  out << j.dump(2) << "\n";
}

std::map<std::string, Solution> read_labels_json(std::istream& in) {
  nlohmann::json j;
  in >> j;
  std::map<std::string, Solution> out;
  for (const auto& [name, sj] : j.items()) out[name] = sj.get<Solution>();
  return out;
}

// --- experiment --------------------------------------------------------------

Experiment::Experiment(std::vector<MipModel> models, HarnessConfig cfg, SolverBackend& backend)
    : models_(std::move(models)), cfg_(std::move(cfg)), backend_(backend) {
  for (size_t i = 0; i < models_.size(); ++i) {
    models_[i].validate();
    if (!by_name_.emplace(models_[i].name, i).second)
      throw std::invalid_argument("duplicate instance name: " + models_[i].name);
  }
}

const MipModel& Experiment::model(const std::string& instance) const {
  auto it = by_name_.find(instance);
  if (it == by_name_.end()) throw std::invalid_argument("unknown instance: " + instance);
  return models_[it->second];
}

void Experiment::set_label(const std::string& instance, Solution label) {
  labels_[instance] = std::move(label);
}

void Experiment::preload_probe(const std::string& instance, ProbeRecord record) {
  probes_[instance] = std::move(record);
}

void Experiment::preload_samples(const std::string& instance, SampleSet samples) {
  samples_[instance] = std::move(samples);
}

void Experiment::generate_missing_labels() {
  for (const MipModel& m : models_) {
    if (labels_.count(m.name)) continue;
    auto label = generate_labels(m, backend_, cfg_.budgets.scaled(cfg_.budgets.label));
    if (label) labels_.emplace(m.name, std::move(*label));
  }
}

const ProbeRecord& Experiment::probe_for(const std::string& instance) {
  auto it = probes_.find(instance);
  if (it != probes_.end()) return it->second;
  const MipModel& m = model(instance);
  ProbeRecord rec = probe(m, backend_, cfg_.budgets.scaled(cfg_.budgets.probe),
                          mix_seed(cfg_.base_seed, fnv1a64(instance.data(), instance.size())),
                          cfg_.budgets.probe_node_limit);
  return probes_.emplace(instance, std::move(rec)).first->second;
}

const std::optional<Solution>& Experiment::relaxation_for(const std::string& instance) {
  auto it = relaxations_.find(instance);
  if (it != relaxations_.end()) return it->second;
  BackendConfig lp_cfg;
  lp_cfg.time_limit = cfg_.budgets.scaled(cfg_.budgets.iteration);
  const SolveOutcome lp = backend_.solve_lp(relax(model(instance)), lp_cfg);
  std::optional<Solution> root;
  if (lp.status == SolveStatus::Optimal && lp.best) root = *lp.best;
  return relaxations_.emplace(instance, std::move(root)).first->second;
}

const SampleSet& Experiment::samples_for(const std::string& instance) {
  auto it = samples_.find(instance);
  if (it != samples_.end()) return it->second;
  const ProbeRecord& rec = probe_for(instance);
  Rng rng(mix_seed(cfg_.base_seed ^ 0x53504cULL, fnv1a64(instance.data(), instance.size())));
  SampleSet set = spl(model(instance), rec.initial_solution(), backend_,
                      cfg_.budgets.scaled(cfg_.budgets.sample),
                      cfg_.budgets.scaled(cfg_.budgets.lp_solve), rng, cfg_.budgets.max_samples);
  if (set.samples.empty())
    std::cerr << "warning: sampling produced no LP points for " << instance << "\n";
  return samples_.emplace(instance, std::move(set)).first->second;
}

InstanceDataset Experiment::features_for(const std::string& instance, FeatureSource source) {
  const ProbeRecord& rec = probe_for(instance);
  const SampleSet* set = source == FeatureSource::SPL ? &samples_for(instance) : nullptr;
  return assemble_features(rec, set, model(instance), source);
}

const TrainedModel& Experiment::model_for(const std::string& instance, FeatureSource source,
                                          const std::string& weights_preset) {
  const std::string key = instance + "|" + to_string(source) + "|" + weights_preset;
  auto it = loo_models_.find(key);
  if (it != loo_models_.end()) return it->second;

  std::vector<InstanceDataset> corpus;
  for (const MipModel& m : models_) {
    auto label = labels_.find(m.name);
    if (label == labels_.end()) continue;  // unlabeled instances cannot train
    corpus.push_back(attach_labels(features_for(m.name, source), label->second, m));
  }
  if (corpus.empty() || (corpus.size() == 1 && corpus[0].instance == instance))
    throw std::invalid_argument("no labeled training instances besides " + instance);
  TrainedModel trained = train(corpus, instance, class_weights_preset(weights_preset), cfg_.gbm);
  return loo_models_.emplace(key, std::move(trained)).first->second;
}

std::vector<int> Experiment::predictions_for(const std::string& instance, FeatureSource source,
                                             const std::string& weights_preset) {
  const TrainedModel& trained = model_for(instance, source, weights_preset);
  const InstanceDataset ds = features_for(instance, source);
  std::vector<int> preds;
  preds.reserve(ds.rows.size());
  for (const VariableFeatureRow& row : ds.rows) preds.push_back(predict(trained, row).second);
  return preds;
}

RunRecord Experiment::execute(const MipModel& m, const ScenarioSpec& scenario, uint64_t seed) {
  const ProbeRecord& rec = probe_for(m.name);
  const Solution& x0 = rec.initial_solution();
  const bool uses_sampling = scenario.policy == "slns" && scenario.source == FeatureSource::SPL;

  PolicyInputs inputs;
  inputs.pool = rec.feasible;
  inputs.lp_time_limit = cfg_.budgets.scaled(cfg_.budgets.lp_solve);
  if (scenario.policy == "rins" || scenario.policy == "lb" || scenario.policy == "lb-relax")
    inputs.root_relaxation = relaxation_for(m.name);
  if (scenario.policy == "olns" || scenario.policy == "dolns") {
    auto label = labels_.find(m.name);
    if (label == labels_.end())
      throw std::invalid_argument("oracle scenario requires a label for " + m.name);
    std::vector<int> bits;
    for (int i : m.binary_indices())
      bits.push_back(static_cast<int>(std::round(label->second.values[i])));
    inputs.oracle_labels = std::move(bits);
  }
  if (scenario.policy == "slns")
    inputs.predictions = predictions_for(m.name, scenario.source, scenario.weights_preset);

  const uint64_t run_seed =
      mix_seed(cfg_.base_seed ^ fnv1a64(m.name.data(), m.name.size()),
               fnv1a64(scenario.display_name().data(), scenario.display_name().size()) ^ seed);

  std::unique_ptr<DestroyPolicy> policy;
  if (scenario.policy == "random") {
    policy = std::make_unique<RandomPolicy>();
  } else if (scenario.policy == "rins") {
    policy = std::make_unique<RinsPolicy>();
  } else if (scenario.policy == "crossover") {
    policy = std::make_unique<CrossoverPolicy>();
  } else if (scenario.policy == "lb") {
    policy = std::make_unique<LocalBranchingPolicy>();
  } else if (scenario.policy == "lb-relax") {
    policy = std::make_unique<LbRelaxPolicy>();
  } else if (scenario.policy == "olns" || scenario.policy == "dolns") {
    Rng noise_rng(mix_seed(run_seed, 0xA11CEULL));
    OracleNoise noise = OracleNoise::draw(scenario.error_rate,
                                          static_cast<int>(m.binary_indices().size()), noise_rng);
    policy = std::make_unique<OraclePolicy>(
        scenario.policy == "dolns" ? OracleMode::Deterministic : OracleMode::Weighted,
        scenario.m_w, std::move(noise));
  } else if (scenario.policy == "slns") {
    policy = std::make_unique<SlnsPolicy>(scenario.m_w);
  } else {
    throw std::invalid_argument("unknown policy: " + scenario.policy);
  }

  EngineConfig engine_cfg = cfg_.engine_config();
  engine_cfg.total_budget = cfg_.budgets.scaled(
      cfg_.budgets.total - cfg_.budgets.probe - (uses_sampling ? cfg_.budgets.sample : 0.0));

  NeighbourhoodSizeManager manager;
  manager.ratio = cfg_.initial_ratio;
  manager.scale = cfg_.ratio_scale;
  manager.r_min = cfg_.r_min;
  manager.r_max = cfg_.r_max;

  const RunOutput out = run(m, x0, manager, *policy, backend_, engine_cfg, inputs, run_seed);

  RunRecord record;
  record.instance = m.name;
  record.scenario = scenario.display_name();
  record.seed = seed;
  record.trajectory.horizon = engine_cfg.total_budget;
  double prev_time = -1.0;
  for (const auto& [t, obj] : out.improvements) {
    const double time = t <= prev_time ? std::nextafter(prev_time, kInfinity) : t;
    record.trajectory.events.push_back({time, obj});
    prev_time = time;
  }
  record.iterations = out.history;
  record.metrics.instance = m.name;
  record.metrics.scenario = record.scenario;
  record.metrics.seed = seed;
  record.metrics.n_iterations = static_cast<int>(out.history.size());
  record.metrics.best_objective = out.best.objective;
  auto label = labels_.find(m.name);
  if (label != labels_.end()) {
    record.metrics.primal_gap = primal_gap(out.best.objective, label->second.objective);
    record.metrics.primal_integral =
        primal_integral(record.trajectory, label->second.objective);
  } else {
    record.metrics.primal_gap = std::nan("");
    record.metrics.primal_integral = std::nan("");
  }
  return record;
}

std::vector<RunRecord> Experiment::run_all() {
  struct Task {
    size_t model_idx;
    size_t scenario_idx;
    uint64_t seed;
  };

  // per-instance artifacts are materialized serially up front so the
  // parallel phase only touches read-only state
  std::vector<size_t> usable;
  for (size_t i = 0; i < models_.size(); ++i) {
    try {
      probe_for(models_[i].name);
      usable.push_back(i);
    } catch (const NoInitialSolution&) {
      std::cerr << "dropping " << models_[i].name << ": no initial solution from probing\n";
    }
  }
  for (const ScenarioSpec& s : cfg_.scenarios) {
    for (size_t i : usable) {
      const std::string& name = models_[i].name;
      if (s.policy == "rins" || s.policy == "lb" || s.policy == "lb-relax") relaxation_for(name);
      if (s.policy == "slns") {
        if (s.source == FeatureSource::SPL) samples_for(name);
        model_for(name, s.source, s.weights_preset);  // throws when untrainable
      }
    }
  }

  std::vector<Task> tasks;
  for (size_t si = 0; si < cfg_.scenarios.size(); ++si) {
    const ScenarioSpec& s = cfg_.scenarios[si];
    for (size_t i : usable) {
      const bool oracle = s.policy == "olns" || s.policy == "dolns";
      if (oracle && !labels_.count(models_[i].name)) continue;  // dropped for oracle scenarios
      for (uint64_t seed : cfg_.seeds) tasks.push_back({i, si, seed});
    }
  }

  std::vector<RunRecord> records(tasks.size());
  std::vector<char> ok(tasks.size(), 0);
  std::atomic<size_t> next{0};
  std::mutex log_mutex;

  auto worker = [&]() {
    while (true) {
      const size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      const Task& task = tasks[t];
      try {
        records[t] = execute(models_[task.model_idx], cfg_.scenarios[task.scenario_idx], task.seed);
        ok[t] = 1;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(log_mutex);
        std::cerr << "run failed (" << models_[task.model_idx].name << ", "
                  << cfg_.scenarios[task.scenario_idx].display_name() << ", seed " << task.seed
                  << "): " << e.what() << "\n";
      }
    }
  };

  const int workers = std::max(1, cfg_.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) threads.emplace_back(worker);
    for (std::thread& th : threads) th.join();
  }

  std::vector<RunRecord> out;
  out.reserve(tasks.size());
  for (size_t t = 0; t < tasks.size(); ++t)
    if (ok[t]) out.push_back(std::move(records[t]));
  return out;
}

// --- reporting ---------------------------------------------------------------

namespace {

// resolve gaps for records lacking a label-based best known value
std::vector<MetricsRow> resolved_rows(const std::vector<RunRecord>& records) {
  std::map<std::string, double> best_known;
  for (const RunRecord& r : records) {
    auto [it, inserted] = best_known.try_emplace(r.instance, r.metrics.best_objective);
    if (!inserted) it->second = std::min(it->second, r.metrics.best_objective);
  }
  std::vector<MetricsRow> rows;
  rows.reserve(records.size());
  for (const RunRecord& r : records) {
    MetricsRow row = r.metrics;
    if (std::isnan(row.primal_gap))
      row.primal_gap = primal_gap(r.metrics.best_objective, best_known[r.instance]);
    if (std::isnan(row.primal_integral))
      row.primal_integral = primal_integral(r.trajectory, best_known[r.instance]);
    rows.push_back(std::move(row));
  }
  return rows;
}

void append_segment(std::vector<SegmentRow>& out, const std::string& segment,
                    const std::vector<MetricsRow>& rows, const std::set<std::string>& members) {
  if (members.empty()) return;  // empty segments are omitted
  std::map<std::string, std::vector<double>> by_scenario;
  std::set<std::string> seen;
  for (const MetricsRow& r : rows) {
    if (!members.count(r.instance)) continue;
    by_scenario[r.scenario].push_back(r.primal_gap);
    seen.insert(r.instance);
  }
  for (const auto& [scenario, gaps] : by_scenario) {
    SegmentRow s;
    s.segment = segment;
    s.instance_count = static_cast<int>(seen.size());
    s.scenario = scenario;
    double mean = 0.0;
    for (double g : gaps) mean += g;
    s.mean = mean / static_cast<double>(gaps.size());
    s.geomean = shifted_geomean(gaps);
    out.push_back(std::move(s));
  }
}

}  // namespace

Report report(const std::vector<RunRecord>& records,
              const std::vector<InstanceManifest>& manifests,
              const std::map<std::string, int>& sample_counts) {
  if (records.empty()) throw std::invalid_argument("report needs at least one record");
  Report rep;
  const std::vector<MetricsRow> rows = resolved_rows(records);
  rep.gap_summary = aggregate(rows);

  std::vector<MetricsRow> integral_rows = rows;
  for (size_t i = 0; i < rows.size(); ++i)
    integral_rows[i].primal_gap = rows[i].primal_integral;  // aggregate() reads primal_gap
  rep.integral_summary = aggregate(integral_rows);

  if (!manifests.empty()) {
    std::map<std::string, const InstanceManifest*> by_name;
    std::set<std::string> run_instances;
    for (const MetricsRow& r : rows) run_instances.insert(r.instance);
    std::vector<int> binary_counts;
    for (const InstanceManifest& m : manifests) {
      if (!run_instances.count(m.name)) continue;
      by_name[m.name] = &m;
      binary_counts.push_back(m.n_binary);
    }
    if (!by_name.empty()) {
      std::vector<double> counts(binary_counts.begin(), binary_counts.end());
      const double median_binary = quantile(counts, 0.5);
      std::set<std::string> high_binary, low_binary;
      for (const auto& [name, m] : by_name)
        (m->n_binary >= median_binary ? high_binary : low_binary).insert(name);  // ties go high
      append_segment(rep.segments, "high binary", rows, high_binary);
      append_segment(rep.segments, "low binary", rows, low_binary);

      if (!sample_counts.empty()) {
        std::vector<double> sizes;
        for (const auto& [name, n] : sample_counts)
          if (run_instances.count(name)) sizes.push_back(n);
        if (!sizes.empty()) {
          const double median_samples = quantile(sizes, 0.5);
          std::set<std::string> high_sample, low_sample;
          for (const auto& [name, n] : sample_counts) {
            if (!run_instances.count(name)) continue;
            (n >= median_samples ? high_sample : low_sample).insert(name);
          }
          append_segment(rep.segments, "high sample size", rows, high_sample);
          append_segment(rep.segments, "low sample size", rows, low_sample);
        }
      }

      std::set<std::string> all_tags;
      for (const auto& [name, m] : by_name)
        for (const std::string& t : m->tags) all_tags.insert(t);
      for (const std::string& tag : all_tags) {
        std::set<std::string> members;
        for (const auto& [name, m] : by_name)
          if (std::find(m->tags.begin(), m->tags.end(), tag) != m->tags.end())
            members.insert(name);
        append_segment(rep.segments, tag, rows, members);
      }
    }
  }

  std::ostringstream text;
  text << format_summary_table(rep.gap_summary, "primal gap (%)") << "\n";
  text << format_summary_table(rep.integral_summary, "primal integral") << "\n";
  if (!rep.segments.empty()) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-22s %6s %-28s %9s %9s\n", "segment", "count", "scenario",
                  "mean", "geomean");
    text << buf;
    for (const SegmentRow& s : rep.segments) {
      std::snprintf(buf, sizeof(buf), "%-22s %6d %-28s %9.2f %9.2f\n", s.segment.c_str(),
                    s.instance_count, s.scenario.c_str(), s.mean, s.geomean);
      text << buf;
    }
  }
  rep.text = text.str();
  return rep;
}

}  // namespace lns
