// lnsbench: destroy-policy benchmark harness for MIP large neighbourhood
// search. Subcommands cover the full pipeline: instance generation and
// filtering, label generation, probing/sampling, feature assembly,
// classifier training, scenario runs and report aggregation.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lns/collect.hpp"
#include "lns/features.hpp"
#include "lns/gbm.hpp"
#include "lns/harness.hpp"
#include "lns/mps_io.hpp"
#include "lns/rng.hpp"
#include "lns/serialize.hpp"
#include "lns/solver.hpp"
#include "lns/synth.hpp"

namespace fs = std::filesystem;
using namespace lns;

namespace {

HarnessConfig config_or_default(const std::string& path) {
  if (path.empty()) return HarnessConfig{};
  return load_config(path);
}

std::vector<MipModel> load_instances(const std::string& dir,
                                     const std::vector<InstanceManifest>* manifests) {
  std::vector<MipModel> models;
  if (manifests) {
    for (const InstanceManifest& m : *manifests)
      if (m.filter_status == FilterStatus::Selected) models.push_back(parse_mps_file(m.path));
    return models;
  }
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".mps")
      files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  for (const std::string& f : files) models.push_back(parse_mps_file(f));
  return models;
}

std::vector<InstanceManifest> manifests_from(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path);
  return read_manifests_json(in);
}

std::map<std::string, Solution> labels_from(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open labels: " + path);
  return read_labels_json(in);
}

// content-hash key for the on-disk artifact cache
std::string cache_key(const MipModel& model, const HarnessConfig& cfg, const std::string& kind) {
  const std::string mps = write_mps_string(model);
  const std::string config = config_to_json(cfg);
  uint64_t h = fnv1a64(mps.data(), mps.size());
  h = fnv1a64(config.data(), config.size(), h);
  h = fnv1a64(kind.data(), kind.size(), h);
  std::ostringstream key;
  key << kind << "-" << std::hex << h;
  return key.str();
}

template <typename T>
bool cache_load(const fs::path& dir, const std::string& key, T& value) {
  const fs::path file = dir / (key + ".json");
  std::ifstream in(file);
  if (!in) return false;
  nlohmann::json j;
  in >> j;
  value = j.get<T>();
  return true;
}

template <typename T>
void cache_store(const fs::path& dir, const std::string& key, const T& value) {
  fs::create_directories(dir);
  std::ofstream out(dir / (key + ".json"));
  const nlohmann::json j = value;
  out << j.dump() << "\n";
}

int cmd_gen(const std::string& out_dir, const std::string& family, int count, int min_bin,
            int max_bin, uint64_t seed) {
  fs::create_directories(out_dir);
  Rng rng(seed);
  for (int i = 0; i < count; ++i) {
    const int n = min_bin + (max_bin > min_bin ? rng.uniform_int(max_bin - min_bin + 1) : 0);
    const std::string name = family + std::to_string(i + 1);
    MipModel m;
    if (family == "knapsack")
      m = random_knapsack(n, 2, rng, name);
    else if (family == "mixed")
      m = random_binary_mip(n, rng, name);
    else if (family == "planted")
      m = planted_knapsack(n, rng, name);
    else
      throw std::runtime_error("unknown family: " + family);
    write_mps_file(m, (fs::path(out_dir) / (name + ".mps")).string());
  }
  std::cout << "wrote " << count << " " << family << " instances to " << out_dir << "\n";
  return 0;
}

int cmd_filter(const std::string& dir, const std::string& config_path, const std::string& out) {
  const HarnessConfig cfg = config_or_default(config_path);
  ReferenceSolver backend;
  const auto manifests = filter_instances(dir, backend, cfg);
  std::ofstream file(out);
  write_manifests_json(file, manifests);
  std::map<std::string, int> counts;
  for (const auto& m : manifests) counts[to_string(m.filter_status)] += 1;
  std::cout << "total " << manifests.size() << "\n";
  for (const auto& [status, n] : counts) std::cout << status << " " << n << "\n";
  return 0;
}

int cmd_label(const std::string& manifest_path, const std::string& config_path,
              const std::string& out) {
  const HarnessConfig cfg = config_or_default(config_path);
  const auto manifests = manifests_from(manifest_path);
  ReferenceSolver backend;
  std::map<std::string, Solution> labels;
  if (fs::exists(out)) {
    std::ifstream existing(out);
    labels = read_labels_json(existing);
  }
  for (const InstanceManifest& m : manifests) {
    if (m.filter_status != FilterStatus::Selected) continue;
    const MipModel model = parse_mps_file(m.path);
    auto label = generate_labels(model, backend, cfg.budgets.scaled(cfg.budgets.label));
    if (!label) {
      std::cerr << m.name << ": no feasible label found, dropped\n";
      continue;
    }
    auto it = labels.find(m.name);
    // relabeling keeps the strictly better solution only
    if (it == labels.end() || label->objective < it->second.objective - kImprovementTol)
      labels[m.name] = std::move(*label);
  }
  std::ofstream file(out);
  write_labels_json(file, labels);
  std::cout << "labels for " << labels.size() << " instances -> " << out << "\n";
  return 0;
}

int cmd_probe(const std::string& manifest_path, const std::string& config_path,
              const std::string& out_dir) {
  const HarnessConfig cfg = config_or_default(config_path);
  const auto manifests = manifests_from(manifest_path);
  ReferenceSolver backend;
  fs::create_directories(out_dir);
  for (const InstanceManifest& m : manifests) {
    if (m.filter_status != FilterStatus::Selected) continue;
    const MipModel model = parse_mps_file(m.path);
    try {
      const ProbeRecord rec =
          probe(model, backend, cfg.budgets.scaled(cfg.budgets.probe),
                mix_seed(cfg.base_seed, fnv1a64(m.name.data(), m.name.size())),
                cfg.budgets.probe_node_limit);
      std::ofstream file(fs::path(out_dir) / (m.name + ".json"));
      const nlohmann::json j = rec;
      file << j.dump() << "\n";
      std::cout << m.name << ": " << rec.feasible.size() << " feasible, "
                << rec.fractional.size() << " fractional\n";
    } catch (const NoInitialSolution&) {
      std::cerr << m.name << ": no feasible solution in the probing budget\n";
    }
  }
  return 0;
}

int cmd_sample(const std::string& manifest_path, const std::string& config_path,
               const std::string& probe_dir, const std::string& out_dir) {
  const HarnessConfig cfg = config_or_default(config_path);
  const auto manifests = manifests_from(manifest_path);
  ReferenceSolver backend;
  fs::create_directories(out_dir);
  for (const InstanceManifest& m : manifests) {
    if (m.filter_status != FilterStatus::Selected) continue;
    std::ifstream pf(fs::path(probe_dir) / (m.name + ".json"));
    if (!pf) {
      std::cerr << m.name << ": missing probe record, skipped\n";
      continue;
    }
    nlohmann::json pj;
    pf >> pj;
    const ProbeRecord rec = pj.get<ProbeRecord>();
    const MipModel model = parse_mps_file(m.path);
    Rng rng(mix_seed(cfg.base_seed ^ 0x53504cULL, fnv1a64(m.name.data(), m.name.size())));
    const SampleSet set =
        spl(model, rec.initial_solution(), backend, cfg.budgets.scaled(cfg.budgets.sample),
            cfg.budgets.scaled(cfg.budgets.lp_solve), rng, cfg.budgets.max_samples);
    std::ofstream file(fs::path(out_dir) / (m.name + ".json"));
    const nlohmann::json j = set;
    file << j.dump() << "\n";
    std::cout << m.name << ": " << set.samples.size() << " samples\n";
  }
  return 0;
}

int cmd_features(const std::string& manifest_path, const std::string& probe_dir,
                 const std::string& sample_dir, const std::string& source_name,
                 const std::string& labels_path, const std::string& out) {
  const auto manifests = manifests_from(manifest_path);
  const FeatureSource source = feature_source_from_string(source_name);
  std::map<std::string, Solution> labels;
  if (!labels_path.empty()) labels = labels_from(labels_path);

  std::vector<InstanceDataset> datasets;
  for (const InstanceManifest& m : manifests) {
    if (m.filter_status != FilterStatus::Selected) continue;
    std::ifstream pf(fs::path(probe_dir) / (m.name + ".json"));
    if (!pf) continue;
    nlohmann::json pj;
    pf >> pj;
    const ProbeRecord rec = pj.get<ProbeRecord>();
    const MipModel model = parse_mps_file(m.path);

    SampleSet set;
    const SampleSet* set_ptr = nullptr;
    if (source == FeatureSource::SPL) {
      std::ifstream sf(fs::path(sample_dir) / (m.name + ".json"));
      if (sf) {
        nlohmann::json sj;
        sf >> sj;
        set = sj.get<SampleSet>();
        set_ptr = &set;
      }
    }
    InstanceDataset ds = assemble_features(rec, set_ptr, model, source);
    auto label = labels.find(m.name);
    if (label != labels.end()) ds = attach_labels(std::move(ds), label->second, model);
    datasets.push_back(std::move(ds));
  }
  std::ofstream file(out);
  write_features_csv(file, datasets);
  std::cout << datasets.size() << " instances -> " << out << "\n";
  return 0;
}

int cmd_train(const std::string& features_path, const std::string& weights,
              const std::string& config_path, const std::string& out_dir) {
  const HarnessConfig cfg = config_or_default(config_path);
  std::ifstream in(features_path);
  if (!in) throw std::runtime_error("cannot open features: " + features_path);
  const auto corpus = read_features_csv(in);
  fs::create_directories(out_dir);
  // leave-one-instance-out: one model per instance
  for (const InstanceDataset& ds : corpus) {
    const TrainedModel model = train(corpus, ds.instance, class_weights_preset(weights), cfg.gbm);
    std::ofstream file(fs::path(out_dir) / (ds.instance + ".json"));
    write_model_json(file, model);
  }
  std::cout << corpus.size() << " leave-one-out models -> " << out_dir << "\n";
  return 0;
}

int cmd_run(const std::string& manifest_path, const std::string& config_path,
            const std::string& labels_path, const std::string& cache_dir,
            const std::string& out) {
  const HarnessConfig cfg = config_or_default(config_path);
  if (cfg.scenarios.empty())
    throw std::runtime_error("config has no scenarios; nothing to run");
  const auto manifests = manifests_from(manifest_path);
  std::vector<MipModel> models = load_instances("", &manifests);
  ReferenceSolver backend;
  Experiment exp(models, cfg, backend);
  if (!labels_path.empty())
    for (auto& [name, solution] : labels_from(labels_path)) exp.set_label(name, solution);
  exp.generate_missing_labels();

  const bool use_cache = !cache_dir.empty();
  if (use_cache) {
    for (const MipModel& m : models) {
      ProbeRecord rec;
      if (cache_load(cache_dir, cache_key(m, cfg, "probe"), rec))
        exp.preload_probe(m.name, std::move(rec));
      SampleSet set;
      if (cache_load(cache_dir, cache_key(m, cfg, "spl"), set))
        exp.preload_samples(m.name, std::move(set));
    }
  }

  const auto records = exp.run_all();

  if (use_cache) {
    for (const MipModel& m : models) {
      auto pit = exp.probes().find(m.name);
      if (pit != exp.probes().end())
        cache_store(cache_dir, cache_key(m, cfg, "probe"), pit->second);
      auto sit = exp.samples().find(m.name);
      if (sit != exp.samples().end())
        cache_store(cache_dir, cache_key(m, cfg, "spl"), sit->second);
    }
  }

  std::ofstream file(out);
  write_run_records(file, records);
  std::cout << records.size() << " run records -> " << out << "\n";

  std::map<std::string, int> sample_counts;
  for (const auto& [name, set] : exp.samples())
    sample_counts[name] = static_cast<int>(set.samples.size());
  const Report rep = report(records, manifests, sample_counts);
  std::cout << "\n" << rep.text;
  return 0;
}

int cmd_report(const std::string& runs_path, const std::string& manifest_path,
               const std::string& out_prefix) {
  std::ifstream in(runs_path);
  if (!in) throw std::runtime_error("cannot open run records: " + runs_path);
  const auto records = read_run_records(in);
  std::vector<InstanceManifest> manifests;
  if (!manifest_path.empty()) manifests = manifests_from(manifest_path);

  // sample counts are not recoverable from run records; the sample-size
  // median split is only emitted by `run`, which has them in memory
  const Report rep = report(records, manifests);
  std::cout << rep.text;
  if (!out_prefix.empty()) {
    std::ofstream txt(out_prefix + ".txt");
    txt << rep.text;
    std::ofstream csv(out_prefix + ".csv");
    write_summary_csv(csv, rep.gap_summary);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LNS matheuristic benchmark harness for MIPs"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate synthetic MPS instances");
  std::string gen_out = "instances", gen_family = "knapsack";
  int gen_count = 12, gen_min = 10, gen_max = 16;
  uint64_t gen_seed = 1;
  gen->add_option("--out", gen_out, "output directory");
  gen->add_option("--family", gen_family, "knapsack|mixed|planted");
  gen->add_option("--count", gen_count, "number of instances");
  gen->add_option("--binaries-min", gen_min, "smallest binary count");
  gen->add_option("--binaries-max", gen_max, "largest binary count");
  gen->add_option("--seed", gen_seed, "generator seed");

  // filter
  auto* filter = app.add_subcommand("filter", "select usable instances from a directory");
  std::string filter_dir, filter_cfg, filter_out = "manifest.json";
  filter->add_option("--instances", filter_dir, "directory of .mps files")->required();
  filter->add_option("--config", filter_cfg, "config JSON");
  filter->add_option("--out", filter_out, "manifest output path");

  // label
  auto* label = app.add_subcommand("label", "generate label solutions for selected instances");
  std::string label_manifest, label_cfg, label_out = "labels.json";
  label->add_option("--manifest", label_manifest, "manifest JSON")->required();
  label->add_option("--config", label_cfg, "config JSON");
  label->add_option("--out", label_out, "labels output path");

  // probe
  auto* probe_cmd = app.add_subcommand("probe", "run the probing phase per instance");
  std::string probe_manifest, probe_cfg, probe_out = "probes";
  probe_cmd->add_option("--manifest", probe_manifest, "manifest JSON")->required();
  probe_cmd->add_option("--config", probe_cfg, "config JSON");
  probe_cmd->add_option("--out", probe_out, "output directory");

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "run the LP sampling phase per instance");
  std::string sample_manifest, sample_cfg, sample_probes = "probes", sample_out = "samples";
  sample_cmd->add_option("--manifest", sample_manifest, "manifest JSON")->required();
  sample_cmd->add_option("--config", sample_cfg, "config JSON");
  sample_cmd->add_option("--probes", sample_probes, "probe record directory");
  sample_cmd->add_option("--out", sample_out, "output directory");

  // features
  auto* features_cmd = app.add_subcommand("features", "assemble the training corpus CSV");
  std::string feat_manifest, feat_probes = "probes", feat_samples = "samples";
  std::string feat_source = "PRB", feat_labels, feat_out = "features.csv";
  features_cmd->add_option("--manifest", feat_manifest, "manifest JSON")->required();
  features_cmd->add_option("--probes", feat_probes, "probe record directory");
  features_cmd->add_option("--samples", feat_samples, "sample set directory");
  features_cmd->add_option("--source", feat_source, "PRB|SPL");
  features_cmd->add_option("--labels", feat_labels, "labels JSON (optional)");
  features_cmd->add_option("--out", feat_out, "CSV output path");

  // train
  auto* train_cmd = app.add_subcommand("train", "train leave-one-out classifiers");
  std::string train_features = "features.csv", train_weights = "W1", train_cfg,
              train_out = "models";
  train_cmd->add_option("--features", train_features, "training corpus CSV");
  train_cmd->add_option("--weights", train_weights, "none|W1|W2|W3");
  train_cmd->add_option("--config", train_cfg, "config JSON");
  train_cmd->add_option("--out", train_out, "model output directory");

  // run
  auto* run_cmd = app.add_subcommand("run", "execute every scenario over instances and seeds");
  std::string run_manifest, run_cfg, run_labels, run_cache, run_out = "runs.jsonl";
  run_cmd->add_option("--manifest", run_manifest, "manifest JSON")->required();
  run_cmd->add_option("--config", run_cfg, "config JSON")->required();
  run_cmd->add_option("--labels", run_labels, "labels JSON (optional)");
  run_cmd->add_option("--cache", run_cache, "artifact cache directory (optional)");
  run_cmd->add_option("--out", run_out, "JSONL output path");

  // report
  auto* report_cmd = app.add_subcommand("report", "aggregate run records into tables");
  std::string report_runs = "runs.jsonl", report_manifest, report_out;
  report_cmd->add_option("--runs", report_runs, "JSONL run records");
  report_cmd->add_option("--manifest", report_manifest, "manifest JSON for segmentation");
  report_cmd->add_option("--out", report_out, "output prefix for .txt/.csv");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(gen_out, gen_family, gen_count, gen_min, gen_max, gen_seed);
    if (filter->parsed()) return cmd_filter(filter_dir, filter_cfg, filter_out);
    if (label->parsed()) return cmd_label(label_manifest, label_cfg, label_out);
    if (probe_cmd->parsed()) return cmd_probe(probe_manifest, probe_cfg, probe_out);
    if (sample_cmd->parsed())
      return cmd_sample(sample_manifest, sample_cfg, sample_probes, sample_out);
    if (features_cmd->parsed())
      return cmd_features(feat_manifest, feat_probes, feat_samples, feat_source, feat_labels,
                          feat_out);
    if (train_cmd->parsed()) return cmd_train(train_features, train_weights, train_cfg, train_out);
    if (run_cmd->parsed()) return cmd_run(run_manifest, run_cfg, run_labels, run_cache, run_out);
    if (report_cmd->parsed()) return cmd_report(report_runs, report_manifest, report_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
