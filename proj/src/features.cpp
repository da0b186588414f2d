#include "lns/features.hpp"

#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lns {

namespace {

// LP solutions can stick out of [0,1] by up to the solver's tolerance; clip
// that dust, reject anything materially outside
double clip_unit(double v) {
  constexpr double kClipTol = 1e-6;
  if (v < 0.0) {
    if (v < -kClipTol) throw std::invalid_argument("histogram value outside [0,1]");
    return 0.0;
  }
  if (v > 1.0) {
    if (v > 1.0 + kClipTol) throw std::invalid_argument("histogram value outside [0,1]");
    return 1.0;
  }
  return v;
}

}  // namespace

Histogram build_histogram(std::span<const double> values, int k_h) {
  if (k_h <= 0) throw std::invalid_argument("histogram needs at least one bin");
  Histogram h;
  h.bins.assign(k_h, 0.0);
  if (values.empty()) return h;
  const double increment = 1.0 / static_cast<double>(values.size());
  for (double raw : values) {
    if (raw < 0.0 || raw > 1.0) throw std::invalid_argument("histogram value outside [0,1]");
    int j = static_cast<int>(std::floor(raw * k_h)) + 1;
    if (j > k_h) j = k_h;  // x = 1 lands in the last bin
    h.bins[j - 1] += increment;
  }
  return h;
}

std::array<double, kFeatureColumns> feature_vector(const VariableFeatureRow& row) {
  std::array<double, kFeatureColumns> f{};
  for (int b = 0; b < kHistogramBins; ++b) f[b] = row.hist.bins[b];
  for (int s = 0; s < kBestSolutionSlots; ++s) f[kHistogramBins + s] = row.best10[s];
  f[kHistogramBins + kBestSolutionSlots] = static_cast<double>(row.n_feasible);
  f[kHistogramBins + kBestSolutionSlots + 1] = static_cast<double>(row.n_fractional);
  return f;
}

std::string to_string(FeatureSource s) { return s == FeatureSource::PRB ? "PRB" : "SPL"; }

FeatureSource feature_source_from_string(const std::string& s) {
  if (s == "PRB" || s == "prb") return FeatureSource::PRB;
  if (s == "SPL" || s == "spl") return FeatureSource::SPL;
  throw std::invalid_argument("unknown feature source: " + s);
}

InstanceDataset assemble_features(const ProbeRecord& probe, const SampleSet* samples,
                                  const MipModel& model, FeatureSource source) {
  if (probe.feasible.empty())
    throw std::invalid_argument("assemble_features requires a non-empty feasible list");

  InstanceDataset ds;
  ds.instance = model.name;
  ds.source = source;
  ds.var_indices = model.binary_indices();

  // fractional observations: probing node relaxations, plus SPL points
  std::vector<const Solution*> fractional;
  for (const Solution& s : probe.fractional) fractional.push_back(&s);
  if (source == FeatureSource::SPL && samples != nullptr)
    for (const SplSample& s : samples->samples) fractional.push_back(&s.solution);

  const int n_best = std::min<int>(kBestSolutionSlots, static_cast<int>(probe.feasible.size()));

  ds.rows.reserve(ds.var_indices.size());
  std::vector<double> values;
  for (int i : ds.var_indices) {
    VariableFeatureRow row;
    values.clear();
    values.reserve(fractional.size());
    for (const Solution* s : fractional) values.push_back(clip_unit(s->values[i]));
    row.hist = build_histogram(values, kHistogramBins);
    row.best10.fill(kMissingValue);
    for (int k = 0; k < n_best; ++k) row.best10[k] = probe.feasible[k].values[i];
    row.n_feasible = static_cast<int>(probe.feasible.size());
    row.n_fractional = static_cast<int>(fractional.size());
    ds.rows.push_back(std::move(row));
  }
  return ds;
}

InstanceDataset attach_labels(InstanceDataset dataset, const Solution& label_solution,
                              const MipModel& model) {
  if (static_cast<int>(label_solution.values.size()) != model.num_vars())
    throw std::invalid_argument("label solution length mismatch");
  if (dataset.var_indices.size() != dataset.rows.size())
    throw std::invalid_argument("dataset rows out of sync with variable indices");
  for (size_t k = 0; k < dataset.rows.size(); ++k) {
    const int i = dataset.var_indices[k];
    dataset.rows[k].label = static_cast<int>(std::round(label_solution.values[i]));
  }
  return dataset;
}

void write_features_csv(std::ostream& out, const std::vector<InstanceDataset>& datasets) {
  out << "instance,var_index";
  for (int b = 1; b <= kHistogramBins; ++b) out << ",h" << b;
  for (int s = 1; s <= kBestSolutionSlots; ++s) out << ",best" << s;
  out << ",n_feasible,n_fractional,label\n";
  char buf[64];
  auto fmt = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (const InstanceDataset& ds : datasets) {
    for (size_t k = 0; k < ds.rows.size(); ++k) {
      const VariableFeatureRow& row = ds.rows[k];
      out << ds.instance << "," << ds.var_indices[k];
      for (double b : row.hist.bins) out << "," << fmt(b);
      for (double v : row.best10) out << "," << fmt(v);
      out << "," << row.n_feasible << "," << row.n_fractional << ",";
      if (row.label) out << *row.label;
      out << "\n";
    }
  }
}

std::vector<InstanceDataset> read_features_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty features CSV");

  // datasets keyed by instance, in first-appearance order
  std::vector<InstanceDataset> out;
  std::map<std::string, size_t> index;

  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    // trailing empty label drops the last field on some platforms
    if (static_cast<int>(fields.size()) == kFeatureColumns + 2) fields.push_back("");
    if (static_cast<int>(fields.size()) != kFeatureColumns + 3)
      throw std::invalid_argument("bad CSV row at line " + std::to_string(lineno));

    const std::string& inst = fields[0];
    auto [it, inserted] = index.try_emplace(inst, out.size());
    if (inserted) {
      InstanceDataset ds;
      ds.instance = inst;
      out.push_back(std::move(ds));
    }
    InstanceDataset& ds = out[it->second];

    VariableFeatureRow row;
    ds.var_indices.push_back(std::stoi(fields[1]));
    row.hist.bins.resize(kHistogramBins);
    for (int b = 0; b < kHistogramBins; ++b) row.hist.bins[b] = std::stod(fields[2 + b]);
    for (int s = 0; s < kBestSolutionSlots; ++s)
      row.best10[s] = std::stod(fields[2 + kHistogramBins + s]);
    row.n_feasible = std::stoi(fields[2 + kHistogramBins + kBestSolutionSlots]);
    row.n_fractional = std::stoi(fields[3 + kHistogramBins + kBestSolutionSlots]);
    const std::string& label = fields[4 + kHistogramBins + kBestSolutionSlots];
    if (!label.empty()) row.label = std::stoi(label);
    ds.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace lns
