#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lns/collect.hpp"
#include "lns/model.hpp"

namespace lns {

inline constexpr int kHistogramBins = 10;
inline constexpr int kBestSolutionSlots = 10;
inline constexpr int kFeatureColumns = kHistogramBins + kBestSolutionSlots + 2;
// padding sentinel for missing best-solution slots; outside [0,1] so tree
// models can split it away
inline constexpr double kMissingValue = -1.0;

struct Histogram {
  std::vector<double> bins;

  bool operator==(const Histogram&) const = default;
};

// Frequencies over equal bins of [0,1]; bin index floor(x*k)+1 clamped to k
// (the x = 1 edge case lands in the last bin). Values must lie in [0,1];
// empty input yields the zero vector.
Histogram build_histogram(std::span<const double> values, int k_h);

struct VariableFeatureRow {
  Histogram hist;  // kHistogramBins bins over fractional values
  std::array<double, kBestSolutionSlots> best10{};  // value in the 10 best feasible solutions
  int n_feasible = 0;
  int n_fractional = 0;
  std::optional<int> label;
};

// the 22 model inputs, in column order
std::array<double, kFeatureColumns> feature_vector(const VariableFeatureRow& row);

enum class FeatureSource { PRB, SPL };

std::string to_string(FeatureSource s);
FeatureSource feature_source_from_string(const std::string& s);

struct InstanceDataset {
  std::string instance;
  std::vector<int> var_indices;         // binary indices, ascending
  std::vector<VariableFeatureRow> rows;  // one per binary index, same order
  FeatureSource source = FeatureSource::PRB;
};

// One feature row per binary variable. PRB histograms use the probe's
// fractional solutions; SPL additionally unions in the sampled LP points.
// Fractional binary values are clipped into [0,1] (LP rounding dust only).
InstanceDataset assemble_features(const ProbeRecord& probe, const SampleSet* samples,
                                  const MipModel& model, FeatureSource source);

// Sets row labels from the (feasible) label solution, rounding to {0,1}.
InstanceDataset attach_labels(InstanceDataset dataset, const Solution& label_solution,
                              const MipModel& model);

// training corpus CSV: instance, var index, histogram bins, best-solution
// values, counts, label (empty when unlabeled)
void write_features_csv(std::ostream& out, const std::vector<InstanceDataset>& datasets);
std::vector<InstanceDataset> read_features_csv(std::istream& in);

}  // namespace lns
