#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lns/features.hpp"
#include "lns/rng.hpp"
#include "lns/synth.hpp"

using namespace lns;

TEST_CASE("histogram bin placement follows the closed form") {
  const Histogram h = build_histogram(std::vector<double>{1.0}, 4);
  REQUIRE(h.bins.size() == 4);
  CHECK(h.bins[3] == doctest::Approx(1.0));  // x = 1 lands in the last bin
  CHECK(h.bins[0] == 0.0);

  const Histogram d = build_histogram(std::vector<double>{0.0, 0.5, 1.0}, 10);
  CHECK(d.bins[0] == doctest::Approx(1.0 / 3));
  CHECK(d.bins[5] == doctest::Approx(1.0 / 3));
  CHECK(d.bins[9] == doctest::Approx(1.0 / 3));

  const Histogram empty = build_histogram(std::vector<double>{}, 10);
  for (double b : empty.bins) CHECK(b == 0.0);

  CHECK_THROWS_AS(build_histogram(std::vector<double>{1.5}, 10), std::invalid_argument);
  CHECK_THROWS_AS(build_histogram(std::vector<double>{-0.2}, 10), std::invalid_argument);
}

TEST_CASE("histogram frequencies sum to one and match the formula on random input") {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> values;
    const int n = 1 + rng.uniform_int(40);
    for (int i = 0; i < n; ++i) values.push_back(rng.uniform01());
    const Histogram h = build_histogram(values, kHistogramBins);
    double sum = 0.0;
    for (double b : h.bins) sum += b;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    // each value's bin matches floor(x*k)+1 clamped
    for (double v : values) {
      int j = static_cast<int>(std::floor(v * kHistogramBins)) + 1;
      if (j > kHistogramBins) j = kHistogramBins;
      CHECK(h.bins[j - 1] > 0.0);
    }
  }
}

namespace {

ProbeRecord toy_probe(const MipModel& m) {
  ProbeRecord rec;
  // three feasible solutions, already sorted by objective
  rec.feasible.push_back(make_solution(m, {1.0, 1.0, 0.0}, SolutionKind::Feasible));
  rec.feasible.push_back(make_solution(m, {1.0, 0.0, 0.0}, SolutionKind::Feasible));
  rec.feasible.push_back(make_solution(m, {0.0, 0.0, 0.0}, SolutionKind::Feasible));
  std::sort(rec.feasible.begin(), rec.feasible.end(),
            [](const Solution& a, const Solution& b) { return a.objective < b.objective; });
  rec.fractional.push_back(make_solution(m, {0.5, 0.25, 1.0}, SolutionKind::Fractional));
  rec.fractional.push_back(make_solution(m, {0.1, 0.9, 1.0}, SolutionKind::Fractional));
  return rec;
}

MipModel toy_model() {
  Rng rng(1);
  return random_knapsack(3, 1, rng, "toy");
}

}  // namespace

TEST_CASE("assemble_features pads best10 and counts observations") {
  const MipModel m = toy_model();
  const ProbeRecord rec = toy_probe(m);
  const InstanceDataset ds = assemble_features(rec, nullptr, m, FeatureSource::PRB);
  REQUIRE(ds.rows.size() == 3);
  CHECK(ds.var_indices == m.binary_indices());
  for (const VariableFeatureRow& row : ds.rows) {
    CHECK(row.n_feasible == 3);
    CHECK(row.n_fractional == 2);
    // three feasible values then the -1 padding
    for (int k = 3; k < kBestSolutionSlots; ++k) CHECK(row.best10[k] == kMissingValue);
    for (int k = 0; k < 3; ++k) CHECK((row.best10[k] == 0.0 || row.best10[k] == 1.0));
    double sum = 0.0;
    for (double b : row.hist.bins) sum += b;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
  // best10 column 0 is the best solution's value
  CHECK(ds.rows[0].best10[0] == rec.feasible[0].values[0]);
}

TEST_CASE("SPL features with an empty sample set equal PRB features") {
  const MipModel m = toy_model();
  const ProbeRecord rec = toy_probe(m);
  SampleSet empty;
  const InstanceDataset prb = assemble_features(rec, nullptr, m, FeatureSource::PRB);
  const InstanceDataset spl_ds = assemble_features(rec, &empty, m, FeatureSource::SPL);
  REQUIRE(prb.rows.size() == spl_ds.rows.size());
  for (size_t i = 0; i < prb.rows.size(); ++i) {
    CHECK(prb.rows[i].hist == spl_ds.rows[i].hist);
    CHECK(prb.rows[i].best10 == spl_ds.rows[i].best10);
  }
}

TEST_CASE("sampling observations extend the histograms") {
  const MipModel m = toy_model();
  const ProbeRecord rec = toy_probe(m);
  SampleSet set;
  SplSample s;
  s.solution = make_solution(m, {0.0, 0.0, 0.05}, SolutionKind::Fractional);
  s.ratio_used = 0.5;
  s.k_lb = 1.0;
  s.status = SolveStatus::Optimal;
  set.samples.push_back(s);
  const InstanceDataset ds = assemble_features(rec, &set, m, FeatureSource::SPL);
  CHECK(ds.rows[0].n_fractional == 3);
  CHECK(ds.rows[2].hist.bins[0] > 0.0);  // the 0.05 observation
}

TEST_CASE("attach_labels maps the label solution onto rows and is idempotent") {
  const MipModel m = toy_model();
  const ProbeRecord rec = toy_probe(m);
  InstanceDataset ds = assemble_features(rec, nullptr, m, FeatureSource::PRB);
  for (const VariableFeatureRow& row : ds.rows) CHECK_FALSE(row.label.has_value());

  const Solution zero = make_solution(m, {0.0, 0.0, 0.0}, SolutionKind::Feasible);
  ds = attach_labels(std::move(ds), zero, m);
  for (const VariableFeatureRow& row : ds.rows) CHECK(row.label == 0);

  const Solution mixed = make_solution(m, {1.0, 0.0, 1.0}, SolutionKind::Feasible);
  ds = attach_labels(std::move(ds), mixed, m);
  CHECK(ds.rows[0].label == 1);
  CHECK(ds.rows[1].label == 0);
  CHECK(ds.rows[2].label == 1);
  InstanceDataset twice = attach_labels(ds, mixed, m);
  for (size_t i = 0; i < ds.rows.size(); ++i) CHECK(twice.rows[i].label == ds.rows[i].label);

  Solution bad = mixed;
  bad.values.pop_back();
  CHECK_THROWS_AS(attach_labels(ds, bad, m), std::invalid_argument);
}

TEST_CASE("feature CSV round-trips datasets") {
  const MipModel m = toy_model();
  const ProbeRecord rec = toy_probe(m);
  InstanceDataset ds = assemble_features(rec, nullptr, m, FeatureSource::PRB);
  const Solution mixed = make_solution(m, {1.0, 0.0, 1.0}, SolutionKind::Feasible);
  ds = attach_labels(std::move(ds), mixed, m);

  InstanceDataset unlabeled = assemble_features(rec, nullptr, m, FeatureSource::PRB);
  unlabeled.instance = "other";

  std::stringstream buf;
  write_features_csv(buf, {ds, unlabeled});
  const auto parsed = read_features_csv(buf);
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0].instance == ds.instance);
  REQUIRE(parsed[0].rows.size() == ds.rows.size());
  for (size_t i = 0; i < ds.rows.size(); ++i) {
    CHECK(parsed[0].rows[i].hist == ds.rows[i].hist);
    CHECK(parsed[0].rows[i].best10 == ds.rows[i].best10);
    CHECK(parsed[0].rows[i].label == ds.rows[i].label);
    CHECK(parsed[0].var_indices[i] == ds.var_indices[i]);
  }
  for (const VariableFeatureRow& row : parsed[1].rows) CHECK_FALSE(row.label.has_value());
}

TEST_CASE("feature vector lays out 22 columns") {
  VariableFeatureRow row;
  row.hist.bins.assign(kHistogramBins, 0.1);
  row.best10.fill(-1.0);
  row.best10[0] = 1.0;
  row.n_feasible = 4;
  row.n_fractional = 9;
  const auto f = feature_vector(row);
  CHECK(f.size() == 22);
  CHECK(f[0] == 0.1);
  CHECK(f[kHistogramBins] == 1.0);
  CHECK(f[20] == 4.0);
  CHECK(f[21] == 9.0);
}
