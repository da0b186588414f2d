#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "lns/gbm.hpp"
#include "lns/rng.hpp"

using namespace lns;

namespace {

VariableFeatureRow row_with_signal(double signal, int label) {
  VariableFeatureRow row;
  row.hist.bins.assign(kHistogramBins, 0.0);
  row.hist.bins[0] = 1.0;
  row.best10.fill(kMissingValue);
  row.best10[0] = signal;
  row.n_feasible = 1;
  row.n_fractional = 1;
  row.label = label;
  return row;
}

// one pseudo-instance per name; rows carry a single informative feature
InstanceDataset cluster_instance(const std::string& name,
                                 const std::vector<std::pair<double, int>>& rows) {
  InstanceDataset ds;
  ds.instance = name;
  for (size_t i = 0; i < rows.size(); ++i) {
    ds.var_indices.push_back(static_cast<int>(i));
    ds.rows.push_back(row_with_signal(rows[i].first, rows[i].second));
  }
  return ds;
}

GbmConfig small_gbm() {
  GbmConfig cfg;
  cfg.n_trees = 40;
  cfg.max_depth = 3;
  cfg.min_leaf = 5;
  return cfg;
}

}  // namespace

TEST_CASE("weighted binary cross-entropy formula") {
  CHECK(weighted_bce(1.0, 1, kWeightsUnbiased) == doctest::Approx(0.0).epsilon(1e-9));
  const double expected = 0.75 * std::log(2.0);
  CHECK(weighted_bce(0.5, 1, kWeightsW1) == doctest::Approx(expected).epsilon(1e-12));
  // unit weights reduce to the standard BCE
  const double p = 0.3;
  CHECK(weighted_bce(p, 0, kWeightsUnbiased) == doctest::Approx(-std::log(1.0 - p)));
  CHECK(weighted_bce(p, 1, kWeightsUnbiased) == doctest::Approx(-std::log(p)));
}

TEST_CASE("loss gradient matches the closed form on anchor points") {
  CHECK(loss_gradient(0.0, 1, kWeightsUnbiased) == doctest::Approx(-0.5));
  // label 0, score far negative: sigmoid vanishes
  CHECK(loss_gradient(-40.0, 0, kWeightsUnbiased) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("gradient matches central finite differences") {
  Rng rng(123);
  const double h = 1e-5;
  for (int trial = 0; trial < 100; ++trial) {
    const double s = (rng.uniform01() - 0.5) * 8.0;
    const int label = rng.uniform01() < 0.5 ? 0 : 1;
    ClassWeights w{0.05 + rng.uniform01() * 0.9, 0.05 + rng.uniform01() * 0.9};
    const double analytic = loss_gradient(s, label, w);
    const double numeric =
        (weighted_bce(sigmoid(s + h), label, w) - weighted_bce(sigmoid(s - h), label, w)) /
        (2.0 * h);
    const double rel = std::abs(analytic - numeric) / std::max(1.0, std::abs(analytic));
    CHECK(rel < 1e-5);
  }
}

TEST_CASE("a perfectly separating feature trains to balanced accuracy one") {
  std::vector<std::pair<double, int>> rows;
  for (int i = 0; i < 60; ++i) rows.emplace_back(0.9, 1);
  for (int i = 0; i < 60; ++i) rows.emplace_back(0.1, 0);
  const std::vector<InstanceDataset> corpus{cluster_instance("a", rows),
                                            cluster_instance("b", rows)};
  const TrainedModel model = train(corpus, "b", kWeightsUnbiased, small_gbm());

  std::vector<int> preds, labels;
  for (const auto& [signal, label] : rows) {
    preds.push_back(predict(model, row_with_signal(signal, label)).second);
    labels.push_back(label);
  }
  const EvalReport rep = evaluate(preds, labels);
  CHECK(rep.balanced_accuracy == doctest::Approx(1.0));
  CHECK(rep.fnr == 0.0);
  CHECK(rep.fpr == 0.0);
}

TEST_CASE("constant labels collapse to the weighted prior") {
  std::vector<std::pair<double, int>> rows;
  Rng rng(9);
  for (int i = 0; i < 80; ++i) rows.emplace_back(rng.uniform01(), 0);
  const std::vector<InstanceDataset> corpus{cluster_instance("a", rows),
                                            cluster_instance("b", rows)};
  const TrainedModel model = train(corpus, "", kWeightsUnbiased, small_gbm());
  const auto [prob, hard] = predict(model, row_with_signal(0.5, 0));
  CHECK(prob < 1e-6);
  CHECK(hard == 0);
  CHECK(prob > 0.0);  // strictly inside (0,1)
}

TEST_CASE("training is deterministic and loss is non-increasing") {
  Rng rng(31);
  std::vector<std::pair<double, int>> rows;
  for (int i = 0; i < 200; ++i) {
    const double signal = rng.uniform01();
    const int label = rng.uniform01() < (signal > 0.6 ? 0.8 : 0.1) ? 1 : 0;
    rows.emplace_back(signal, label);
  }
  const std::vector<InstanceDataset> corpus{cluster_instance("a", rows),
                                            cluster_instance("b", rows)};
  const TrainedModel m1 = train(corpus, "b", kWeightsW1, small_gbm());
  const TrainedModel m2 = train(corpus, "b", kWeightsW1, small_gbm());
  const auto probe_row = row_with_signal(0.7, 1);
  CHECK(predict(m1, probe_row).first == predict(m2, probe_row).first);

  REQUIRE(m1.round_losses.size() == static_cast<size_t>(small_gbm().n_trees) + 1);
  for (size_t r = 1; r < m1.round_losses.size(); ++r)
    CHECK(m1.round_losses[r] <= m1.round_losses[r - 1] + 1e-9);
}

TEST_CASE("leave-one-out training excludes the test instance structurally") {
  std::vector<std::pair<double, int>> rows;
  for (int i = 0; i < 40; ++i) rows.emplace_back(i % 2 ? 0.8 : 0.2, i % 2);
  std::vector<InstanceDataset> corpus;
  for (const char* name : {"i1", "i2", "i3"}) corpus.push_back(cluster_instance(name, rows));

  const TrainedModel model = train(corpus, "i2", kWeightsUnbiased, small_gbm());
  CHECK(model.trained_on == std::vector<std::string>{"i1", "i3"});

  CHECK_THROWS_AS(train({corpus[0]}, "i1", kWeightsUnbiased, small_gbm()),
                  std::invalid_argument);
}

TEST_CASE("increasing the positive weight lowers FNR and raises FPR") {
  // three clusters with positive rates 1.5%, 15% and 35%; overall ~6%
  std::vector<std::pair<double, int>> rows;
  auto add_cluster = [&rows](double signal, int n, int positives) {
    for (int i = 0; i < n; ++i) rows.emplace_back(signal, i < positives ? 1 : 0);
  };
  add_cluster(0.1, 1600, 24);
  add_cluster(0.5, 240, 36);
  add_cluster(0.9, 160, 56);

  const std::vector<InstanceDataset> corpus{cluster_instance("a", rows),
                                            cluster_instance("b", rows)};
  GbmConfig cfg;
  cfg.n_trees = 100;
  cfg.max_depth = 4;
  cfg.min_leaf = 20;

  std::vector<int> labels;
  for (const auto& [signal, label] : rows) labels.push_back(label);

  auto fnr_fpr = [&](const ClassWeights& w) {
    const TrainedModel model = train(corpus, "b", w, cfg);
    std::vector<int> preds;
    for (const auto& [signal, label] : rows)
      preds.push_back(predict(model, row_with_signal(signal, label)).second);
    const EvalReport rep = evaluate(preds, labels);
    return std::pair<double, double>{rep.fnr, rep.fpr};
  };

  const auto [fnr_plain, fpr_plain] = fnr_fpr(kWeightsUnbiased);
  const auto [fnr_w1, fpr_w1] = fnr_fpr(kWeightsW1);
  const auto [fnr_w2, fpr_w2] = fnr_fpr(kWeightsW2);
  const auto [fnr_w3, fpr_w3] = fnr_fpr(kWeightsW3);

  CHECK(fnr_w3 <= fnr_w2 + 1e-12);
  CHECK(fnr_w2 <= fnr_w1 + 1e-12);
  CHECK(fnr_w1 <= fnr_plain + 1e-12);
  CHECK(fpr_plain <= fpr_w1 + 1e-12);
  CHECK(fpr_w1 <= fpr_w2 + 1e-12);
  CHECK(fpr_w2 <= fpr_w3 + 1e-12);
}

TEST_CASE("evaluate computes class-wise recalls") {
  // all-zero predictor on 90%-zero data
  std::vector<int> labels, preds;
  for (int i = 0; i < 100; ++i) {
    labels.push_back(i < 10 ? 1 : 0);
    preds.push_back(0);
  }
  const EvalReport rep = evaluate(preds, labels);
  CHECK(rep.balanced_accuracy == doctest::Approx(0.5));
  CHECK(rep.fnr == doctest::Approx(1.0));
  CHECK(rep.fpr == doctest::Approx(0.0));
  CHECK_FALSE(rep.single_class);

  const EvalReport perfect = evaluate(labels, labels);
  CHECK(perfect.balanced_accuracy == doctest::Approx(1.0));

  // single-class input is flagged
  std::vector<int> ones(10, 1);
  const EvalReport flagged = evaluate(ones, ones);
  CHECK(flagged.single_class);
  CHECK(flagged.balanced_accuracy == doctest::Approx(1.0));

  CHECK_THROWS_AS(evaluate(std::vector<int>{}, std::vector<int>{}), std::invalid_argument);
}

TEST_CASE("prediction threshold: probability one half maps to hard one") {
  TrainedModel model;
  model.base_score = 0.0;  // sigmoid(0) = 0.5 exactly
  model.learning_rate = 0.1;
  VariableFeatureRow row = row_with_signal(0.5, 0);
  const auto [prob, hard] = predict(model, row);
  CHECK(prob == doctest::Approx(0.5));
  CHECK(hard == 1);
}

TEST_CASE("model JSON round-trips predictions") {
  std::vector<std::pair<double, int>> rows;
  for (int i = 0; i < 60; ++i) rows.emplace_back(i % 2 ? 0.8 : 0.2, i % 2);
  const std::vector<InstanceDataset> corpus{cluster_instance("a", rows),
                                            cluster_instance("b", rows)};
  const TrainedModel model = train(corpus, "", kWeightsW1, small_gbm());

  std::stringstream buf;
  write_model_json(buf, model);
  const TrainedModel loaded = read_model_json(buf);
  CHECK(loaded.trained_on == model.trained_on);
  for (double signal : {0.1, 0.4, 0.6, 0.9}) {
    const auto row = row_with_signal(signal, 0);
    CHECK(predict(loaded, row).first == doctest::Approx(predict(model, row).first).epsilon(1e-12));
  }
}
