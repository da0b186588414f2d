#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "lns/features.hpp"

namespace lns {

struct ClassWeights {
  double w0 = 1.0;  // negative class
  double w1 = 1.0;  // positive class
};

// bias presets from the loss-adjustment study
inline constexpr ClassWeights kWeightsUnbiased{1.0, 1.0};
inline constexpr ClassWeights kWeightsW1{0.25, 0.75};
inline constexpr ClassWeights kWeightsW2{0.10, 0.90};
inline constexpr ClassWeights kWeightsW3{0.05, 0.95};

ClassWeights class_weights_preset(const std::string& name);  // none|W1|W2|W3

struct GbmConfig {
  int n_trees = 100;
  int max_depth = 6;
  double learning_rate = 0.1;
  int min_leaf = 20;
  uint64_t seed = 0;
};

// weighted binary cross-entropy of a probability prediction
double weighted_bce(double pred, int label, const ClassWeights& w);

// d/ds of weighted_bce(sigmoid(s), label, w)
double loss_gradient(double raw_score, int label, const ClassWeights& w);

double sigmoid(double s);

struct TreeNode {
  int feature = -1;  // -1: leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;

  double predict(const std::array<double, kFeatureColumns>& x) const;
};

struct TrainedModel {
  double base_score = 0.0;  // log-odds of the weighted prior
  double learning_rate = 0.1;
  ClassWeights weights;
  std::vector<RegressionTree> trees;
  std::vector<std::string> trained_on;  // instance identifiers seen in training
  std::vector<double> round_losses;     // mean training loss after each round

  double raw_score(const std::array<double, kFeatureColumns>& x) const;
  double predict_prob(const std::array<double, kFeatureColumns>& x) const;
};

// First-order gradient boosting on the weighted logistic loss with
// depth-limited regression trees (variance-reduction splits, constant
// leaf values). Rows of `exclude` never enter training. Deterministic.
TrainedModel train(const std::vector<InstanceDataset>& corpus, const std::string& exclude,
                   const ClassWeights& w, const GbmConfig& cfg);

// (probability, hard label); hard = 1 iff probability >= 0.5
std::pair<double, int> predict(const TrainedModel& model, const VariableFeatureRow& row);

struct EvalReport {
  double balanced_accuracy = 0.0;
  double fnr = 0.0;
  double fpr = 0.0;
  long tp = 0, fp = 0, tn = 0, fn = 0;
  // set when only one class is present; balanced accuracy is then the
  // present class's recall alone
  bool single_class = false;
};

EvalReport evaluate(std::span<const int> preds, std::span<const int> labels);

// JSON (de)serialization of a trained model
void write_model_json(std::ostream& out, const TrainedModel& model);
TrainedModel read_model_json(std::istream& in);

}  // namespace lns
