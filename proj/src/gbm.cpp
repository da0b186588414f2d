#include "lns/gbm.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace lns {

ClassWeights class_weights_preset(const std::string& name) {
  if (name == "none" || name.empty()) return kWeightsUnbiased;
  if (name == "W1" || name == "w1") return kWeightsW1;
  if (name == "W2" || name == "w2") return kWeightsW2;
  if (name == "W3" || name == "w3") return kWeightsW3;
  throw std::invalid_argument("unknown class weight preset: " + name);
}

double sigmoid(double s) { return 1.0 / (1.0 + std::exp(-s)); }

double weighted_bce(double pred, int label, const ClassWeights& w) {
  const double p = std::clamp(pred, 1e-12, 1.0 - 1e-12);
  return -w.w1 * label * std::log(p) - w.w0 * (1 - label) * std::log(1.0 - p);
}

double loss_gradient(double raw_score, int label, const ClassWeights& w) {
  const double s = sigmoid(raw_score);
  return w.w1 * label * (s - 1.0) + w.w0 * (1 - label) * s;
}

double RegressionTree::predict(const std::array<double, kFeatureColumns>& x) const {
  int node = 0;
  while (nodes[node].feature >= 0) {
    const TreeNode& n = nodes[node];
    node = x[n.feature] <= n.threshold ? n.left : n.right;
  }
  return nodes[node].value;
}

double TrainedModel::raw_score(const std::array<double, kFeatureColumns>& x) const {
  double s = base_score;
  for (const RegressionTree& t : trees) s += learning_rate * t.predict(x);
  return s;
}

double TrainedModel::predict_prob(const std::array<double, kFeatureColumns>& x) const {
  return sigmoid(raw_score(x));
}

namespace {

struct TrainRow {
  std::array<double, kFeatureColumns> x;
  int label;
};

// recursive CART fit on residuals: squared-error splits, constant leaves
struct TreeBuilder {
  const std::vector<TrainRow>& rows;
  const std::vector<double>& residual;
  const GbmConfig& cfg;
  RegressionTree tree;

  int build(std::vector<int> idx, int depth) {
    double sum = 0.0;
    for (int i : idx) sum += residual[i];
    const double mean = sum / static_cast<double>(idx.size());

    const int node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({});
    tree.nodes[node_id].value = mean;

    if (depth >= cfg.max_depth || static_cast<int>(idx.size()) < 2 * cfg.min_leaf)
      return node_id;

    // parent SSE around the mean
    double parent_sse = 0.0;
    for (int i : idx) parent_sse += (residual[i] - mean) * (residual[i] - mean);
    if (parent_sse <= 1e-12) return node_id;

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_sse = parent_sse - 1e-9;

    std::vector<int> order = idx;
    for (int f = 0; f < kFeatureColumns; ++f) {
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (rows[a].x[f] != rows[b].x[f]) return rows[a].x[f] < rows[b].x[f];
        return a < b;
      });
      // prefix sums let every split position be scored in O(1)
      double left_sum = 0.0, left_sq = 0.0;
      double total_sum = 0.0, total_sq = 0.0;
      for (int i : order) {
        total_sum += residual[i];
        total_sq += residual[i] * residual[i];
      }
      const int n = static_cast<int>(order.size());
      for (int pos = 0; pos < n - 1; ++pos) {
        const double r = residual[order[pos]];
        left_sum += r;
        left_sq += r * r;
        const double xa = rows[order[pos]].x[f];
        const double xb = rows[order[pos + 1]].x[f];
        if (xa == xb) continue;  // can't split between equal values
        const int ln = pos + 1;
        const int rn = n - ln;
        if (ln < cfg.min_leaf || rn < cfg.min_leaf) continue;
        const double right_sum = total_sum - left_sum;
        const double right_sq = total_sq - left_sq;
        const double sse = (left_sq - left_sum * left_sum / ln) +
                           (right_sq - right_sum * right_sum / rn);
        if (sse < best_sse) {
          best_sse = sse;
          best_feature = f;
          best_threshold = 0.5 * (xa + xb);
        }
      }
    }

    if (best_feature < 0) return node_id;

    std::vector<int> left_idx, right_idx;
    for (int i : idx) {
      if (rows[i].x[best_feature] <= best_threshold)
        left_idx.push_back(i);
      else
        right_idx.push_back(i);
    }
    const int left = build(std::move(left_idx), depth + 1);
    const int right = build(std::move(right_idx), depth + 1);
    tree.nodes[node_id].feature = best_feature;
    tree.nodes[node_id].threshold = best_threshold;
    tree.nodes[node_id].left = left;
    tree.nodes[node_id].right = right;
    return node_id;
  }
};

}  // namespace

TrainedModel train(const std::vector<InstanceDataset>& corpus, const std::string& exclude,
                   const ClassWeights& w, const GbmConfig& cfg) {
  std::vector<TrainRow> rows;
  std::vector<std::string> trained_on;
  for (const InstanceDataset& ds : corpus) {
    if (ds.instance == exclude) continue;  // leave-one-instance-out hygiene
    bool any = false;
    for (const VariableFeatureRow& r : ds.rows) {
      if (!r.label) throw std::invalid_argument("training row without a label in " + ds.instance);
      rows.push_back({feature_vector(r), *r.label});
      any = true;
    }
    if (any) trained_on.push_back(ds.instance);
  }
  if (rows.empty()) throw std::invalid_argument("no training rows after excluding " + exclude);

  TrainedModel model;
  model.learning_rate = cfg.learning_rate;
  model.weights = w;
  model.trained_on = std::move(trained_on);

  // log-odds of the weighted prior minimizes the constant-score loss
  double pos = 0.0, neg = 0.0;
  for (const TrainRow& r : rows) (r.label ? pos : neg) += 1.0;
  const double prior = (w.w1 * pos) / (w.w1 * pos + w.w0 * neg);
  const double clamped = std::clamp(prior, 1e-12, 1.0 - 1e-12);
  model.base_score = std::log(clamped / (1.0 - clamped));

  const int n = static_cast<int>(rows.size());
  std::vector<double> score(n, model.base_score);
  std::vector<double> residual(n, 0.0);
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);

  auto mean_loss = [&]() {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += weighted_bce(sigmoid(score[i]), rows[i].label, w);
    return total / n;
  };
  model.round_losses.reserve(cfg.n_trees + 1);
  model.round_losses.push_back(mean_loss());

  for (int round = 0; round < cfg.n_trees; ++round) {
    for (int i = 0; i < n; ++i) residual[i] = -loss_gradient(score[i], rows[i].label, w);
    TreeBuilder builder{rows, residual, cfg, {}};
    builder.build(all, 0);
    for (int i = 0; i < n; ++i) score[i] += cfg.learning_rate * builder.tree.predict(rows[i].x);
    model.trees.push_back(std::move(builder.tree));
    model.round_losses.push_back(mean_loss());
  }
  return model;
}

std::pair<double, int> predict(const TrainedModel& model, const VariableFeatureRow& row) {
  const double prob = model.predict_prob(feature_vector(row));
  return {prob, prob >= 0.5 ? 1 : 0};
}

EvalReport evaluate(std::span<const int> preds, std::span<const int> labels) {
  if (preds.empty() || preds.size() != labels.size())
    throw std::invalid_argument("evaluate needs equal-length non-empty inputs");
  EvalReport rep;
  for (size_t i = 0; i < preds.size(); ++i) {
    if (labels[i] == 1)
      (preds[i] == 1 ? rep.tp : rep.fn) += 1;
    else
      (preds[i] == 1 ? rep.fp : rep.tn) += 1;
  }
  const long pos = rep.tp + rep.fn;
  const long neg = rep.fp + rep.tn;
  rep.single_class = pos == 0 || neg == 0;
  rep.fnr = pos > 0 ? static_cast<double>(rep.fn) / pos : 0.0;
  rep.fpr = neg > 0 ? static_cast<double>(rep.fp) / neg : 0.0;
  if (rep.single_class) {
    rep.balanced_accuracy = pos > 0 ? 1.0 - rep.fnr : 1.0 - rep.fpr;
  } else {
    rep.balanced_accuracy = ((1.0 - rep.fnr) + (1.0 - rep.fpr)) / 2.0;
  }
  return rep;
}

void write_model_json(std::ostream& out, const TrainedModel& model) {
  nlohmann::json trees = nlohmann::json::array();
  for (const RegressionTree& t : model.trees) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const TreeNode& n : t.nodes)
      nodes.push_back({{"f", n.feature},
                       {"t", n.threshold},
                       {"l", n.left},
                       {"r", n.right},
                       {"v", n.value}});
    trees.push_back(std::move(nodes));
  }
  nlohmann::json j{{"base_score", model.base_score},
                   {"learning_rate", model.learning_rate},
                   {"w0", model.weights.w0},
                   {"w1", model.weights.w1},
                   {"trained_on", model.trained_on},
                   {"trees", std::move(trees)}};
  out << j.dump(2) << "\n";
}

TrainedModel read_model_json(std::istream& in) {
  nlohmann::json j;
  in >> j;
  TrainedModel model;
  model.base_score = j.at("base_score").get<double>();
  model.learning_rate = j.at("learning_rate").get<double>();
  model.weights.w0 = j.at("w0").get<double>();
  model.weights.w1 = j.at("w1").get<double>();
  model.trained_on = j.at("trained_on").get<std::vector<std::string>>();
  for (const auto& tj : j.at("trees")) {
    RegressionTree t;
    for (const auto& nj : tj) {
      TreeNode n;
      n.feature = nj.at("f").get<int>();
      n.threshold = nj.at("t").get<double>();
      n.left = nj.at("l").get<int>();
      n.right = nj.at("r").get<int>();
      n.value = nj.at("v").get<double>();
      t.nodes.push_back(n);
    }
    model.trees.push_back(std::move(t));
  }
  return model;
}

}  // namespace lns
