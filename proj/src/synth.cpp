#include "lns/synth.hpp"

#include <cmath>

namespace lns {

namespace {

Variable binary_var(const std::string& name, double obj) {
  Variable v;
  v.name = name;
  v.kind = VarKind::Binary;
  v.lower = 0.0;
  v.upper = 1.0;
  v.obj_coeff = obj;
  return v;
}

}  // namespace

MipModel random_knapsack(int n_binaries, int n_rows, Rng& rng, const std::string& name) {
  MipModel m;
  m.name = name;
  for (int i = 0; i < n_binaries; ++i) {
    const double profit = 1.0 + rng.uniform_int(100);
    m.variables.push_back(binary_var("x" + std::to_string(i + 1), -profit));
  }
  for (int r = 0; r < n_rows; ++r) {
    LinearConstraint c;
    c.sense = RowSense::LessEqual;
    double total = 0.0;
    for (int i = 0; i < n_binaries; ++i) {
      const double w = 1.0 + rng.uniform_int(10);
      c.terms.emplace_back(i, w);
      total += w;
    }
    // capacity admits roughly a quarter of the total weight
    c.rhs = std::floor(0.25 * total);
    m.constraints.push_back(std::move(c));
  }
  return m;
}

MipModel random_binary_mip(int n_binaries, Rng& rng, const std::string& name) {
  MipModel m;
  m.name = name;
  for (int i = 0; i < n_binaries; ++i) {
    const double c = static_cast<double>(rng.uniform_int(21)) - 10.0;
    m.variables.push_back(binary_var("x" + std::to_string(i + 1), c));
  }
  const int n_rows = 1 + rng.uniform_int(3);
  for (int r = 0; r < n_rows; ++r) {
    LinearConstraint c;
    const int pick = rng.uniform_int(10);
    c.sense = pick < 5 ? RowSense::LessEqual : (pick < 9 ? RowSense::GreaterEqual : RowSense::Equal);
    double activity_at_half = 0.0;
    for (int i = 0; i < n_binaries; ++i) {
      const double a = static_cast<double>(rng.uniform_int(11)) - 5.0;
      if (a == 0.0) continue;
      c.terms.emplace_back(i, a);
      activity_at_half += 0.5 * a;
    }
    // anchor the rhs near the centre of the activity range so the row is
    // binding but not hopeless; equality rows are frequently infeasible,
    // which is intended
    c.rhs = std::round(activity_at_half) + rng.uniform_int(7) - 3;
    if (!c.terms.empty()) m.constraints.push_back(std::move(c));
  }
  return m;
}

MipModel planted_knapsack(int n_binaries, Rng& rng, const std::string& name) {
  MipModel m;
  m.name = name;
  const int n_good = std::max(2, n_binaries / 3);
  // bad profits overlap enough to create near-ties and a wide search tree
  for (int i = 0; i < n_binaries; ++i) {
    const bool good = i < n_good;
    const double profit = good ? 80.0 + rng.uniform_int(21) : 20.0 + rng.uniform_int(41);
    m.variables.push_back(binary_var("x" + std::to_string(i + 1), -profit));
  }
  // two resource rows with independent weights; capacities admit the planted
  // block plus a little slack
  for (int r = 0; r < 2; ++r) {
    LinearConstraint c;
    c.sense = RowSense::LessEqual;
    double good_weight = 0.0;
    for (int i = 0; i < n_binaries; ++i) {
      const double w = 6.0 + rng.uniform_int(9);  // 6..14
      c.terms.emplace_back(i, w);
      if (i < n_good) good_weight += w;
    }
    c.rhs = std::floor(good_weight * 1.12);
    m.constraints.push_back(std::move(c));
  }
  return m;
}

}  // namespace lns
