#include "lns/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace lns {

double LinearConstraint::activity(std::span<const double> x) const {
  double a = 0.0;
  for (const auto& [idx, coeff] : terms) a += coeff * x[idx];
  return a;
}

bool LinearConstraint::satisfied(std::span<const double> x, double tol) const {
  const double a = activity(x);
  switch (sense) {
    case RowSense::LessEqual:
      return a <= rhs + tol;
    case RowSense::GreaterEqual:
      return a >= rhs - tol;
    case RowSense::Equal:
      return std::abs(a - rhs) <= tol;
  }
  return false;
}

std::vector<int> MipModel::binary_indices() const {
  std::vector<int> out;
  for (int i = 0; i < num_vars(); ++i)
    if (variables[i].kind == VarKind::Binary) out.push_back(i);
  return out;
}

std::vector<int> MipModel::integer_indices() const {
  std::vector<int> out;
  for (int i = 0; i < num_vars(); ++i)
    if (variables[i].kind == VarKind::Integer) out.push_back(i);
  return out;
}

std::vector<int> MipModel::continuous_indices() const {
  std::vector<int> out;
  for (int i = 0; i < num_vars(); ++i)
    if (variables[i].kind == VarKind::Continuous) out.push_back(i);
  return out;
}

double MipModel::objective_value(std::span<const double> x) const {
  double obj = 0.0;
  for (int i = 0; i < num_vars(); ++i) obj += variables[i].obj_coeff * x[i];
  return obj;
}

bool MipModel::is_integral(std::span<const double> x, double tol) const {
  for (int i = 0; i < num_vars(); ++i) {
    if (variables[i].kind == VarKind::Continuous) continue;
    if (std::abs(x[i] - std::round(x[i])) > tol) return false;
  }
  return true;
}

bool MipModel::is_feasible(std::span<const double> x, double tol) const {
  if (static_cast<int>(x.size()) != num_vars()) return false;
  for (int i = 0; i < num_vars(); ++i) {
    const Variable& v = variables[i];
    if (x[i] < v.lower - tol || x[i] > v.upper + tol) return false;
  }
  if (!is_integral(x, tol)) return false;
  for (const LinearConstraint& c : constraints)
    if (!c.satisfied(x, tol)) return false;
  return true;
}

void MipModel::validate() const {
  std::unordered_set<std::string> names;
  for (const Variable& v : variables) {
    if (!names.insert(v.name).second)
      throw std::invalid_argument("duplicate variable name: " + v.name);
    if (v.lower > v.upper)
      throw std::invalid_argument("variable " + v.name + " has lower > upper");
    if (v.kind == VarKind::Binary && (v.lower != 0.0 || v.upper != 1.0))
      throw std::invalid_argument("binary variable " + v.name + " must have bounds [0,1]");
  }
  for (const LinearConstraint& c : constraints) {
    int prev = -1;
    for (const auto& [idx, coeff] : c.terms) {
      (void)coeff;
      if (idx < 0 || idx >= num_vars())
        throw std::invalid_argument("constraint term index out of range");
      if (idx <= prev)
        throw std::invalid_argument("constraint terms must be strictly ascending by index");
      prev = idx;
    }
  }
}

Solution make_solution(const MipModel& model, std::vector<double> values,
                       SolutionKind kind, double time_offset) {
  if (static_cast<int>(values.size()) != model.num_vars())
    throw std::invalid_argument("solution length does not match variable count");
  Solution s;
  s.objective = model.objective_value(values);
  s.values = std::move(values);
  s.kind = kind;
  s.time_offset = time_offset;
  return s;
}

bool FixingSet::contains(int index) const {
  return std::any_of(entries.begin(), entries.end(),
                     [index](const FixEntry& e) { return e.index == index; });
}

MipModel relax(const MipModel& model) {
  MipModel out = model;
  for (Variable& v : out.variables) v.kind = VarKind::Continuous;
  return out;
}

std::pair<int, int> fixing_counts(int num_binaries, double ratio) {
  if (!(ratio >= 0.0 && ratio <= 1.0))
    throw std::invalid_argument("fixing ratio must lie in [0,1]");
  const int k_f = static_cast<int>(std::floor(num_binaries * ratio + 0.5));
  return {num_binaries - k_f, k_f};
}

MipModel apply_cut(const MipModel& model, const NeighbourhoodCut& cut) {
  MipModel out = model;
  if (cut.is_hard_fix()) {
    for (const FixEntry& e : cut.hard().entries) {
      if (e.index < 0 || e.index >= out.num_vars() ||
          out.variables[e.index].kind != VarKind::Binary)
        throw std::invalid_argument("hard fix index is not a binary variable");
      out.variables[e.index].lower = static_cast<double>(e.value);
      out.variables[e.index].upper = static_cast<double>(e.value);
    }
    return out;
  }

  // local branching:  sum_B x_i(1-x'_i) + (1-x_i)x'_i <= k_LB
  // expands to +x_i where x'_i = 0 and -x_i where x'_i = 1,
  // rhs = k_LB - |{i : x'_i = 1}|
  const SoftLbCut& lb = cut.soft();
  if (static_cast<int>(lb.reference.values.size()) != model.num_vars())
    throw std::invalid_argument("soft cut reference length mismatch");
  LinearConstraint row;
  row.sense = RowSense::LessEqual;
  int ones = 0;
  for (int i = 0; i < model.num_vars(); ++i) {
    if (model.variables[i].kind != VarKind::Binary) continue;
    const int ref = static_cast<int>(std::round(lb.reference.values[i]));
    if (ref == 1) {
      row.terms.emplace_back(i, -1.0);
      ++ones;
    } else {
      row.terms.emplace_back(i, 1.0);
    }
  }
  row.rhs = lb.radius - static_cast<double>(ones);
  out.constraints.push_back(std::move(row));
  return out;
}

double l1_distance(const Solution& a, const Solution& b, std::span<const int> indices) {
  if (a.values.size() != b.values.size())
    throw std::invalid_argument("solutions have different lengths");
  double d = 0.0;
  for (int i : indices) d += std::abs(a.values[i] - b.values[i]);
  return d;
}

double local_branching_lhs(const Solution& reference, std::span<const double> x,
                           std::span<const int> binaries) {
  double lhs = 0.0;
  for (int i : binaries) {
    const int ref = static_cast<int>(std::round(reference.values[i]));
    lhs += ref == 1 ? 1.0 - x[i] : x[i];
  }
  return lhs;
}

}  // namespace lns
