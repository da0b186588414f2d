#pragma once

#include <limits>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace lns {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kIntegralityTol = 1e-6;
inline constexpr double kFeasibilityTol = 1e-6;
// candidate must beat the incumbent by more than this to be accepted
inline constexpr double kImprovementTol = 1e-9;

enum class VarKind { Binary, Integer, Continuous };

struct Variable {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lower = 0.0;
  double upper = kInfinity;
  double obj_coeff = 0.0;

  bool operator==(const Variable&) const = default;
};

enum class RowSense { LessEqual, Equal, GreaterEqual };

struct LinearConstraint {
  // (variable index, coefficient), ascending index, no duplicates
  std::vector<std::pair<int, double>> terms;
  RowSense sense = RowSense::LessEqual;
  double rhs = 0.0;

  double activity(std::span<const double> x) const;
  bool satisfied(std::span<const double> x, double tol = kFeasibilityTol) const;

  bool operator==(const LinearConstraint&) const = default;
};

// Minimization-only MIP. Maximization inputs are negated at parse time.
struct MipModel {
  std::string name;
  std::vector<Variable> variables;
  std::vector<LinearConstraint> constraints;

  int num_vars() const { return static_cast<int>(variables.size()); }
  std::vector<int> binary_indices() const;
  std::vector<int> integer_indices() const;
  std::vector<int> continuous_indices() const;

  double objective_value(std::span<const double> x) const;
  bool is_integral(std::span<const double> x, double tol = kIntegralityTol) const;
  // bounds + integrality + constraints, all within tol
  bool is_feasible(std::span<const double> x, double tol = kFeasibilityTol) const;

  // throws std::invalid_argument when a structural invariant is broken
  void validate() const;

  bool operator==(const MipModel&) const = default;
};

enum class SolutionKind { Feasible, Fractional };

struct Solution {
  std::vector<double> values;
  double objective = 0.0;
  SolutionKind kind = SolutionKind::Fractional;
  double time_offset = 0.0;  // seconds since run start

  bool operator==(const Solution&) const = default;
};

// Builds a Solution with the objective recomputed from the model.
Solution make_solution(const MipModel& model, std::vector<double> values,
                       SolutionKind kind, double time_offset = 0.0);

struct FixEntry {
  int index = 0;
  int value = 0;  // 0 or 1

  bool operator==(const FixEntry&) const = default;
};

struct FixingSet {
  std::vector<FixEntry> entries;  // unique indices

  int size() const { return static_cast<int>(entries.size()); }
  bool contains(int index) const;
};

struct SoftLbCut {
  Solution reference;
  double radius = 0.0;  // k_LB
};

// Either a hard fixing of binary variables or a soft local-branching ball.
struct NeighbourhoodCut {
  std::variant<FixingSet, SoftLbCut> cut;

  static NeighbourhoodCut hard_fix(FixingSet fs) { return {std::move(fs)}; }
  static NeighbourhoodCut soft_lb(Solution reference, double radius) {
    return {SoftLbCut{std::move(reference), radius}};
  }

  bool is_hard_fix() const { return std::holds_alternative<FixingSet>(cut); }
  const FixingSet& hard() const { return std::get<FixingSet>(cut); }
  const SoftLbCut& soft() const { return std::get<SoftLbCut>(cut); }
};

// Continuous relaxation: every variable becomes continuous, binaries keep
// [0,1], everything else keeps its bounds. Idempotent.
MipModel relax(const MipModel& model);

// Number of variables to destroy / fix for a fixing ratio. k_f rounds
// half-up; k_d = |B| - k_f. Throws std::invalid_argument outside [0,1].
std::pair<int, int> fixing_counts(int num_binaries, double ratio);

// Returns a copy of the model with the cut applied. Hard fixes become bound
// tightenings; the soft cut adds one linear row over the binaries.
MipModel apply_cut(const MipModel& model, const NeighbourhoodCut& cut);

// Sum of |a_i - b_i| over the given indices.
double l1_distance(const Solution& a, const Solution& b, std::span<const int> indices);

// Value of sum_i x_i(1 - x'_i) + (1 - x_i)x'_i over the binaries, with x'
// the reference solution rounded to {0,1}.
double local_branching_lhs(const Solution& reference, std::span<const double> x,
                           std::span<const int> binaries);

}  // namespace lns
