#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>

#include "lns/mps_io.hpp"
#include "lns/rng.hpp"
#include "lns/solver.hpp"
#include "lns/synth.hpp"

using namespace lns;

namespace {

const char* kFixtureDir = LNS_FIXTURE_DIR;

BackendConfig quick(double seconds = 30.0) {
  BackendConfig cfg;
  cfg.time_limit = seconds;
  return cfg;
}

}  // namespace

TEST_CASE("toy knapsack solves to the enumeration optimum") {
  const MipModel m = parse_mps_file(std::string(kFixtureDir) + "/knap3.mps");
  ReferenceSolver solver;
  const SolveOutcome bb = solver.solve_mip(m, std::nullopt, quick());
  const SolveOutcome exact = enumerate_oracle(m);
  REQUIRE(bb.status == SolveStatus::Optimal);
  REQUIRE(exact.status == SolveStatus::Optimal);
  CHECK(bb.best->objective == doctest::Approx(exact.best->objective).epsilon(1e-12));
  CHECK(bb.best->objective == doctest::Approx(-12.0));
  CHECK(bb.bound <= bb.best->objective + 1e-6);
}

TEST_CASE("all binaries fixed reduces to a single LP") {
  MipModel m = parse_mps_file(std::string(kFixtureDir) + "/knap3.mps");
  for (Variable& v : m.variables) {
    v.lower = 1.0;
    v.upper = 1.0;
  }
  ReferenceSolver solver;
  // total weight 9 > 5: fixing everything to one is infeasible
  CHECK(solver.solve_mip(m, std::nullopt, quick()).status == SolveStatus::Infeasible);

  for (Variable& v : m.variables) {
    v.lower = 0.0;
    v.upper = 0.0;
  }
  const SolveOutcome zero = solver.solve_mip(m, std::nullopt, quick());
  REQUIRE(zero.status == SolveStatus::Optimal);
  CHECK(zero.best->objective == doctest::Approx(0.0));
}

TEST_CASE("contradictory fixing is infeasible") {
  MipModel m;
  m.name = "contradiction";
  Variable v;
  v.name = "x1";
  v.kind = VarKind::Binary;
  v.upper = 1.0;
  m.variables.push_back(v);
  LinearConstraint c;
  c.terms = {{0, 1.0}};
  c.sense = RowSense::GreaterEqual;
  c.rhs = 1.0;
  m.constraints.push_back(c);
  m.variables[0].lower = 0.0;
  m.variables[0].upper = 0.0;  // x1 = 0 vs row x1 >= 1
  ReferenceSolver solver;
  CHECK(solver.solve_mip(m, std::nullopt, quick()).status == SolveStatus::Infeasible);
}

TEST_CASE("enumeration oracle handles the trivial cases") {
  MipModel m;
  m.name = "single";
  Variable v;
  v.name = "x";
  v.kind = VarKind::Binary;
  v.upper = 1.0;
  v.obj_coeff = -1.0;
  m.variables.push_back(v);
  const SolveOutcome out = enumerate_oracle(m);
  REQUIRE(out.status == SolveStatus::Optimal);
  CHECK(out.best->objective == -1.0);
  CHECK(out.best->values[0] == 1.0);

  LinearConstraint impossible;
  impossible.terms = {{0, 1.0}};
  impossible.sense = RowSense::GreaterEqual;
  impossible.rhs = 2.0;
  m.constraints.push_back(impossible);
  CHECK(enumerate_oracle(m).status == SolveStatus::Infeasible);

  Variable cont;
  cont.name = "c";
  cont.kind = VarKind::Continuous;
  m.variables.push_back(cont);
  CHECK_THROWS_AS(enumerate_oracle(m), std::invalid_argument);
}

TEST_CASE("branch and bound equals enumeration on random pure-binary instances") {
  Rng rng(2024);
  ReferenceSolver solver;
  for (int trial = 0; trial < 100; ++trial) {
    const MipModel m = trial % 2 == 0
                           ? random_knapsack(3 + rng.uniform_int(10), 1 + rng.uniform_int(3), rng)
                           : random_binary_mip(3 + rng.uniform_int(10), rng);
    CAPTURE(trial);
    const SolveOutcome exact = enumerate_oracle(m);
    const SolveOutcome bb = solver.solve_mip(m, std::nullopt, quick());
    REQUIRE(bb.status == exact.status);
    if (exact.status == SolveStatus::Optimal) {
      CHECK(std::abs(bb.best->objective - exact.best->objective) <= 1e-9);
      CHECK(bb.bound <= bb.best->objective + 1e-6);
    }
  }
}

namespace {

// Independent route for mixed-integer models: enumerate every assignment of
// the binary/integer grid, fix it via bounds, and optimize the continuous
// remainder as an LP. Cross-checks the branch-and-bound search logic.
SolveOutcome grid_enumerate(const MipModel& model, ReferenceSolver& solver) {
  std::vector<int> grid_vars;
  for (int i = 0; i < model.num_vars(); ++i)
    if (model.variables[i].kind != VarKind::Continuous) grid_vars.push_back(i);

  SolveOutcome best;
  best.status = SolveStatus::Infeasible;
  best.bound = kInfinity;

  std::vector<int> point(grid_vars.size(), 0);
  const BackendConfig cfg{};
  std::function<void(size_t)> walk = [&](size_t depth) {
    if (depth == grid_vars.size()) {
      MipModel fixed = relax(model);
      for (size_t k = 0; k < grid_vars.size(); ++k) {
        fixed.variables[grid_vars[k]].lower = point[k];
        fixed.variables[grid_vars[k]].upper = point[k];
      }
      const SolveOutcome lp = solver.solve_lp(fixed, cfg);
      if (lp.status != SolveStatus::Optimal) return;
      if (best.status != SolveStatus::Optimal ||
          lp.best->objective < best.best->objective - 1e-12) {
        best.status = SolveStatus::Optimal;
        best.best = lp.best;
        best.bound = lp.best->objective;
      }
      return;
    }
    const int i = grid_vars[depth];
    const int lo = static_cast<int>(model.variables[i].lower);
    const int hi = static_cast<int>(model.variables[i].upper);
    for (int v = lo; v <= hi; ++v) {
      point[depth] = v;
      walk(depth + 1);
    }
  };
  walk(0);
  return best;
}

MipModel random_mixed_mip(Rng& rng, const std::string& name) {
  MipModel m;
  m.name = name;
  const int n_bin = 2 + rng.uniform_int(4);
  const int n_int = 1 + rng.uniform_int(2);
  const int n_cont = rng.uniform_int(3);
  for (int i = 0; i < n_bin; ++i) {
    Variable v;
    v.name = "b" + std::to_string(i + 1);
    v.kind = VarKind::Binary;
    v.upper = 1.0;
    v.obj_coeff = static_cast<double>(rng.uniform_int(21)) - 10.0;
    m.variables.push_back(v);
  }
  for (int i = 0; i < n_int; ++i) {
    Variable v;
    v.name = "q" + std::to_string(i + 1);
    v.kind = VarKind::Integer;
    v.lower = 0.0;
    v.upper = 2.0 + rng.uniform_int(2);
    v.obj_coeff = static_cast<double>(rng.uniform_int(11)) - 5.0;
    m.variables.push_back(v);
  }
  for (int i = 0; i < n_cont; ++i) {
    Variable v;
    v.name = "w" + std::to_string(i + 1);
    v.kind = VarKind::Continuous;
    v.lower = 0.0;
    v.upper = 5.0;
    v.obj_coeff = static_cast<double>(rng.uniform_int(9)) - 4.0;
    m.variables.push_back(v);
  }
  const int rows = 1 + rng.uniform_int(3);
  for (int r = 0; r < rows; ++r) {
    LinearConstraint c;
    double mid = 0.0;
    for (int i = 0; i < m.num_vars(); ++i) {
      const double a = static_cast<double>(rng.uniform_int(9)) - 4.0;
      if (a == 0.0) continue;
      c.terms.emplace_back(i, a);
      mid += 0.5 * a * (m.variables[i].lower + m.variables[i].upper);
    }
    if (c.terms.empty()) continue;
    c.sense = rng.bernoulli(0.5) ? RowSense::LessEqual : RowSense::GreaterEqual;
    c.rhs = std::round(mid) + rng.uniform_int(5) - 2;
    m.constraints.push_back(std::move(c));
  }
  return m;
}

}  // namespace

TEST_CASE("branch and bound matches grid enumeration on mixed-integer models") {
  Rng rng(1717);
  ReferenceSolver solver;
  int optimal_seen = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const MipModel m = random_mixed_mip(rng, "mixed" + std::to_string(trial));
    CAPTURE(trial);
    const SolveOutcome exact = grid_enumerate(m, solver);
    const SolveOutcome bb = solver.solve_mip(m, std::nullopt, quick());
    REQUIRE(bb.status == exact.status);
    if (exact.status == SolveStatus::Optimal) {
      ++optimal_seen;
      CHECK(std::abs(bb.best->objective - exact.best->objective) <= 1e-6);
      CHECK(m.is_feasible(bb.best->values));
    }
  }
  CHECK(optimal_seen > 10);
}

TEST_CASE("observer sees fractional node solutions and the final incumbent") {
  Rng rng(5);
  const MipModel m = random_knapsack(12, 2, rng);
  ReferenceSolver solver;
  std::vector<Solution> seen;
  const SolveOutcome out = solver.solve_mip(m, std::nullopt, quick(), [&seen](const Solution& s) {
    seen.push_back(s);
  });
  REQUIRE(out.status == SolveStatus::Optimal);
  bool any_fractional = false;
  const Solution* last_feasible = nullptr;
  for (const Solution& s : seen) {
    if (s.kind == SolutionKind::Fractional) any_fractional = true;
    if (s.kind == SolutionKind::Feasible) last_feasible = &s;
  }
  CHECK(any_fractional);
  REQUIRE(last_feasible != nullptr);
  CHECK(last_feasible->objective == doctest::Approx(out.best->objective));
  CHECK(out.observed.size() == seen.size());
  for (size_t i = 1; i < out.observed.size(); ++i)
    CHECK(out.observed[i - 1].time_offset <= out.observed[i].time_offset);
}

TEST_CASE("warm start becomes the first incumbent and is never lost") {
  Rng rng(6);
  const MipModel m = random_knapsack(10, 1, rng);
  ReferenceSolver solver;
  const std::vector<double> zeros(m.num_vars(), 0.0);
  const Solution warm = make_solution(m, zeros, SolutionKind::Feasible);

  std::vector<Solution> seen;
  const SolveOutcome out = solver.solve_mip(m, warm, quick(), [&seen](const Solution& s) {
    seen.push_back(s);
  });
  REQUIRE(!seen.empty());
  CHECK(seen.front().kind == SolutionKind::Feasible);
  CHECK(seen.front().objective == doctest::Approx(0.0));
  REQUIRE(out.best.has_value());
  CHECK(out.best->objective <= warm.objective + 1e-12);

  Solution wrong_size = warm;
  wrong_size.values.pop_back();
  CHECK_THROWS_AS(solver.solve_mip(m, wrong_size, quick()), std::invalid_argument);
}

TEST_CASE("node limit stops the search with a limit status") {
  Rng rng(7);
  const MipModel m = random_knapsack(16, 3, rng);
  ReferenceSolver solver;
  BackendConfig cfg = quick();
  cfg.node_limit = 1;
  const SolveOutcome out = solver.solve_mip(m, std::nullopt, cfg);
  CHECK((out.status == SolveStatus::FeasibleLimit || out.status == SolveStatus::NoSolutionLimit));
}

TEST_CASE("lp entry point mirrors the simplex statuses") {
  ReferenceSolver solver;
  MipModel m;
  m.name = "lp";
  Variable x;
  x.name = "x";
  x.kind = VarKind::Continuous;
  x.lower = 0.0;
  x.upper = kInfinity;
  x.obj_coeff = -1.0;
  m.variables.push_back(x);
  CHECK(solver.solve_lp(m, quick()).status == SolveStatus::Unbounded);

  m.variables[0].upper = 2.0;
  const SolveOutcome out = solver.solve_lp(m, quick());
  REQUIRE(out.status == SolveStatus::Optimal);
  CHECK(out.best->objective == doctest::Approx(-2.0));
  CHECK(out.bound == doctest::Approx(-2.0));
}
