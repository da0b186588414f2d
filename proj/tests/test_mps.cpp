#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <vector>

#include "lns/mps_io.hpp"
#include "lns/rng.hpp"
#include "lns/synth.hpp"

using namespace lns;

namespace {

const char* kFixtureDir = LNS_FIXTURE_DIR;

MipModel parse_fixture(const std::string& name) {
  return parse_mps_file(std::string(kFixtureDir) + "/" + name);
}

void check_round_trip(const MipModel& m) {
  const MipModel again = parse_mps_string(write_mps_string(m));
  CHECK(again == m);
}

}  // namespace

TEST_CASE("hand-written two-variable fixture parses to the expected model") {
  const MipModel m = parse_fixture("basic_lp.mps");
  CHECK(m.name == "basic");
  REQUIRE(m.num_vars() == 2);
  CHECK(m.variables[0].name == "x1");
  CHECK(m.variables[0].kind == VarKind::Binary);
  CHECK(m.variables[0].lower == 0.0);
  CHECK(m.variables[0].upper == 1.0);
  CHECK(m.variables[0].obj_coeff == -3.0);
  CHECK(m.variables[1].name == "x2");
  CHECK(m.variables[1].kind == VarKind::Continuous);
  CHECK(m.variables[1].upper == 10.0);
  CHECK(m.binary_indices() == std::vector<int>{0});
  CHECK(m.continuous_indices() == std::vector<int>{1});
  REQUIRE(m.constraints.size() == 1);
  const LinearConstraint& row = m.constraints[0];
  CHECK(row.sense == RowSense::LessEqual);
  CHECK(row.rhs == 4.0);
  CHECK(row.terms == std::vector<std::pair<int, double>>{{0, 2.0}, {1, 1.0}});
}

TEST_CASE("row senses parse as declared") {
  const MipModel m = parse_fixture("senses.mps");
  REQUIRE(m.constraints.size() == 3);
  CHECK(m.constraints[0].sense == RowSense::LessEqual);
  CHECK(m.constraints[1].sense == RowSense::GreaterEqual);
  CHECK(m.constraints[2].sense == RowSense::Equal);
  CHECK(m.constraints[1].rhs == -5.0);
}

TEST_CASE("integer markers classify columns; [0,1] integers become binary") {
  const MipModel m = parse_fixture("markers.mps");
  CHECK(m.variables[0].kind == VarKind::Integer);
  CHECK(m.variables[0].lower == 2.0);
  CHECK(m.variables[0].upper == 7.0);
  CHECK(m.variables[1].kind == VarKind::Integer);
  CHECK(m.variables[1].upper == 5.0);
  CHECK(m.variables[2].kind == VarKind::Continuous);
}

TEST_CASE("BV bound makes a column binary") {
  const MipModel m = parse_fixture("bounds_bv.mps");
  CHECK(m.variables[0].kind == VarKind::Binary);
  CHECK(m.variables[0].lower == 0.0);
  CHECK(m.variables[0].upper == 1.0);
  CHECK(m.variables[1].kind == VarKind::Continuous);
}

TEST_CASE("LI/UI bounds force integrality") {
  const MipModel m = parse_fixture("bounds_int.mps");
  CHECK(m.variables[0].kind == VarKind::Integer);
  CHECK(m.variables[0].lower == 1.0);
  CHECK(m.variables[0].upper == 4.0);
  CHECK(m.variables[1].kind == VarKind::Integer);
  CHECK(m.variables[1].upper == 3.0);
}

TEST_CASE("bound codes UP/LO/FX/FR/MI/PL behave") {
  const MipModel m = parse_fixture("bounds_all.mps");
  CHECK(m.variables[0].upper == 5.0);
  CHECK(m.variables[1].lower == -2.0);
  CHECK(m.variables[1].upper == 2.0);
  CHECK(m.variables[2].lower == 1.5);
  CHECK(m.variables[2].upper == 1.5);
  CHECK(m.variables[3].lower == -kInfinity);
  CHECK(m.variables[3].upper == kInfinity);
  CHECK(m.variables[4].lower == -kInfinity);
  CHECK(m.variables[4].upper == 0.0);
  CHECK(m.variables[5].lower == 0.0);
  CHECK(m.variables[5].upper == kInfinity);
}

TEST_CASE("ranges expand to a pair of single-sided rows") {
  const MipModel l = parse_fixture("ranges_l.mps");
  REQUIRE(l.constraints.size() == 2);
  CHECK(l.constraints[0].sense == RowSense::LessEqual);
  CHECK(l.constraints[0].rhs == 8.0);
  CHECK(l.constraints[1].sense == RowSense::GreaterEqual);
  CHECK(l.constraints[1].rhs == 5.0);

  const MipModel g = parse_fixture("ranges_g.mps");
  REQUIRE(g.constraints.size() == 2);
  CHECK(g.constraints[0].sense == RowSense::LessEqual);
  CHECK(g.constraints[0].rhs == 6.0);
  CHECK(g.constraints[1].sense == RowSense::GreaterEqual);
  CHECK(g.constraints[1].rhs == 2.0);

  const MipModel e = parse_fixture("ranges_e.mps");
  REQUIRE(e.constraints.size() == 4);
  CHECK(e.constraints[0].rhs == 7.0);  // E1 in [5, 7]
  CHECK(e.constraints[1].rhs == 5.0);
  CHECK(e.constraints[2].rhs == 5.0);  // E2 in [3, 5]
  CHECK(e.constraints[3].rhs == 3.0);
}

TEST_CASE("OBJSENSE MAX negates the objective") {
  const MipModel m = parse_fixture("objsense_max.mps");
  CHECK(m.variables[0].obj_coeff == -5.0);
  CHECK(m.variables[1].obj_coeff == -4.0);
}

TEST_CASE("comments and two pairs per data line are accepted") {
  const MipModel m = parse_fixture("comments.mps");
  CHECK(m.num_vars() == 2);
  REQUIRE(m.constraints.size() == 1);
  CHECK(m.constraints[0].terms.size() == 2);
}

TEST_CASE("round trip is the identity on the whole fixture corpus") {
  const std::vector<std::string> fixtures{
      "basic_lp.mps", "senses.mps",     "markers.mps",      "ranges_l.mps",
      "ranges_g.mps", "ranges_e.mps",   "bounds_all.mps",   "bounds_bv.mps",
      "bounds_int.mps", "objsense_max.mps", "knap3.mps",    "comments.mps"};
  REQUIRE(fixtures.size() >= 10);
  for (const std::string& f : fixtures) {
    CAPTURE(f);
    check_round_trip(parse_fixture(f));
  }
}

TEST_CASE("round trip holds on random generated instances") {
  Rng rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    MipModel m = random_knapsack(3 + rng.uniform_int(12), 1 + rng.uniform_int(3), rng,
                                 "gen" + std::to_string(trial));
    check_round_trip(m);
    MipModel mixed = random_binary_mip(3 + rng.uniform_int(10), rng, "mix" + std::to_string(trial));
    check_round_trip(mixed);
  }
}

namespace {

// every kind and bound shape the writer can emit
MipModel random_variety_model(Rng& rng, const std::string& name) {
  MipModel m;
  m.name = name;
  const int n = 2 + rng.uniform_int(8);
  for (int i = 0; i < n; ++i) {
    Variable v;
    v.name = "v" + std::to_string(i + 1);
    v.obj_coeff = (static_cast<double>(rng.uniform_int(41)) - 20.0) / 4.0;
    switch (rng.uniform_int(3)) {
      case 0:
        v.kind = VarKind::Binary;
        v.lower = 0.0;
        v.upper = 1.0;
        break;
      case 1: {
        v.kind = VarKind::Integer;
        v.lower = static_cast<double>(rng.uniform_int(5)) - 2.0;
        // avoid the [0,1] shape, which canonically parses as binary
        v.upper = v.lower + 2.0 + rng.uniform_int(6);
        break;
      }
      default: {
        v.kind = VarKind::Continuous;
        switch (rng.uniform_int(5)) {
          case 0:  // default [0, inf)
            break;
          case 1:  // boxed
            v.lower = -2.5;
            v.upper = 7.25;
            break;
          case 2:  // free
            v.lower = -kInfinity;
            v.upper = kInfinity;
            break;
          case 3:  // fixed
            v.lower = v.upper = 1.5;
            break;
          default:  // one-sided from below
            v.lower = -kInfinity;
            v.upper = 3.0;
            break;
        }
        break;
      }
    }
    m.variables.push_back(std::move(v));
  }
  const int rows = rng.uniform_int(4);
  for (int r = 0; r < rows; ++r) {
    LinearConstraint c;
    for (int i = 0; i < n; ++i) {
      const double a = (static_cast<double>(rng.uniform_int(17)) - 8.0) / 2.0;
      if (a != 0.0) c.terms.emplace_back(i, a);
    }
    const int s = rng.uniform_int(3);
    c.sense = s == 0 ? RowSense::LessEqual : (s == 1 ? RowSense::GreaterEqual : RowSense::Equal);
    c.rhs = static_cast<double>(rng.uniform_int(21)) - 10.0;
    m.constraints.push_back(std::move(c));
  }
  return m;
}

}  // namespace

TEST_CASE("round trip holds across kinds and bound shapes") {
  Rng rng(4040);
  for (int trial = 0; trial < 60; ++trial)
    check_round_trip(random_variety_model(rng, "var" + std::to_string(trial)));
}

TEST_CASE("writer omits zero coefficients but keeps entry-less columns alive") {
  MipModel m;
  m.name = "zeros";
  Variable v;
  v.name = "z";
  v.kind = VarKind::Continuous;
  v.obj_coeff = 0.0;
  m.variables.push_back(v);
  LinearConstraint c;
  c.terms = {{0, 0.0}};
  c.sense = RowSense::LessEqual;
  c.rhs = 1.0;
  m.constraints.push_back(c);

  const std::string text = write_mps_string(m);
  CHECK(text.find("z OBJ 0") != std::string::npos);  // existence entry
  CHECK(text.find("z R1") == std::string::npos);     // zero term omitted
  const MipModel again = parse_mps_string(text);
  CHECK(again.num_vars() == 1);
  CHECK(again.constraints.size() == 1);
  CHECK(again.constraints[0].terms.empty());
}

TEST_CASE("empty-constraint model writes a valid document") {
  MipModel m;
  m.name = "objonly";
  Variable v;
  v.name = "a";
  v.obj_coeff = 2.5;
  m.variables.push_back(v);
  const std::string text = write_mps_string(m);
  CHECK(text.find("ROWS\n N OBJ\n") != std::string::npos);
  check_round_trip(m);
}

TEST_CASE("parser reports errors with line numbers") {
  const std::string no_endata = "NAME t\nROWS\n N OBJ\nCOLUMNS\n    x OBJ 1\n";
  CHECK_THROWS_AS(parse_mps_string(no_endata), MpsParseError);

  const std::string unknown_section = "NAME t\nROWS\n N OBJ\nGARBAGE\nENDATA\n";
  CHECK_THROWS_AS(parse_mps_string(unknown_section), MpsParseError);

  const std::string dup_row = "NAME t\nROWS\n N OBJ\n L R1\n L R1\nCOLUMNS\n    x R1 1\nENDATA\n";
  CHECK_THROWS_AS(parse_mps_string(dup_row), MpsParseError);

  const std::string rhs_unknown =
      "NAME t\nROWS\n N OBJ\n L R1\nCOLUMNS\n    x R1 1\nRHS\n    RHS NOPE 1\nENDATA\n";
  CHECK_THROWS_AS(parse_mps_string(rhs_unknown), MpsParseError);

  const std::string bad_bound =
      "NAME t\nROWS\n N OBJ\nCOLUMNS\n    x OBJ 1\nBOUNDS\n SC BND x 1\nENDATA\n";
  CHECK_THROWS_AS(parse_mps_string(bad_bound), MpsParseError);

  const std::string sos = "NAME t\nROWS\n N OBJ\nCOLUMNS\n    x OBJ 1\nSOS\nENDATA\n";
  CHECK_THROWS_AS(parse_mps_string(sos), MpsParseError);

  const std::string two_obj = "NAME t\nROWS\n N OBJ\n N OBJ2\nCOLUMNS\n    x OBJ 1\nENDATA\n";
  CHECK_THROWS_AS(parse_mps_string(two_obj), MpsParseError);

  try {
    parse_mps_string(rhs_unknown);
    FAIL("expected a parse error");
  } catch (const MpsParseError& e) {
    CHECK(e.line() == 8);
  }
}
