#include "lns/mps_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace lns {

namespace {

enum class Section { None, Name, ObjSense, Rows, Columns, Rhs, Ranges, Bounds, Endata };

struct RowDef {
  std::string name;
  RowSense sense = RowSense::LessEqual;
  std::vector<std::pair<int, double>> terms;
  double rhs = 0.0;
  bool has_range = false;
  double range = 0.0;
};

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream iss(line);
  std::string t;
  while (iss >> t) toks.push_back(t);
  return toks;
}

double parse_value(const std::string& tok, int line) {
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw MpsParseError(line, "expected a number, got '" + tok + "'");
  }
  if (pos != tok.size()) throw MpsParseError(line, "trailing characters in number '" + tok + "'");
  return v;
}

struct ParserState {
  std::string model_name;
  bool maximize = false;
  std::vector<RowDef> rows;  // declaration order, objective excluded
  std::unordered_map<std::string, int> row_index;
  int objective_row = -1;  // sentinel: objective handled separately
  std::string objective_name;
  std::vector<Variable> columns;
  std::unordered_map<std::string, int> col_index;
  bool saw_endata = false;

  int column(const std::string& name, bool integer_mode, int line) {
    auto it = col_index.find(name);
    if (it != col_index.end()) {
      const bool was_integer = columns[it->second].kind == VarKind::Integer;
      if (was_integer != integer_mode)
        throw MpsParseError(line, "column '" + name + "' changes integrality marker state");
      return it->second;
    }
    Variable v;
    v.name = name;
    v.kind = integer_mode ? VarKind::Integer : VarKind::Continuous;
    v.lower = 0.0;
    v.upper = kInfinity;  // marker integers default to [0, inf) as well
    columns.push_back(std::move(v));
    col_index.emplace(name, static_cast<int>(columns.size()) - 1);
    return static_cast<int>(columns.size()) - 1;
  }
};

void add_coefficient(ParserState& st, int col, const std::string& row_name, double value,
                     int line) {
  if (st.objective_name == row_name) {
    st.columns[col].obj_coeff += value;
    return;
  }
  auto it = st.row_index.find(row_name);
  if (it == st.row_index.end())
    throw MpsParseError(line, "coefficient for unknown row '" + row_name + "'");
  auto& terms = st.rows[it->second].terms;
  // duplicate (column,row) entries are summed, as common readers do
  for (auto& [idx, coeff] : terms) {
    if (idx == col) {
      coeff += value;
      return;
    }
  }
  terms.emplace_back(col, value);
}

void apply_bound(ParserState& st, const std::string& code, int col, bool has_value, double value,
                 int line) {
  Variable& v = st.columns[col];
  auto need_value = [&] {
    if (!has_value) throw MpsParseError(line, "bound code " + code + " requires a value");
  };
  if (code == "UP") {
    need_value();
    v.upper = value;
  } else if (code == "LO") {
    need_value();
    v.lower = value;
  } else if (code == "FX") {
    need_value();
    v.lower = v.upper = value;
  } else if (code == "FR") {
    v.lower = -kInfinity;
    v.upper = kInfinity;
  } else if (code == "MI") {
    v.lower = -kInfinity;
  } else if (code == "PL") {
    v.upper = kInfinity;
  } else if (code == "BV") {
    v.kind = VarKind::Integer;
    v.lower = 0.0;
    v.upper = 1.0;
  } else if (code == "LI") {
    need_value();
    if (v.kind != VarKind::Integer) v.kind = VarKind::Integer;
    v.lower = value;
  } else if (code == "UI") {
    need_value();
    if (v.kind != VarKind::Integer) v.kind = VarKind::Integer;
    v.upper = value;
  } else {
    throw MpsParseError(line, "unsupported bound code '" + code + "'");
  }
}

MipModel finalize(ParserState& st, int line) {
  if (!st.saw_endata) throw MpsParseError(line, "missing ENDATA");
  if (st.objective_name.empty()) throw MpsParseError(line, "no objective (type N) row");

  MipModel m;
  m.name = st.model_name.empty() ? "model" : st.model_name;
  m.variables = std::move(st.columns);

  for (Variable& v : m.variables) {
    if (v.kind == VarKind::Integer && v.lower == 0.0 && v.upper == 1.0) v.kind = VarKind::Binary;
    if (st.maximize) v.obj_coeff = -v.obj_coeff;
  }

  for (RowDef& r : st.rows) {
    std::sort(r.terms.begin(), r.terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    LinearConstraint c;
    c.terms = r.terms;
    c.sense = r.sense;
    c.rhs = r.rhs;
    if (!r.has_range || (r.sense == RowSense::Equal && r.range == 0.0)) {
      m.constraints.push_back(std::move(c));
      continue;
    }
    // a ranged row becomes [lo, hi]; emit primary side first, companion second
    double lo = 0.0, hi = 0.0;
    const double rng = r.range;
    switch (r.sense) {
      case RowSense::LessEqual:
        hi = r.rhs;
        lo = r.rhs - std::abs(rng);
        break;
      case RowSense::GreaterEqual:
        lo = r.rhs;
        hi = r.rhs + std::abs(rng);
        break;
      case RowSense::Equal:
        if (rng >= 0.0) {
          lo = r.rhs;
          hi = r.rhs + rng;
        } else {
          lo = r.rhs + rng;
          hi = r.rhs;
        }
        break;
    }
    LinearConstraint upper = c;
    upper.sense = RowSense::LessEqual;
    upper.rhs = hi;
    LinearConstraint lower = std::move(c);
    lower.sense = RowSense::GreaterEqual;
    lower.rhs = lo;
    m.constraints.push_back(std::move(upper));
    m.constraints.push_back(std::move(lower));
  }

  m.validate();
  return m;
}

}  // namespace

MipModel parse_mps(std::istream& in, const std::string& fallback_name) {
  ParserState st;
  st.model_name = fallback_name;

  Section section = Section::None;
  bool integer_mode = false;
  bool expect_objsense_value = false;
  std::string line;
  int lineno = 0;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '*') continue;  // comment

    const bool is_header = !std::isspace(static_cast<unsigned char>(line[0]));
    std::vector<std::string> toks = tokenize(line);
    if (toks.empty()) continue;

    if (is_header) {
      const std::string& kw = toks[0];
      expect_objsense_value = false;
      if (kw == "NAME") {
        if (toks.size() > 1) st.model_name = toks[1];
        section = Section::Name;
      } else if (kw == "OBJSENSE") {
        section = Section::ObjSense;
        if (toks.size() > 1) {
          st.maximize = (toks[1] == "MAX" || toks[1] == "MAXIMIZE");
        } else {
          expect_objsense_value = true;
        }
      } else if (kw == "ROWS") {
        section = Section::Rows;
      } else if (kw == "COLUMNS") {
        section = Section::Columns;
      } else if (kw == "RHS") {
        section = Section::Rhs;
      } else if (kw == "RANGES") {
        section = Section::Ranges;
      } else if (kw == "BOUNDS") {
        section = Section::Bounds;
      } else if (kw == "ENDATA") {
        st.saw_endata = true;
        section = Section::Endata;
        break;
      } else if (kw == "SOS") {
        throw MpsParseError(lineno, "SOS sections are not supported");
      } else {
        throw MpsParseError(lineno, "unknown section '" + kw + "'");
      }
      continue;
    }

    switch (section) {
      case Section::ObjSense: {
        if (!expect_objsense_value)
          throw MpsParseError(lineno, "unexpected data in OBJSENSE section");
        st.maximize = (toks[0] == "MAX" || toks[0] == "MAXIMIZE");
        expect_objsense_value = false;
        break;
      }
      case Section::Rows: {
        if (toks.size() != 2) throw MpsParseError(lineno, "ROWS entry needs 'type name'");
        const std::string& type = toks[0];
        const std::string& name = toks[1];
        if (st.row_index.count(name) || name == st.objective_name)
          throw MpsParseError(lineno, "duplicate row name '" + name + "'");
        if (type == "N") {
          if (!st.objective_name.empty())
            throw MpsParseError(lineno, "more than one objective (type N) row");
          st.objective_name = name;
        } else {
          RowDef r;
          r.name = name;
          if (type == "L")
            r.sense = RowSense::LessEqual;
          else if (type == "G")
            r.sense = RowSense::GreaterEqual;
          else if (type == "E")
            r.sense = RowSense::Equal;
          else
            throw MpsParseError(lineno, "unknown row type '" + type + "'");
          st.rows.push_back(std::move(r));
          st.row_index.emplace(name, static_cast<int>(st.rows.size()) - 1);
        }
        break;
      }
      case Section::Columns: {
        // marker lines toggle integrality
        if (toks.size() >= 3 && toks[1] == "'MARKER'") {
          if (toks[2] == "'INTORG'")
            integer_mode = true;
          else if (toks[2] == "'INTEND'")
            integer_mode = false;
          else
            throw MpsParseError(lineno, "unknown marker '" + toks[2] + "'");
          break;
        }
        if (toks.size() != 3 && toks.size() != 5)
          throw MpsParseError(lineno, "COLUMNS entry needs 'col row value [row value]'");
        const int col = st.column(toks[0], integer_mode, lineno);
        add_coefficient(st, col, toks[1], parse_value(toks[2], lineno), lineno);
        if (toks.size() == 5)
          add_coefficient(st, col, toks[3], parse_value(toks[4], lineno), lineno);
        break;
      }
      case Section::Rhs: {
        if (toks.size() != 3 && toks.size() != 5)
          throw MpsParseError(lineno, "RHS entry needs 'set row value [row value]'");
        for (size_t k = 1; k + 1 < toks.size(); k += 2) {
          const std::string& row = toks[k];
          const double value = parse_value(toks[k + 1], lineno);
          if (row == st.objective_name) continue;  // objective offset unsupported, ignored
          auto it = st.row_index.find(row);
          if (it == st.row_index.end())
            throw MpsParseError(lineno, "RHS for unknown row '" + row + "'");
          st.rows[it->second].rhs = value;
        }
        break;
      }
      case Section::Ranges: {
        if (toks.size() != 3 && toks.size() != 5)
          throw MpsParseError(lineno, "RANGES entry needs 'set row value [row value]'");
        for (size_t k = 1; k + 1 < toks.size(); k += 2) {
          auto it = st.row_index.find(toks[k]);
          if (it == st.row_index.end())
            throw MpsParseError(lineno, "range for unknown row '" + toks[k] + "'");
          st.rows[it->second].has_range = true;
          st.rows[it->second].range = parse_value(toks[k + 1], lineno);
        }
        break;
      }
      case Section::Bounds: {
        // 'code set column [value]'
        if (toks.size() != 3 && toks.size() != 4)
          throw MpsParseError(lineno, "BOUNDS entry needs 'code set column [value]'");
        auto it = st.col_index.find(toks[2]);
        if (it == st.col_index.end())
          throw MpsParseError(lineno, "bound for unknown column '" + toks[2] + "'");
        const bool has_value = toks.size() == 4;
        apply_bound(st, toks[0], it->second, has_value,
                    has_value ? parse_value(toks[3], lineno) : 0.0, lineno);
        break;
      }
      case Section::Name:
      case Section::None:
      case Section::Endata:
        throw MpsParseError(lineno, "data outside of a section");
    }
  }

  return finalize(st, lineno);
}

MipModel parse_mps_string(const std::string& text, const std::string& fallback_name) {
  std::istringstream in(text);
  return parse_mps(in, fallback_name);
}

MipModel parse_mps_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open MPS file: " + path);
  std::string name = path;
  if (auto pos = name.find_last_of('/'); pos != std::string::npos) name = name.substr(pos + 1);
  if (auto pos = name.rfind(".mps"); pos != std::string::npos) name = name.substr(0, pos);
  return parse_mps(in, name);
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

void write_mps(const MipModel& model, std::ostream& out) {
  model.validate();

  out << "NAME " << (model.name.empty() ? "model" : model.name) << "\n";
  out << "ROWS\n";
  out << " N OBJ\n";
  const char* sense_code[] = {"L", "E", "G"};
  for (size_t r = 0; r < model.constraints.size(); ++r)
    out << " " << sense_code[static_cast<int>(model.constraints[r].sense)] << " R" << r + 1
        << "\n";

  // collect terms column-major so each variable's entries are contiguous
  std::vector<std::vector<std::pair<size_t, double>>> by_col(model.variables.size());
  for (size_t r = 0; r < model.constraints.size(); ++r)
    for (const auto& [idx, coeff] : model.constraints[r].terms)
      if (coeff != 0.0) by_col[idx].emplace_back(r, coeff);

  out << "COLUMNS\n";
  bool in_marker = false;
  int marker_count = 0;
  for (int j = 0; j < model.num_vars(); ++j) {
    const Variable& v = model.variables[j];
    const bool wants_marker = v.kind != VarKind::Continuous;
    if (wants_marker != in_marker) {
      out << "    M" << ++marker_count << " 'MARKER' '" << (wants_marker ? "INTORG" : "INTEND")
          << "'\n";
      in_marker = wants_marker;
    }
    bool emitted = false;
    if (v.obj_coeff != 0.0) {
      out << "    " << v.name << " OBJ " << fmt(v.obj_coeff) << "\n";
      emitted = true;
    }
    for (const auto& [row, coeff] : by_col[j]) {
      out << "    " << v.name << " R" << row + 1 << " " << fmt(coeff) << "\n";
      emitted = true;
    }
    // a column must appear at least once to exist in the file
    if (!emitted) out << "    " << v.name << " OBJ 0\n";
  }
  if (in_marker) out << "    M" << ++marker_count << " 'MARKER' 'INTEND'\n";

  out << "RHS\n";
  for (size_t r = 0; r < model.constraints.size(); ++r)
    if (model.constraints[r].rhs != 0.0)
      out << "    RHS R" << r + 1 << " " << fmt(model.constraints[r].rhs) << "\n";

  out << "BOUNDS\n";
  for (const Variable& v : model.variables) {
    switch (v.kind) {
      case VarKind::Binary:
        out << " BV BND " << v.name << "\n";
        break;
      case VarKind::Integer:
      case VarKind::Continuous: {
        const double def_lower = 0.0;
        if (v.lower == v.upper) {
          out << " FX BND " << v.name << " " << fmt(v.lower) << "\n";
          break;
        }
        if (v.lower == -kInfinity && v.upper == kInfinity) {
          out << " FR BND " << v.name << "\n";
          break;
        }
        if (v.lower == -kInfinity)
          out << " MI BND " << v.name << "\n";
        else if (v.lower != def_lower)
          out << " LO BND " << v.name << " " << fmt(v.lower) << "\n";
        if (v.upper != kInfinity) out << " UP BND " << v.name << " " << fmt(v.upper) << "\n";
        break;
      }
    }
  }
  out << "ENDATA\n";
}

std::string write_mps_string(const MipModel& model) {
  std::ostringstream out;
  write_mps(model, out);
  return out.str();
}

void write_mps_file(const MipModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  write_mps(model, out);
}

}  // namespace lns
