#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "lns/model.hpp"

namespace lns {

class MpsParseError : public std::runtime_error {
 public:
  MpsParseError(int line, const std::string& what)
      : std::runtime_error("mps parse error at line " + std::to_string(line) + ": " + what),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

// Free-format MPS reader covering the MIPLIB-style subset:
// NAME / OBJSENSE / ROWS / COLUMNS (with INTORG/INTEND markers) / RHS /
// RANGES / BOUNDS / ENDATA. RANGES rows are expanded into a pair of
// single-sided rows. Maximization is negated into minimization.
MipModel parse_mps(std::istream& in, const std::string& fallback_name = "model");
MipModel parse_mps_string(const std::string& text, const std::string& fallback_name = "model");
MipModel parse_mps_file(const std::string& path);

// Free-format writer; parse_mps(write_mps(m)) == m for canonical models.
void write_mps(const MipModel& model, std::ostream& out);
std::string write_mps_string(const MipModel& model);
void write_mps_file(const MipModel& model, const std::string& path);

}  // namespace lns
