#include "lns/serialize.hpp"

#include <stdexcept>

namespace lns {

SolveStatus solve_status_from_string(const std::string& s) {
  if (s == "optimal") return SolveStatus::Optimal;
  if (s == "feasible_limit") return SolveStatus::FeasibleLimit;
  if (s == "infeasible") return SolveStatus::Infeasible;
  if (s == "no_solution_limit") return SolveStatus::NoSolutionLimit;
  if (s == "unbounded") return SolveStatus::Unbounded;
  if (s == "error") return SolveStatus::Error;
  throw std::invalid_argument("unknown solve status: " + s);
}

void to_json(nlohmann::json& j, const Solution& s) {
  j = nlohmann::json{{"values", s.values},
                     {"objective", s.objective},
                     {"kind", s.kind == SolutionKind::Feasible ? "feasible" : "fractional"},
                     {"time_offset", s.time_offset}};
}

void from_json(const nlohmann::json& j, Solution& s) {
  s.values = j.at("values").get<std::vector<double>>();
  s.objective = j.at("objective").get<double>();
  s.kind = j.at("kind").get<std::string>() == "feasible" ? SolutionKind::Feasible
                                                         : SolutionKind::Fractional;
  s.time_offset = j.at("time_offset").get<double>();
}

void to_json(nlohmann::json& j, const ProbeRecord& r) {
  j = nlohmann::json{
      {"feasible", r.feasible}, {"fractional", r.fractional}, {"probe_time", r.probe_time}};
}

void from_json(const nlohmann::json& j, ProbeRecord& r) {
  r.feasible = j.at("feasible").get<std::vector<Solution>>();
  r.fractional = j.at("fractional").get<std::vector<Solution>>();
  r.probe_time = j.at("probe_time").get<double>();
}

void to_json(nlohmann::json& j, const SplSample& s) {
  j = nlohmann::json{{"solution", s.solution},
                     {"ratio_used", s.ratio_used},
                     {"k_lb", s.k_lb},
                     {"status", to_string(s.status)}};
}

void from_json(const nlohmann::json& j, SplSample& s) {
  s.solution = j.at("solution").get<Solution>();
  s.ratio_used = j.at("ratio_used").get<double>();
  s.k_lb = j.at("k_lb").get<double>();
  s.status = solve_status_from_string(j.at("status").get<std::string>());
}

void to_json(nlohmann::json& j, const SampleSet& s) {
  j = nlohmann::json{{"samples", s.samples}, {"k_prime", s.k_prime}};
}

void from_json(const nlohmann::json& j, SampleSet& s) {
  s.samples = j.at("samples").get<std::vector<SplSample>>();
  s.k_prime = j.at("k_prime").get<double>();
}

}  // namespace lns
