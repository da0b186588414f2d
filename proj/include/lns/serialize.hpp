#pragma once

#include <string>

#include "json.hpp"
#include "lns/collect.hpp"
#include "lns/model.hpp"
#include "lns/solver.hpp"

namespace lns {

SolveStatus solve_status_from_string(const std::string& s);

void to_json(nlohmann::json& j, const Solution& s);
void from_json(const nlohmann::json& j, Solution& s);

void to_json(nlohmann::json& j, const ProbeRecord& r);
void from_json(const nlohmann::json& j, ProbeRecord& r);

void to_json(nlohmann::json& j, const SplSample& s);
void from_json(const nlohmann::json& j, SplSample& s);

void to_json(nlohmann::json& j, const SampleSet& s);
void from_json(const nlohmann::json& j, SampleSet& s);

}  // namespace lns
