#pragma once

#include "hq/barrier.hpp"
#include "hq/property_suite.hpp"
#include "hq/solver.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace hq {

using Json = nlohmann::ordered_json;

Json to_json(const FieldNorms& n);
Json to_json(const StageReport& s);
Json to_json(const SolveReport& r);
Json to_json(const SuiteReport& r);
Json to_json(const BarrierReport& r);

/// Stability/refinement table across the stages of one or more solve
/// reports (the estimate monitors).
Json monitor_table(const std::vector<Json>& solve_reports);

void write_json_file(const Json& j, const std::string& path);
void write_field_csv_file(const Field& f, int k, int l, const std::string& path);

}  // namespace hq
