#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "qbplan/plan.hpp"
#include "qbplan/policy.hpp"
#include "qbplan/simulator.hpp"

namespace qbplan {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// Versioned plan schema ("schema": 1). Doubles survive the round trip
/// bit-exactly.
nlohmann::ordered_json plan_to_json(const Plan& plan);
Plan plan_from_json(const nlohmann::json& j);

void save_plan(const Plan& plan, const std::string& path);
Plan load_plan(const std::string& path);

/// Region export: header `tau,b_continue,b_stop,provenance`, one row per
/// ladder level, full round-trip precision.
void write_regions_csv(const Plan& plan, std::ostream& os);
std::vector<RegionBounds> read_regions_csv(std::istream& is);

/// Episode trace export: header
/// `step,tau,mu_lo,mu_hi,action,robust,admissible-set,x`.
void write_trace_csv(const std::vector<TraceRow>& trace, std::ostream& os);

nlohmann::ordered_json summary_to_json(const SimulationSummary& summary);
nlohmann::ordered_json bank_manifest_json(const BankResult& bank,
                                          const std::vector<std::string>& files);

} // namespace qbplan
