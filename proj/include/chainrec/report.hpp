#pragma once

#include <nlohmann/json.hpp>

#include "chainrec/grid.hpp"
#include "chainrec/multirec.hpp"
#include "chainrec/piecewise_map.hpp"
#include "chainrec/recurrence.hpp"
#include "chainrec/series.hpp"
#include "chainrec/sim.hpp"

namespace chainrec {

/// Reports use ordered JSON so identical inputs serialize byte for byte.
using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Top-level document envelope shared by all CLI commands.
Json report_envelope(const std::string& command, const std::string& input_name);

Json to_json(const SupportSet& set, const StateSpace& space);
Json to_json(const DivergenceVerdict& v);
Json to_json(const PropertyVerdict& v, const StateSpace& space);
Json to_json(const TheoremReport& r, const StateSpace& space);
Json to_json(const RecurrenceReport& r, const StateSpace& space);
Json to_json(const MultiRecResult& r);
Json to_json(const OrbitResult& r);
Json to_json(const RefinementStep& s);
Json to_json(const ReturnProbEstimate& e);
Json to_json(const CoverageReport& r, const StateSpace& space);

std::string csv_escape(const std::string& field);

/// Flattens {"rows": [...]} style documents into CSV; one line per row
/// object, columns in first-row key order.
std::string rows_to_csv(const Json& rows);

} // namespace chainrec
