#include "chainrec/report.hpp"

namespace chainrec {

Json report_envelope(const std::string& command, const std::string& input_name) {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = command;
    doc["input"] = input_name;
    return doc;
}

Json to_json(const SupportSet& set, const StateSpace& space) {
    Json out = Json::array();
    for (int i : set.indices()) out.push_back(space.label(i));
    return out;
}

namespace {

const char* series_kind_name(SeriesKind kind) {
    switch (kind) {
        case SeriesKind::PreimageReturn: return "return";
        case SeriesKind::ForwardReturn: return "forward-return";
        case SeriesKind::PushforwardMass: return "pushforward";
    }
    return "?";
}

} // namespace

Json to_json(const DivergenceVerdict& v) {
    Json out;
    out["series"] = series_kind_name(v.kind);
    out["diverges"] = v.diverges;
    out["trace_preperiod"] = v.trace_preperiod;
    out["trace_period"] = v.trace_period;
    out["witness"] = v.witness;
    out["partial_sums"] = v.partial_sums;
    return out;
}

Json to_json(const PropertyVerdict& v, const StateSpace& space) {
    Json out;
    out["property"] = v.property;
    out["holds"] = v.holds;
    if (v.witness) out["witness"] = to_json(*v.witness, space);
    out["family_restricted"] = v.family_restricted;
    out["detail"] = v.detail;
    return out;
}

Json to_json(const TheoremReport& r, const StateSpace& space) {
    Json out;
    out["theorem"] = r.theorem;
    out["holds"] = r.holds;
    out["detail"] = r.detail;
    out["parts"] = Json::array();
    for (const auto& part : r.parts) out["parts"].push_back(to_json(part, space));
    return out;
}

Json to_json(const RecurrenceReport& r, const StateSpace& space) {
    Json out;
    out["set"] = to_json(r.set_a, space);
    out["recurrent"] = to_json(r.recurrent, space);
    out["nonrecurrent"] = to_json(r.nonrecurrent, space);
    out["strong_recurrent"] = to_json(r.strong_recurrent, space);
    out["nonrecurrent_mass"] = r.nonrecurrent_mass;
    return out;
}

Json to_json(const MultiRecResult& r) {
    Json out;
    out["k"] = r.k;
    out["found"] = r.found_n.has_value();
    if (r.found_n) {
        out["n"] = *r.found_n;
        out["mass"] = r.mass;
    }
    out["searched_bound"] = r.searched_bound;
    out["exhaustive"] = r.exhaustive;
    return out;
}

Json to_json(const OrbitResult& r) {
    Json out;
    out["returned"] = r.returned_at.has_value();
    if (r.returned_at) out["returned_at"] = *r.returned_at;
    out["min_distance"] = r.min_distance;
    out["steps"] = r.steps;
    out["exact_steps"] = r.exact_steps;
    return out;
}

Json to_json(const RefinementStep& s) {
    Json out;
    out["cells"] = s.n_cells;
    int unknown = 0;
    for (auto v : s.verdicts)
        if (v == CellVerdict::Unknown) ++unknown;
    out["unknown_cells"] = unknown;
    out["certain_nonrecurrent_cells"] = s.n_cells - unknown;
    out["unknown_length"] = s.unknown_length;
    return out;
}

Json to_json(const ReturnProbEstimate& e) {
    Json out;
    out["estimate"] = e.estimate;
    out["wilson_lo"] = e.wilson_lo;
    out["wilson_hi"] = e.wilson_hi;
    out["trials"] = e.trials;
    out["hits"] = e.hits;
    return out;
}

Json to_json(const CoverageReport& r, const StateSpace& space) {
    Json out;
    out["pairs"] = r.cases.size();
    out["covered"] = r.covered;
    out["fraction"] = r.fraction;
    Json cases = Json::array();
    for (const auto& c : r.cases) {
        Json cj;
        cj["state"] = space.label(c.x);
        cj["set"] = to_json(c.a, space);
        cj["horizon"] = c.t_max;
        cj["exact"] = c.exact;
        cj["estimate"] = to_json(c.estimate);
        cj["covered"] = c.covered;
        cases.push_back(std::move(cj));
    }
    out["cases"] = std::move(cases);
    return out;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

namespace {

std::string scalar_to_csv(const Json& v) {
    if (v.is_string()) return csv_escape(v.get<std::string>());
    if (v.is_null()) return "";
    return v.dump();
}

} // namespace

std::string rows_to_csv(const Json& rows) {
    if (!rows.is_array() || rows.empty()) return "";
    std::string out;
    bool first = true;
    for (const auto& [key, value] : rows.front().items()) {
        (void)value;
        if (!first) out += ",";
        out += csv_escape(key);
        first = false;
    }
    out += "\n";
    for (const auto& row : rows) {
        first = true;
        for (const auto& [key, value] : row.items()) {
            (void)key;
            if (!first) out += ",";
            out += scalar_to_csv(value);
            first = false;
        }
        out += "\n";
    }
    return out;
}

} // namespace chainrec
