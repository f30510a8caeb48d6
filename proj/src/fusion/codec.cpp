#include "chiron/fusion/codec.hpp"

#include "chiron/error.hpp"

namespace chiron::fusion {

namespace {

template <typename T>
T field(const Json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw Error(ErrorCode::Syntax, std::string("missing field '") + key + "'");
    try {
        return it->template get<T>();
    } catch (const nlohmann::json::exception&) {
        throw Error(ErrorCode::Syntax, std::string("field '") + key + "' has the wrong type");
    }
}

Provenance provenance_from_string(std::string_view s) {
    if (s == "Observed") return Provenance::Observed;
    if (s == "Inferred") return Provenance::Inferred;
    if (s == "Unreported") return Provenance::Unreported;
    throw Error(ErrorCode::Syntax, "unknown provenance '" + std::string(s) + "'");
}

}  // namespace

Json evidence_to_json(const Evidence& e) {
    Json j;
    j["casualty_id"] = e.casualty_id;
    j["vital"] = triage::vital_name(e.vital);
    j["state"] = triage::vital_states(e.vital)[e.state];
    j["source"] = e.source;
    j["t_ms"] = e.timestamp_ms;
    return j;
}

Evidence evidence_from_json(const Json& j, const std::string& casualty_id) {
    if (!j.is_object()) throw Error(ErrorCode::Syntax, "evidence must be an object");
    std::string id = j.contains("casualty_id") ? field<std::string>(j, "casualty_id") : casualty_id;
    return make_evidence(std::move(id), field<std::string>(j, "vital"), field<std::string>(j, "state"),
                         field<std::string>(j, "source"), field<Timestamp>(j, "t_ms"));
}

Json report_to_json(const AssessmentReport& report) {
    Json j;
    j["casualty_id"] = report.casualty_id;
    j["report_timestamp_ms"] = report.report_timestamp_ms;
    j["model_version"] = report.model_version;
    Json vitals = Json::array();
    for (const auto& v : report.vitals) {
        Json entry;
        entry["vital"] = triage::vital_name(v.vital);
        entry["state"] = v.state ? Json(triage::vital_states(v.vital)[*v.state]) : Json(nullptr);
        entry["provenance"] = to_string(v.provenance);
        entry["posterior"] = v.posterior;
        vitals.push_back(std::move(entry));
    }
    j["vitals"] = std::move(vitals);
    return j;
}

AssessmentReport report_from_json(const Json& j) {
    if (!j.is_object()) throw Error(ErrorCode::Syntax, "report must be an object");
    AssessmentReport report;
    report.casualty_id = field<std::string>(j, "casualty_id");
    report.report_timestamp_ms = field<Timestamp>(j, "report_timestamp_ms");
    report.model_version = field<std::string>(j, "model_version");
    for (VitalField v : triage::kAllVitals) {
        report.vitals[triage::index_of(v)] = VitalAssessment{v, std::nullopt, {}, Provenance::Unreported};
    }
    const auto vitals = field<Json>(j, "vitals");
    if (!vitals.is_array()) throw Error(ErrorCode::Syntax, "'vitals' must be an array");
    for (const auto& entry : vitals) {
        const auto name = field<std::string>(entry, "vital");
        auto v = triage::vital_from_name(name);
        if (!v) throw Error(ErrorCode::UnknownVital, "unknown vital '" + name + "'");
        VitalAssessment& out = report.vitals[triage::index_of(*v)];
        out.provenance = provenance_from_string(field<std::string>(entry, "provenance"));
        auto state = entry.find("state");
        if (state != entry.end() && !state->is_null()) {
            const auto label = field<std::string>(entry, "state");
            auto s = triage::vital_state_index(*v, label);
            if (!s) throw Error(ErrorCode::InvalidState, "'" + label + "' is not a state of " + name);
            out.state = *s;
        }
        if (entry.contains("posterior")) out.posterior = field<std::vector<double>>(entry, "posterior");
    }
    return report;
}

}  // namespace chiron::fusion
