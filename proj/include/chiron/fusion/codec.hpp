#pragma once

// Wire/file form of evidence and assessment reports. Labels, not indices,
// appear here.

#include <nlohmann/json.hpp>
#include <string>

#include "chiron/fusion/ledger.hpp"

namespace chiron::fusion {

using Json = nlohmann::ordered_json;

/// {"casualty_id", "vital", "state", "source", "t_ms"}
Json evidence_to_json(const Evidence& e);

/// Reads the evidence object. `casualty_id` is used when the object has none.
/// Throws Error(Syntax) for missing/mistyped fields and the make_evidence errors.
Evidence evidence_from_json(const Json& j, const std::string& casualty_id = {});

/// {"casualty_id", "report_timestamp_ms", "model_version",
///  "vitals": [{"vital", "state", "provenance", "posterior"}, ...]}
/// Unreported vitals carry "state": null and an empty posterior.
Json report_to_json(const AssessmentReport& report);
AssessmentReport report_from_json(const Json& j);

}  // namespace chiron::fusion
