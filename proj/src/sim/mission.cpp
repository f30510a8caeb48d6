#include "chiron/sim/mission.hpp"

#include <algorithm>
#include <tuple>

#include "chiron/error.hpp"
#include "chiron/fusion/codec.hpp"

namespace chiron::sim {

using Json = nlohmann::ordered_json;

std::string_view to_string(MissionMode mode) noexcept {
    return mode == MissionMode::Fused ? "fused" : "vision";
}

MissionMode mission_mode_from_string(std::string_view text) {
    if (text == "fused") return MissionMode::Fused;
    if (text == "vision") return MissionMode::VisionOnly;
    throw Error(ErrorCode::InvalidArgument, "unknown mission mode '" + std::string(text) + "'");
}

namespace {

bool event_before(const MissionEvent& a, const MissionEvent& b) {
    return std::tie(a.t_ms, a.kind, a.casualty_id) < std::tie(b.t_ms, b.kind, b.casualty_id);
}

bool evidence_before(const fusion::Evidence& a, const fusion::Evidence& b) {
    return std::tie(a.timestamp_ms, a.casualty_id, a.vital, a.source, a.state) <
           std::tie(b.timestamp_ms, b.casualty_id, b.vital, b.source, b.state);
}

}  // namespace

MissionResult run_mission(const Scenario& scenario, const SensorModel& sensor, MissionMode mode,
                          const bn::NetworkSpec& spec) {
    scenario.validate();
    sensor.validate();

    std::vector<fusion::Evidence> queue;
    for (std::size_t i = 0; i < scenario.casualties.size(); ++i) {
        const auto& c = scenario.casualties[i];
        auto observations = emit_observations(c.truth, sensor, {c.discovery_ms, scenario.mission_duration_ms},
                                              derive_seed(sensor.seed, i));
        for (auto& e : observations) {
            if (e.timestamp_ms <= scenario.mission_duration_ms) queue.push_back(std::move(e));
        }
    }
    std::sort(queue.begin(), queue.end(), evidence_before);

    MissionResult result;
    std::map<std::string, fusion::EvidenceLedger> ledgers;
    for (const auto& c : scenario.casualties) ledgers.emplace(c.truth.casualty_id, c.truth.casualty_id);

    for (const auto& e : queue) {
        ledgers.at(e.casualty_id).ingest(e);
        Json payload = fusion::evidence_to_json(e);
        payload.erase("casualty_id");
        result.log.push_back(MissionEvent{e.timestamp_ms, "evidence", e.casualty_id, std::move(payload)});
    }

    for (const auto& c : scenario.casualties) {
        if (c.discovery_ms > scenario.mission_duration_ms) continue;
        const auto& ledger = ledgers.at(c.truth.casualty_id);
        const Timestamp stamp = std::max(c.discovery_ms, ledger.latest_timestamp().value_or(c.discovery_ms));
        fusion::AssessmentReport report = mode == MissionMode::Fused
                                              ? fusion::assess(ledger, spec, stamp)
                                              : fusion::observed_only(ledger, spec.version, stamp);
        result.log.push_back(MissionEvent{stamp, "report", c.truth.casualty_id, fusion::report_to_json(report)});
        result.reports.emplace(c.truth.casualty_id, std::move(report));
    }

    result.score = score_mission(result.reports, scenario);
    for (const auto& s : result.score.casualties) {
        result.log.push_back(MissionEvent{scenario.mission_duration_ms, "score", s.casualty_id, casualty_score_to_json(s)});
    }
    std::stable_sort(result.log.begin(), result.log.end(), event_before);
    return result;
}

std::string format_mission_log(std::span<const MissionEvent> events) {
    std::string out;
    for (const auto& e : events) {
        Json j;
        j["t_ms"] = e.t_ms;
        j["kind"] = e.kind;
        j["casualty_id"] = e.casualty_id;
        j["payload"] = e.payload;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<MissionEvent> parse_mission_log(std::string_view text) {
    std::vector<MissionEvent> events;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        try {
            const Json j = Json::parse(line.begin(), line.end());
            events.push_back(MissionEvent{j.at("t_ms").get<Timestamp>(), j.at("kind").get<std::string>(),
                                          j.at("casualty_id").get<std::string>(), j.at("payload")});
        } catch (const Json::exception& e) {
            throw Error(ErrorCode::Syntax, "mission log line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return events;
}

std::map<std::string, fusion::AssessmentReport> reports_from_log(std::span<const MissionEvent> events) {
    std::map<std::string, fusion::AssessmentReport> reports;
    for (const auto& e : events) {
        if (e.kind != "report") continue;
        auto report = fusion::report_from_json(e.payload);
        reports.insert_or_assign(report.casualty_id, std::move(report));
    }
    return reports;
}

}  // namespace chiron::sim
