#pragma once

#include <map>
#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chiron/bn/network.hpp"
#include "chiron/fusion/ledger.hpp"
#include "chiron/sim/scenario.hpp"
#include "chiron/sim/score.hpp"
#include "chiron/sim/sensor.hpp"

namespace chiron::sim {

enum class MissionMode { VisionOnly, Fused };

std::string_view to_string(MissionMode mode) noexcept;
/// Accepts "vision" and "fused". Throws Error(InvalidArgument).
MissionMode mission_mode_from_string(std::string_view text);

struct MissionEvent {
    Timestamp t_ms = 0;
    std::string kind;  // "evidence", "report" or "score"
    std::string casualty_id;
    nlohmann::ordered_json payload;
};

struct MissionResult {
    std::vector<MissionEvent> log;
    std::map<std::string, fusion::AssessmentReport> reports;
    ScoreCard score;
};

/// Replays emulated perception for every casualty through a ledger, then
/// reports each discovered casualty once. VisionOnly reports accepted
/// evidence only; Fused reports all nine vitals. Either way the report is
/// stamped with the casualty's last evidence time (discovery time if none).
/// Evidence after the mission end is dropped. Uses `sensor.seed`.
MissionResult run_mission(const Scenario& scenario, const SensorModel& sensor, MissionMode mode,
                          const bn::NetworkSpec& spec);

/// Newline-delimited records ordered by (t_ms, kind, casualty_id).
std::string format_mission_log(std::span<const MissionEvent> events);
std::vector<MissionEvent> parse_mission_log(std::string_view text);

/// The "report" events of a log, keyed by casualty id.
std::map<std::string, fusion::AssessmentReport> reports_from_log(std::span<const MissionEvent> events);

}  // namespace chiron::sim
