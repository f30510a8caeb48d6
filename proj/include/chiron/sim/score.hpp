#pragma once

// Rubric scoring and mission-level metrics.

#include <map>
#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <vector>

#include "chiron/fusion/ledger.hpp"
#include "chiron/sim/scenario.hpp"

namespace chiron::sim {

inline constexpr int kMaxCasualtyPoints = 12;

struct CasualtyScore {
    std::string casualty_id;
    int hemorrhage = 0;   // 0, 2 or 4
    int respiratory = 0;  // 0, 2 or 4
    int trauma = 0;       // 0, 1 or 2
    int alertness = 0;    // 0, 1 or 2
    int correct = 0;      // vitals whose reported state matches ground truth
    int attempts = 0;     // vitals with a reported state

    int total() const noexcept { return hemorrhage + respiratory + trauma + alertness; }
};

struct Metrics {
    double reliability = 0.0;  // attempts / possible
    double accuracy = 0.0;     // correct / attempts, 0 without attempts
    double performance = 0.0;  // correct / possible
};

struct ScoreCard {
    std::vector<CasualtyScore> casualties;
    int total = 0;
    int max_possible = 0;
    int correct_assignments = 0;
    int assignment_attempts = 0;
    int possible = 0;
    Metrics metrics;
};

/// Hemorrhage/respiratory: 4 when correct and reported by `golden_window_end`,
/// 2 when correct later, else 0. Trauma (4 fields) and alertness (3 fields):
/// 2 when all match, 1 when at least two match, else 0. An unreported field is
/// a non-match; a missing report scores 0.
CasualtyScore score_casualty(const fusion::AssessmentReport* report, const GroundTruth& truth,
                             Timestamp golden_window_end);

/// Throws Error(InvalidArgument) when correct > attempts, attempts > possible,
/// a count is negative, or possible == 0.
Metrics metrics(int correct, int attempts, int possible);

/// Sums per-casualty entries; possible = 9 and max = 12 per entry.
ScoreCard aggregate(std::vector<CasualtyScore> casualties);

/// Scores every scenario casualty (absent reports score 0). Throws
/// Error(UnknownCasualty) for a report naming a casualty outside the scenario.
ScoreCard score_mission(const std::map<std::string, fusion::AssessmentReport>& reports, const Scenario& scenario);

nlohmann::ordered_json casualty_score_to_json(const CasualtyScore& score);
nlohmann::ordered_json scorecard_to_json(const ScoreCard& card);

}  // namespace chiron::sim
