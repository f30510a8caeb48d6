#include "chiron/sim/score.hpp"

#include "chiron/error.hpp"

namespace chiron::sim {

namespace {

bool matches(const fusion::AssessmentReport& report, const GroundTruth& truth, VitalField v) {
    const auto& state = report[v].state;
    return state && *state == truth[v];
}

int critical_points(const fusion::AssessmentReport& report, const GroundTruth& truth, VitalField v,
                    Timestamp golden_window_end) {
    if (!matches(report, truth, v)) return 0;
    return report.report_timestamp_ms <= golden_window_end ? 4 : 2;
}

int group_points(int matched, int members) {
    if (matched == members) return 2;
    if (matched >= 2) return 1;
    return 0;
}

}  // namespace

CasualtyScore score_casualty(const fusion::AssessmentReport* report, const GroundTruth& truth,
                             Timestamp golden_window_end) {
    CasualtyScore s;
    s.casualty_id = truth.casualty_id;
    if (!report) return s;

    s.hemorrhage = critical_points(*report, truth, VitalField::SevereHemorrhage, golden_window_end);
    s.respiratory = critical_points(*report, truth, VitalField::RespiratoryDistress, golden_window_end);

    int trauma = 0;
    int alertness = 0;
    for (VitalField v : triage::kAllVitals) {
        const bool hit = matches(*report, truth, v);
        if ((*report)[v].state) ++s.attempts;
        if (hit) ++s.correct;
        switch (triage::vital_group(v)) {
            case triage::VitalGroup::Trauma: trauma += hit; break;
            case triage::VitalGroup::Alertness: alertness += hit; break;
            default: break;
        }
    }
    s.trauma = group_points(trauma, 4);
    s.alertness = group_points(alertness, 3);
    return s;
}

Metrics metrics(int correct, int attempts, int possible) {
    if (possible <= 0 || correct < 0 || attempts < correct || possible < attempts) {
        throw Error(ErrorCode::InvalidArgument, "metrics require 0 <= correct <= attempts <= possible, possible > 0");
    }
    Metrics m;
    m.reliability = static_cast<double>(attempts) / possible;
    m.accuracy = attempts == 0 ? 0.0 : static_cast<double>(correct) / attempts;
    m.performance = static_cast<double>(correct) / possible;
    return m;
}

ScoreCard aggregate(std::vector<CasualtyScore> casualties) {
    ScoreCard card;
    card.casualties = std::move(casualties);
    for (const auto& c : card.casualties) {
        card.total += c.total();
        card.correct_assignments += c.correct;
        card.assignment_attempts += c.attempts;
    }
    const int n = static_cast<int>(card.casualties.size());
    card.max_possible = kMaxCasualtyPoints * n;
    card.possible = static_cast<int>(triage::kVitalCount) * n;
    if (card.possible > 0) card.metrics = metrics(card.correct_assignments, card.assignment_attempts, card.possible);
    return card;
}

ScoreCard score_mission(const std::map<std::string, fusion::AssessmentReport>& reports, const Scenario& scenario) {
    for (const auto& [id, _] : reports) {
        if (!scenario.find(id)) throw Error(ErrorCode::UnknownCasualty, "report for unknown casualty '" + id + "'");
    }
    std::vector<CasualtyScore> scores;
    for (const auto& c : scenario.casualties) {
        auto it = reports.find(c.truth.casualty_id);
        scores.push_back(score_casualty(it == reports.end() ? nullptr : &it->second, c.truth,
                                        scenario.golden_window_end_ms));
    }
    return aggregate(std::move(scores));
}

nlohmann::ordered_json casualty_score_to_json(const CasualtyScore& s) {
    nlohmann::ordered_json j;
    j["casualty_id"] = s.casualty_id;
    j["hemorrhage"] = s.hemorrhage;
    j["respiratory"] = s.respiratory;
    j["trauma"] = s.trauma;
    j["alertness"] = s.alertness;
    j["total"] = s.total();
    j["correct"] = s.correct;
    j["attempts"] = s.attempts;
    return j;
}

nlohmann::ordered_json scorecard_to_json(const ScoreCard& card) {
    nlohmann::ordered_json j;
    j["total"] = card.total;
    j["max_possible"] = card.max_possible;
    j["correct_assignments"] = card.correct_assignments;
    j["assignment_attempts"] = card.assignment_attempts;
    j["possible"] = card.possible;
    j["reliability"] = card.metrics.reliability;
    j["accuracy"] = card.metrics.accuracy;
    j["performance"] = card.metrics.performance;
    j["casualties"] = nlohmann::ordered_json::array();
    for (const auto& c : card.casualties) j["casualties"].push_back(casualty_score_to_json(c));
    return j;
}

}  // namespace chiron::sim
