#pragma once

// Builds a (ground truth, report) pair that earns a requested rubric total,
// so reference per-casualty score rows can be replayed through the scorer.

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chiron/fusion/ledger.hpp"
#include "chiron/sim/scenario.hpp"

namespace chiron::testing {

struct ScoredCase {
    sim::ScenarioCasualty casualty;
    fusion::AssessmentReport report;
};

// Truth is state 0 everywhere; a wrong field reports state 1.
inline ScoredCase case_with_total(const std::string& id, int total, fusion::Timestamp gw_end) {
    using triage::VitalField;
    for (int late = 0; late < 2; ++late) {
        const int binary = late ? 2 : 4;
        for (int hem = 0; hem < 2; ++hem)
            for (int resp = 0; resp < 2; ++resp)
                for (int trauma = 0; trauma <= 4; ++trauma)
                    for (int alert = 0; alert <= 3; ++alert) {
                        const int trauma_pts = trauma == 4 ? 2 : trauma >= 2 ? 1 : 0;
                        const int alert_pts = alert == 3 ? 2 : alert >= 2 ? 1 : 0;
                        if (binary * (hem + resp) + trauma_pts + alert_pts != total) continue;

                        ScoredCase out;
                        out.casualty.truth.casualty_id = id;
                        out.casualty.truth.states.fill(0);
                        out.report.casualty_id = id;
                        out.report.model_version = "test";
                        out.report.report_timestamp_ms = late ? gw_end + 1 : gw_end;
                        auto set = [&](VitalField v, bool correct) {
                            const auto k = triage::vital_states(v).size();
                            std::vector<double> dist(k, 0.0);
                            const bn::StateIndex s = correct ? 0 : 1;
                            dist[s] = 1.0;
                            out.report.vitals[triage::index_of(v)] =
                                fusion::VitalAssessment{v, s, dist, fusion::Provenance::Observed};
                        };
                        set(VitalField::SevereHemorrhage, hem);
                        set(VitalField::RespiratoryDistress, resp);
                        const VitalField trauma_fields[] = {VitalField::HeadTrauma, VitalField::TorsoTrauma,
                                                            VitalField::LowerExtTrauma, VitalField::UpperExtTrauma};
                        for (int i = 0; i < 4; ++i) set(trauma_fields[i], i < trauma);
                        const VitalField alert_fields[] = {VitalField::OcularAlertness, VitalField::VerbalAlertness,
                                                           VitalField::MotorAlertness};
                        for (int i = 0; i < 3; ++i) set(alert_fields[i], i < alert);
                        return out;
                    }
    }
    throw std::invalid_argument("no rubric combination reaches " + std::to_string(total));
}

// A scenario plus reports whose per-casualty totals equal `totals`.
inline std::pair<sim::Scenario, std::map<std::string, fusion::AssessmentReport>> replay_totals(
    const std::vector<int>& totals) {
    sim::Scenario scenario;
    scenario.name = "replay";
    std::map<std::string, fusion::AssessmentReport> reports;
    for (std::size_t i = 0; i < totals.size(); ++i) {
        const std::string id = "c" + std::to_string(i + 1);
        auto c = case_with_total(id, totals[i], scenario.golden_window_end_ms);
        scenario.casualties.push_back(c.casualty);
        if (totals[i] > 0) reports.emplace(id, std::move(c.report));
    }
    return {std::move(scenario), std::move(reports)};
}

}  // namespace chiron::testing
