#include "chiron/sim/scenario.hpp"

#include <nlohmann/json.hpp>
#include <random>
#include <set>

#include "chiron/error.hpp"

namespace chiron::sim {

using Json = nlohmann::ordered_json;

void Scenario::validate() const {
    if (!(golden_window_end_ms > 0 && golden_window_end_ms <= mission_duration_ms)) {
        throw Error(ErrorCode::InvalidArgument,
                    "scenario '" + name + "': golden window end must lie in (0, mission duration]");
    }
    std::set<std::string_view> ids;
    for (const auto& c : casualties) {
        if (!ids.insert(c.truth.casualty_id).second) {
            throw Error(ErrorCode::InvalidArgument, "scenario '" + name + "': duplicate casualty '" +
                                                        c.truth.casualty_id + "'");
        }
        if (c.discovery_ms < 0 || c.discovery_ms > mission_duration_ms) {
            throw Error(ErrorCode::InvalidArgument,
                        "casualty '" + c.truth.casualty_id + "': discovery time outside the mission");
        }
        for (VitalField v : triage::kAllVitals) {
            if (c.truth[v] >= triage::vital_states(v).size()) {
                throw Error(ErrorCode::InvalidState, "casualty '" + c.truth.casualty_id + "': bad state for " +
                                                         std::string(triage::vital_name(v)));
            }
        }
    }
}

const ScenarioCasualty* Scenario::find(std::string_view casualty_id) const noexcept {
    for (const auto& c : casualties) {
        if (c.truth.casualty_id == casualty_id) return &c;
    }
    return nullptr;
}

Scenario parse_scenario(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::Syntax, "syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
    }

    Scenario s;
    try {
        s.name = doc.at("name").get<std::string>();
        s.mission_duration_ms = doc.at("mission_duration_ms").get<Timestamp>();
        s.golden_window_end_ms = doc.at("golden_window_end_ms").get<Timestamp>();
        for (const auto& c : doc.at("casualties")) {
            ScenarioCasualty casualty;
            casualty.truth.casualty_id = c.at("id").get<std::string>();
            casualty.discovery_ms = c.at("discovery_ms").get<Timestamp>();
            for (VitalField v : triage::kAllVitals) {
                const auto label = c.at(std::string(triage::vital_name(v))).get<std::string>();
                auto idx = triage::vital_state_index(v, label);
                if (!idx) {
                    throw Error(ErrorCode::InvalidState, "casualty '" + casualty.truth.casualty_id + "': '" + label +
                                                             "' is not a state of " + std::string(triage::vital_name(v)));
                }
                casualty.truth.states[triage::index_of(v)] = *idx;
            }
            s.casualties.push_back(std::move(casualty));
        }
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::Syntax, std::string("scenario: ") + e.what());
    }
    s.validate();
    return s;
}

std::string serialize_scenario(const Scenario& scenario) {
    Json doc;
    doc["name"] = scenario.name;
    doc["mission_duration_ms"] = scenario.mission_duration_ms;
    doc["golden_window_end_ms"] = scenario.golden_window_end_ms;
    doc["casualties"] = Json::array();
    for (const auto& c : scenario.casualties) {
        Json j;
        j["id"] = c.truth.casualty_id;
        j["discovery_ms"] = c.discovery_ms;
        for (VitalField v : triage::kAllVitals) {
            j[std::string(triage::vital_name(v))] = triage::vital_states(v)[c.truth[v]];
        }
        doc["casualties"].push_back(std::move(j));
    }
    return doc.dump(2) + "\n";
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Scenario generate_scenario(const bn::NetworkSpec& spec, const ScenarioOptions& options, std::uint64_t seed) {
    triage::require_vital_nodes(spec);
    Scenario s;
    s.name = options.name;
    s.mission_duration_ms = options.mission_duration_ms;
    s.golden_window_end_ms = options.golden_window_end_ms;

    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < options.casualty_count; ++i) {
        ScenarioCasualty c;
        char id[16];
        std::snprintf(id, sizeof(id), "c%02zu", i + 1);
        c.truth.casualty_id = id;
        const auto sample = bn::forward_sample(spec, rng);
        for (VitalField v : triage::kAllVitals) {
            c.truth.states[triage::index_of(v)] = sample.at(std::string(triage::vital_name(v)));
        }
        const auto horizon = std::min(options.discovery_horizon_ms, options.mission_duration_ms);
        c.discovery_ms = static_cast<Timestamp>(bn::unit_uniform(rng) * static_cast<double>(horizon + 1));
        s.casualties.push_back(std::move(c));
    }
    s.validate();
    return s;
}

}  // namespace chiron::sim
