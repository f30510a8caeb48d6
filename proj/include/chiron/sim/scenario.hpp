#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "chiron/bn/network.hpp"
#include "chiron/fusion/ledger.hpp"

namespace chiron::sim {

using fusion::Timestamp;
using triage::VitalField;

struct GroundTruth {
    std::string casualty_id;
    std::array<bn::StateIndex, triage::kVitalCount> states{};

    bn::StateIndex operator[](VitalField v) const noexcept { return states[triage::index_of(v)]; }

    friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

struct ScenarioCasualty {
    GroundTruth truth;
    Timestamp discovery_ms = 0;

    friend bool operator==(const ScenarioCasualty&, const ScenarioCasualty&) = default;
};

struct Scenario {
    std::string name;
    Timestamp mission_duration_ms = 30 * 60 * 1000;
    Timestamp golden_window_end_ms = 15 * 60 * 1000;
    std::vector<ScenarioCasualty> casualties;

    /// Throws Error(InvalidArgument) on broken timing or duplicate ids.
    void validate() const;
    const ScenarioCasualty* find(std::string_view casualty_id) const noexcept;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

Scenario parse_scenario(std::string_view text);
std::string serialize_scenario(const Scenario& scenario);

struct ScenarioOptions {
    std::string name = "generated";
    std::size_t casualty_count = 11;
    Timestamp mission_duration_ms = 30 * 60 * 1000;
    /// Golden window is the first half of the mission.
    Timestamp golden_window_end_ms = 15 * 60 * 1000;
    /// Discovery times are uniform in [0, discovery_horizon_ms].
    Timestamp discovery_horizon_ms = 10 * 60 * 1000;
};

/// Ground truth drawn by ancestral sampling from `spec`, which must carry
/// the nine vital nodes.
Scenario generate_scenario(const bn::NetworkSpec& spec, const ScenarioOptions& options, std::uint64_t seed);

/// Well-mixed per-stream seed (splitmix64 finalizer over seed and stream).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

}  // namespace chiron::sim
