#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "chiron/fusion/ledger.hpp"
#include "chiron/sim/scenario.hpp"

namespace chiron::sim {

/// Emulated perception feed: per-vital dropout and label confusion.
struct SensorModel {
    struct Channel {
        double detection_probability = 1.0;
        /// Row-stochastic; rows = true state, columns = emitted label.
        std::vector<std::vector<double>> confusion;
    };

    std::array<Channel, triage::kVitalCount> channels;
    Timestamp latency_min_ms = 0;
    Timestamp latency_max_ms = 0;
    std::uint64_t seed = 0;

    const Channel& operator[](VitalField v) const noexcept { return channels[triage::index_of(v)]; }

    /// Same detection probability on every vital; the correct label is kept
    /// with probability 1 - label_noise, otherwise a uniformly chosen wrong one.
    static SensorModel uniform(double detection_probability, double label_noise, Timestamp latency_min_ms,
                               Timestamp latency_max_ms, std::uint64_t seed);

    /// Throws Error(InvalidArgument) naming the offending vital.
    void validate() const;
};

std::vector<std::vector<double>> noisy_confusion(std::size_t states, double label_noise);

/// Sensor file: {"seed", "latency_ms": {"min", "max"},
///   "default": {"detection_probability", "label_noise"},
///   "vitals": {"<Vital>": {"detection_probability", "label_noise" | "confusion"}}}
SensorModel parse_sensor_model(std::string_view text);

struct ObservationWindow {
    Timestamp discovery_ms = 0;
    Timestamp mission_duration_ms = 0;
};

/// At most one Evidence per vital, at discovery + latency, label drawn from the
/// confusion row of the true state. Sorted by (timestamp, vital). Every vital
/// consumes the same number of draws whether or not it is detected.
std::vector<fusion::Evidence> emit_observations(const GroundTruth& truth, const SensorModel& model,
                                                const ObservationWindow& window, std::uint64_t seed);

/// Source id used for a vital's emulated detector.
std::string sensor_source(VitalField v);

}  // namespace chiron::sim
