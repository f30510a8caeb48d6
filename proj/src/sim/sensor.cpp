#include "chiron/sim/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <random>

#include "chiron/error.hpp"

namespace chiron::sim {

using Json = nlohmann::ordered_json;

std::vector<std::vector<double>> noisy_confusion(std::size_t states, double label_noise) {
    std::vector<std::vector<double>> m(states, std::vector<double>(states, 0.0));
    const double off = states > 1 ? label_noise / static_cast<double>(states - 1) : 0.0;
    for (std::size_t r = 0; r < states; ++r) {
        for (std::size_t c = 0; c < states; ++c) m[r][c] = r == c ? 1.0 - label_noise : off;
    }
    return m;
}

SensorModel SensorModel::uniform(double detection_probability, double label_noise, Timestamp latency_min_ms,
                                 Timestamp latency_max_ms, std::uint64_t seed) {
    SensorModel m;
    for (VitalField v : triage::kAllVitals) {
        auto& ch = m.channels[triage::index_of(v)];
        ch.detection_probability = detection_probability;
        ch.confusion = noisy_confusion(triage::vital_states(v).size(), label_noise);
    }
    m.latency_min_ms = latency_min_ms;
    m.latency_max_ms = latency_max_ms;
    m.seed = seed;
    m.validate();
    return m;
}

void SensorModel::validate() const {
    if (latency_min_ms < 0 || latency_max_ms < latency_min_ms) {
        throw Error(ErrorCode::InvalidArgument, "sensor latency range must satisfy 0 <= min <= max");
    }
    for (VitalField v : triage::kAllVitals) {
        const auto& ch = (*this)[v];
        const std::string name(triage::vital_name(v));
        if (!(ch.detection_probability >= 0.0 && ch.detection_probability <= 1.0)) {
            throw Error(ErrorCode::InvalidArgument, name + ": detection probability outside [0, 1]");
        }
        const auto k = triage::vital_states(v).size();
        if (ch.confusion.size() != k) throw Error(ErrorCode::InvalidArgument, name + ": confusion matrix has wrong shape");
        for (const auto& row : ch.confusion) {
            if (row.size() != k) throw Error(ErrorCode::InvalidArgument, name + ": confusion matrix has wrong shape");
            double sum = 0.0;
            for (double p : row) {
                if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, name + ": confusion entry outside [0, 1]");
                sum += p;
            }
            if (std::abs(sum - 1.0) > bn::kRowSumTolerance) {
                throw Error(ErrorCode::InvalidArgument, name + ": confusion row does not sum to 1");
            }
        }
    }
}

SensorModel parse_sensor_model(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::Syntax, "syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
    }

    SensorModel m;
    try {
        m.seed = doc.value("seed", std::uint64_t{0});
        if (doc.contains("latency_ms")) {
            m.latency_min_ms = doc["latency_ms"].at("min").get<Timestamp>();
            m.latency_max_ms = doc["latency_ms"].at("max").get<Timestamp>();
        }
        const Json defaults = doc.value("default", Json::object());
        const double p0 = defaults.value("detection_probability", 1.0);
        const double noise0 = defaults.value("label_noise", 0.0);
        const Json vitals = doc.value("vitals", Json::object());
        for (const auto& [key, _] : vitals.items()) {
            if (!triage::vital_from_name(key)) throw Error(ErrorCode::UnknownVital, "sensor: unknown vital '" + key + "'");
        }
        for (VitalField v : triage::kAllVitals) {
            auto& ch = m.channels[triage::index_of(v)];
            const Json own = vitals.value(std::string(triage::vital_name(v)), Json::object());
            ch.detection_probability = own.value("detection_probability", p0);
            if (own.contains("confusion")) {
                ch.confusion = own["confusion"].get<std::vector<std::vector<double>>>();
            } else {
                ch.confusion = noisy_confusion(triage::vital_states(v).size(), own.value("label_noise", noise0));
            }
        }
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::Syntax, std::string("sensor: ") + e.what());
    }
    m.validate();
    return m;
}

std::string sensor_source(VitalField v) { return "sensor/" + std::string(triage::vital_name(v)); }

std::vector<fusion::Evidence> emit_observations(const GroundTruth& truth, const SensorModel& model,
                                                const ObservationWindow& window, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<fusion::Evidence> out;
    const auto latency_span = static_cast<double>(model.latency_max_ms - model.latency_min_ms + 1);
    for (VitalField v : triage::kAllVitals) {
        const auto& ch = model[v];
        const double detect = bn::unit_uniform(rng);
        const auto latency = model.latency_min_ms + static_cast<Timestamp>(bn::unit_uniform(rng) * latency_span);
        const auto label = bn::sample_categorical(ch.confusion[truth[v]], rng);
        if (!(detect < ch.detection_probability)) continue;
        out.push_back(fusion::Evidence{truth.casualty_id, v, label, sensor_source(v), window.discovery_ms + latency});
    }
    std::stable_sort(out.begin(), out.end(), [](const fusion::Evidence& a, const fusion::Evidence& b) {
        return a.timestamp_ms < b.timestamp_ms;
    });
    return out;
}

}  // namespace chiron::sim
