#include "chiron/triage/vitals.hpp"

#include <algorithm>
#include <string>

#include "chiron/error.hpp"

namespace chiron::triage {

namespace {

constexpr std::array<std::string_view, 2> kPresence = {"Present", "Absent"};
constexpr std::array<std::string_view, 2> kWound = {"Wound", "Normal"};
constexpr std::array<std::string_view, 3> kExtremity = {"Wound", "Amputation", "Normal"};
constexpr std::array<std::string_view, 3> kOcular = {"Open", "Closed", "NT"};
constexpr std::array<std::string_view, 4> kResponse = {"Normal", "Abnormal", "Absent", "NT"};

constexpr std::array<std::string_view, kVitalCount> kNames = {
    "SevereHemorrhage", "RespiratoryDistress", "HeadTrauma",      "TorsoTrauma",    "LowerExtTrauma",
    "UpperExtTrauma",   "OcularAlertness",     "VerbalAlertness", "MotorAlertness",
};

}  // namespace

std::string_view vital_name(VitalField v) noexcept { return kNames[index_of(v)]; }

std::optional<VitalField> vital_from_name(std::string_view name) noexcept {
    for (VitalField v : kAllVitals) {
        if (vital_name(v) == name) return v;
    }
    return std::nullopt;
}

std::span<const std::string_view> vital_states(VitalField v) noexcept {
    switch (v) {
        case VitalField::SevereHemorrhage:
        case VitalField::RespiratoryDistress: return kPresence;
        case VitalField::HeadTrauma:
        case VitalField::TorsoTrauma: return kWound;
        case VitalField::LowerExtTrauma:
        case VitalField::UpperExtTrauma: return kExtremity;
        case VitalField::OcularAlertness: return kOcular;
        case VitalField::VerbalAlertness:
        case VitalField::MotorAlertness: return kResponse;
    }
    return {};
}

std::optional<bn::StateIndex> vital_state_index(VitalField v, std::string_view label) noexcept {
    auto states = vital_states(v);
    auto it = std::find(states.begin(), states.end(), label);
    if (it == states.end()) return std::nullopt;
    return static_cast<bn::StateIndex>(it - states.begin());
}

VitalGroup vital_group(VitalField v) noexcept {
    switch (v) {
        case VitalField::SevereHemorrhage: return VitalGroup::Hemorrhage;
        case VitalField::RespiratoryDistress: return VitalGroup::Respiratory;
        case VitalField::HeadTrauma:
        case VitalField::TorsoTrauma:
        case VitalField::LowerExtTrauma:
        case VitalField::UpperExtTrauma: return VitalGroup::Trauma;
        default: return VitalGroup::Alertness;
    }
}

void require_vital_nodes(const bn::NetworkSpec& spec) {
    for (VitalField v : kAllVitals) {
        auto idx = spec.index_of(vital_name(v));
        if (!idx) {
            throw Error(ErrorCode::UnknownModel, "model has no node for vital '" + std::string(vital_name(v)) + "'");
        }
        const auto& states = spec.nodes[*idx].states;
        auto expected = vital_states(v);
        if (!std::equal(states.begin(), states.end(), expected.begin(), expected.end())) {
            throw Error(ErrorCode::UnknownModel,
                        "model node '" + std::string(vital_name(v)) + "' does not use the vital's state space");
        }
    }
}

}  // namespace chiron::triage
