#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "chiron/bn/network.hpp"

namespace chiron::triage {

/// The nine scored vitals, in rubric order.
enum class VitalField : std::uint8_t {
    SevereHemorrhage,
    RespiratoryDistress,
    HeadTrauma,
    TorsoTrauma,
    LowerExtTrauma,
    UpperExtTrauma,
    OcularAlertness,
    VerbalAlertness,
    MotorAlertness,
};

inline constexpr std::size_t kVitalCount = 9;

inline constexpr std::array<VitalField, kVitalCount> kAllVitals = {
    VitalField::SevereHemorrhage, VitalField::RespiratoryDistress, VitalField::HeadTrauma,
    VitalField::TorsoTrauma,      VitalField::LowerExtTrauma,      VitalField::UpperExtTrauma,
    VitalField::OcularAlertness,  VitalField::VerbalAlertness,     VitalField::MotorAlertness,
};

/// Scoring groups of the rubric.
enum class VitalGroup { Hemorrhage, Respiratory, Trauma, Alertness };

constexpr std::size_t index_of(VitalField v) noexcept { return static_cast<std::size_t>(v); }

std::string_view vital_name(VitalField v) noexcept;
std::optional<VitalField> vital_from_name(std::string_view name) noexcept;
std::span<const std::string_view> vital_states(VitalField v) noexcept;
std::optional<bn::StateIndex> vital_state_index(VitalField v, std::string_view label) noexcept;
VitalGroup vital_group(VitalField v) noexcept;

/// Checks that every vital is a node of `spec` with exactly the vital's state
/// space, in order. Throws Error(UnknownModel) otherwise.
void require_vital_nodes(const bn::NetworkSpec& spec);

}  // namespace chiron::triage
