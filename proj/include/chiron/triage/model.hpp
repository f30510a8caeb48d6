#pragma once

// The shipped expert-elicited triage network and the CPT convention lint.

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chiron/bn/network.hpp"

namespace chiron::triage {

enum class BandTag { Strong, Moderate, Weak };

std::string_view to_string(BandTag tag) noexcept;
/// Throws Error(InvalidArgument) for unknown tags.
BandTag band_tag_from_string(std::string_view text);

/// Closed probability interval for a qualitative link strength.
struct ConventionBand {
    BandTag tag;
    double low;
    double high;

    bool contains(double p) const noexcept;
};

/// Strong = [0.80, 0.95], Moderate = [0.40, 0.60], Weak = baseline +/- 0.10.
/// `baseline` is only consulted for Weak.
ConventionBand convention_band(BandTag tag, double baseline = 0.0);

/// A qualitative statement about one CPT entry: P(child = child_state | given)
/// is Strong / Moderate / Weak. Parents absent from `given` are marginalized.
struct LinkAnnotation {
    std::string child;
    std::string child_state;
    std::map<std::string, std::string> given;
    BandTag tag;
};

struct ConventionViolation {
    LinkAnnotation annotation;
    double entry;
    ConventionBand band;
    std::string message;
};

/// The shipped model, parsed from the embedded `chiron-default.bn.json`.
bn::NetworkSpec default_network();
std::string_view default_network_text() noexcept;

std::vector<LinkAnnotation> default_annotations();
std::string_view default_annotations_text() noexcept;

std::vector<LinkAnnotation> parse_annotations(std::string_view text);

/// CPT entry for the annotation with unconstrained parents averaged under
/// their prior marginals. Throws Error(UnknownReference) when the annotation
/// does not resolve.
double annotated_entry(const bn::NetworkSpec& spec, const LinkAnnotation& annotation);

std::vector<ConventionViolation> validate_convention(const bn::NetworkSpec& spec,
                                                     std::span<const LinkAnnotation> annotations);

}  // namespace chiron::triage
