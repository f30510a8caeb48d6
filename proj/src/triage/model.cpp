#include "chiron/triage/model.hpp"

#include <nlohmann/json.hpp>
#include <sstream>

#include "chiron/bn/inference.hpp"
#include "chiron/error.hpp"

namespace chiron::triage {

namespace data {
extern const std::string_view kDefaultNetwork;
extern const std::string_view kDefaultAnnotations;
}  // namespace data

namespace {

// Band edges are authored values; allow for their binary representation.
constexpr double kBandSlack = 1e-12;

}  // namespace

std::string_view to_string(BandTag tag) noexcept {
    switch (tag) {
        case BandTag::Strong: return "Strong";
        case BandTag::Moderate: return "Moderate";
        case BandTag::Weak: return "Weak";
    }
    return "";
}

BandTag band_tag_from_string(std::string_view text) {
    if (text == "Strong") return BandTag::Strong;
    if (text == "Moderate") return BandTag::Moderate;
    if (text == "Weak") return BandTag::Weak;
    throw Error(ErrorCode::InvalidArgument, "unknown band tag '" + std::string(text) + "'");
}

bool ConventionBand::contains(double p) const noexcept {
    return p >= low - kBandSlack && p <= high + kBandSlack;
}

ConventionBand convention_band(BandTag tag, double baseline) {
    switch (tag) {
        case BandTag::Strong: return {tag, 0.80, 0.95};
        case BandTag::Moderate: return {tag, 0.40, 0.60};
        case BandTag::Weak: return {tag, baseline - 0.10, baseline + 0.10};
    }
    return {tag, 0.0, 1.0};
}

std::string_view default_network_text() noexcept { return data::kDefaultNetwork; }
std::string_view default_annotations_text() noexcept { return data::kDefaultAnnotations; }

bn::NetworkSpec default_network() { return bn::parse_network(data::kDefaultNetwork); }

std::vector<LinkAnnotation> default_annotations() { return parse_annotations(data::kDefaultAnnotations); }

std::vector<LinkAnnotation> parse_annotations(std::string_view text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Syntax, "syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.is_array()) throw Error(ErrorCode::Syntax, "annotations: expected an array");

    std::vector<LinkAnnotation> out;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& a = doc[i];
        const std::string where = "annotations[" + std::to_string(i) + "]";
        try {
            LinkAnnotation ann;
            ann.child = a.at("child").get<std::string>();
            ann.child_state = a.at("child_state").get<std::string>();
            if (a.contains("given")) ann.given = a.at("given").get<std::map<std::string, std::string>>();
            ann.tag = band_tag_from_string(a.at("tag").get<std::string>());
            out.push_back(std::move(ann));
        } catch (const json::exception& e) {
            throw Error(ErrorCode::Syntax, "syntax error at " + where + ": " + e.what());
        }
    }
    return out;
}

double annotated_entry(const bn::NetworkSpec& spec, const LinkAnnotation& annotation) {
    const bn::IndexedNetwork net(spec);
    auto child = spec.index_of(annotation.child);
    if (!child) throw Error(ErrorCode::UnknownReference, "annotation names unknown node '" + annotation.child + "'");
    const auto& child_node = spec.nodes[*child];
    auto child_state = child_node.state_index(annotation.child_state);
    if (!child_state) {
        throw Error(ErrorCode::UnknownReference,
                    "annotation names unknown state '" + annotation.child_state + "' of '" + annotation.child + "'");
    }

    const auto parents = net.parents(*child);
    std::vector<std::optional<bn::StateIndex>> fixed(parents.size());
    for (const auto& [parent, label] : annotation.given) {
        auto pos = std::find(child_node.parents.begin(), child_node.parents.end(), parent);
        if (pos == child_node.parents.end()) {
            throw Error(ErrorCode::UnknownReference,
                        "annotation conditions on '" + parent + "', which is not a parent of '" + annotation.child + "'");
        }
        const auto k = static_cast<std::size_t>(pos - child_node.parents.begin());
        auto s = spec.nodes[parents[k]].state_index(label);
        if (!s) {
            throw Error(ErrorCode::UnknownReference, "annotation names unknown state '" + label + "' of '" + parent + "'");
        }
        fixed[k] = *s;
    }

    const auto priors = bn::posterior_all(spec, {});

    // Weighted average over rows consistent with `fixed`.
    std::vector<bn::StateIndex> digits(parents.size(), 0);
    for (std::size_t k = 0; k < parents.size(); ++k) {
        if (fixed[k]) digits[k] = *fixed[k];
    }
    double entry = 0.0;
    while (true) {
        double weight = 1.0;
        std::vector<std::size_t> sizes;
        for (std::size_t k = 0; k < parents.size(); ++k) {
            sizes.push_back(net.cardinality(parents[k]));
            if (!fixed[k]) weight *= priors[parents[k]].distribution[digits[k]];
        }
        const auto row = bn::cpt_row_index(sizes, digits);
        entry += weight * child_node.cpt.rows[row][*child_state];

        std::size_t d = parents.size();
        while (d > 0) {
            const std::size_t k = d - 1;
            if (!fixed[k] && ++digits[k] < net.cardinality(parents[k])) break;
            if (!fixed[k]) digits[k] = 0;
            --d;
        }
        if (d == 0) break;
    }
    return entry;
}

std::vector<ConventionViolation> validate_convention(const bn::NetworkSpec& spec,
                                                     std::span<const LinkAnnotation> annotations) {
    std::vector<ConventionViolation> out;
    std::vector<bn::Posterior> priors;
    for (const auto& ann : annotations) {
        const double entry = annotated_entry(spec, ann);
        double baseline = 0.0;
        if (ann.tag == BandTag::Weak) {
            if (priors.empty()) priors = bn::posterior_all(spec, {});
            const auto child = *spec.index_of(ann.child);
            baseline = priors[child].distribution[*spec.nodes[child].state_index(ann.child_state)];
        }
        const ConventionBand band = convention_band(ann.tag, baseline);
        if (band.contains(entry)) continue;

        std::ostringstream msg;
        msg.precision(6);
        msg << "P(" << ann.child << "=" << ann.child_state << " |";
        if (ann.given.empty()) msg << " -";
        for (const auto& [p, s] : ann.given) msg << " " << p << "=" << s;
        msg << ") = " << entry << " is outside the " << to_string(ann.tag) << " band [" << band.low << ", "
            << band.high << "]";
        out.push_back(ConventionViolation{ann, entry, band, msg.str()});
    }
    return out;
}

}  // namespace chiron::triage
