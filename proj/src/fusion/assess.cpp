#include <algorithm>

#include "chiron/error.hpp"
#include "chiron/fusion/ledger.hpp"

namespace chiron::fusion {

std::string_view to_string(Provenance p) noexcept {
    switch (p) {
        case Provenance::Observed: return "Observed";
        case Provenance::Inferred: return "Inferred";
        case Provenance::Unreported: return "Unreported";
    }
    return "";
}

std::size_t AssessmentReport::reported_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(vitals.begin(), vitals.end(), [](const VitalAssessment& v) { return v.state.has_value(); }));
}

AssessmentReport assess(const EvidenceLedger& ledger, const bn::NetworkSpec& spec, Timestamp now,
                        const AssessOptions& options) {
    triage::require_vital_nodes(spec);
    const auto posteriors = bn::posterior_all(spec, ledger.hard_evidence());

    AssessmentReport report;
    report.casualty_id = ledger.casualty_id();
    report.report_timestamp_ms = now;
    report.model_version = spec.version;
    for (VitalField v : triage::kAllVitals) {
        const auto& posterior = posteriors[*spec.index_of(triage::vital_name(v))];
        VitalAssessment& out = report.vitals[triage::index_of(v)];
        out.vital = v;
        out.posterior = posterior.distribution;
        if (const auto& accepted = ledger.accepted(v)) {
            out.state = accepted->state;
            out.provenance = Provenance::Observed;
            continue;
        }
        const bn::StateIndex map = bn::map_state(posterior);
        if (posterior.distribution[map] >= options.min_confidence) {
            out.state = map;
            out.provenance = Provenance::Inferred;
        } else {
            out.state.reset();
            out.posterior.clear();
            out.provenance = Provenance::Unreported;
        }
    }
    return report;
}

AssessmentReport assess_whatif(const EvidenceLedger& base, std::span<const Evidence> overlay,
                               const bn::NetworkSpec& spec, Timestamp now, const AssessOptions& options) {
    EvidenceLedger scratch = base;
    for (const auto& e : overlay) {
        Evidence copy = e;
        copy.casualty_id = base.casualty_id();
        scratch.ingest(copy);
    }
    return assess(scratch, spec, now, options);
}

AssessmentReport observed_only(const EvidenceLedger& ledger, std::string model_version, Timestamp now) {
    AssessmentReport report;
    report.casualty_id = ledger.casualty_id();
    report.report_timestamp_ms = now;
    report.model_version = std::move(model_version);
    for (VitalField v : triage::kAllVitals) {
        VitalAssessment& out = report.vitals[triage::index_of(v)];
        out.vital = v;
        if (const auto& accepted = ledger.accepted(v)) {
            out.state = accepted->state;
            out.posterior.assign(triage::vital_states(v).size(), 0.0);
            out.posterior[accepted->state] = 1.0;
            out.provenance = Provenance::Observed;
        } else {
            out.provenance = Provenance::Unreported;
        }
    }
    return report;
}

}  // namespace chiron::fusion
