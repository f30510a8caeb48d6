#pragma once

// Per-casualty evidence ledger and the assessment it produces.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chiron/bn/inference.hpp"
#include "chiron/triage/vitals.hpp"

namespace chiron::fusion {

using triage::VitalField;
using Timestamp = std::int64_t;  // milliseconds since mission start

/// One categorical observation of one vital from one perception source.
struct Evidence {
    std::string casualty_id;
    VitalField vital;
    bn::StateIndex state;
    std::string source;
    Timestamp timestamp_ms;

    friend bool operator==(const Evidence&, const Evidence&) = default;
};

/// Builds Evidence from wire labels. Throws Error(UnknownVital),
/// Error(InvalidState) or Error(InvalidArgument) for a negative timestamp.
Evidence make_evidence(std::string casualty_id, std::string_view vital, std::string_view state,
                       std::string source, Timestamp timestamp_ms);

/// Conflict policy: later timestamp wins; equal timestamps fall back to the
/// lexicographically greater source, then the greater state index. This is a
/// total order, so the accepted value never depends on arrival order.
bool supersedes(const Evidence& candidate, const Evidence& incumbent) noexcept;

enum class IngestResult { Accepted, Superseded };

class EvidenceLedger {
public:
    explicit EvidenceLedger(std::string casualty_id);

    /// Appends to history and recomputes the vital's accepted slot.
    /// Throws Error(InvalidState) / Error(InvalidArgument) for malformed evidence.
    IngestResult ingest(const Evidence& e);

    const std::string& casualty_id() const noexcept { return casualty_id_; }
    const std::optional<Evidence>& accepted(VitalField v) const noexcept { return accepted_[triage::index_of(v)]; }
    /// Arrival order, append-only.
    std::span<const Evidence> history() const noexcept { return history_; }
    std::optional<Timestamp> latest_timestamp() const noexcept;
    bn::HardEvidence hard_evidence() const;

private:
    std::string casualty_id_;
    std::array<std::optional<Evidence>, triage::kVitalCount> accepted_;
    std::vector<Evidence> history_;
};

/// Pure transition form of EvidenceLedger::ingest.
EvidenceLedger ingest(EvidenceLedger ledger, const Evidence& e);

enum class Provenance { Observed, Inferred, Unreported };

std::string_view to_string(Provenance p) noexcept;

struct VitalAssessment {
    VitalField vital;
    std::optional<bn::StateIndex> state;  // empty only when Unreported
    std::vector<double> posterior;        // empty only when Unreported
    Provenance provenance;

    friend bool operator==(const VitalAssessment&, const VitalAssessment&) = default;
};

struct AssessmentReport {
    std::string casualty_id;
    std::array<VitalAssessment, triage::kVitalCount> vitals;
    Timestamp report_timestamp_ms = 0;
    std::string model_version;

    const VitalAssessment& operator[](VitalField v) const noexcept { return vitals[triage::index_of(v)]; }
    std::size_t reported_count() const noexcept;

    friend bool operator==(const AssessmentReport&, const AssessmentReport&) = default;
};

struct AssessOptions {
    /// Inferred vitals whose MAP probability falls below this are left
    /// unreported. 0 reports every vital.
    double min_confidence = 0.0;
};

/// Observed vitals pass through; the rest are MAP of the posterior given all
/// accepted evidence. Throws Error(ImpossibleEvidence) when the accepted set
/// has probability zero, Error(UnknownModel) when `spec` lacks the vitals.
AssessmentReport assess(const EvidenceLedger& ledger, const bn::NetworkSpec& spec, Timestamp now,
                        const AssessOptions& options = {});

/// assess() on a copy of `base` after ingesting `overlay`. `base` is untouched.
AssessmentReport assess_whatif(const EvidenceLedger& base, std::span<const Evidence> overlay,
                               const bn::NetworkSpec& spec, Timestamp now, const AssessOptions& options = {});

/// The vision-only baseline: accepted evidence verbatim, nothing inferred.
AssessmentReport observed_only(const EvidenceLedger& ledger, std::string model_version, Timestamp now);

}  // namespace chiron::fusion
