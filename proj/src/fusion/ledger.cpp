#include "chiron/fusion/ledger.hpp"

#include <algorithm>
#include <tuple>

#include "chiron/error.hpp"

namespace chiron::fusion {

Evidence make_evidence(std::string casualty_id, std::string_view vital, std::string_view state,
                       std::string source, Timestamp timestamp_ms) {
    auto v = triage::vital_from_name(vital);
    if (!v) throw Error(ErrorCode::UnknownVital, "unknown vital '" + std::string(vital) + "'");
    auto s = triage::vital_state_index(*v, state);
    if (!s) {
        throw Error(ErrorCode::InvalidState,
                    "'" + std::string(state) + "' is not a state of " + std::string(vital));
    }
    if (timestamp_ms < 0) throw Error(ErrorCode::InvalidArgument, "evidence timestamp must be >= 0");
    return Evidence{std::move(casualty_id), *v, *s, std::move(source), timestamp_ms};
}

bool supersedes(const Evidence& candidate, const Evidence& incumbent) noexcept {
    return std::tie(candidate.timestamp_ms, candidate.source, candidate.state) >
           std::tie(incumbent.timestamp_ms, incumbent.source, incumbent.state);
}

EvidenceLedger::EvidenceLedger(std::string casualty_id) : casualty_id_(std::move(casualty_id)) {}

IngestResult EvidenceLedger::ingest(const Evidence& e) {
    if (triage::index_of(e.vital) >= triage::kVitalCount) {
        throw Error(ErrorCode::UnknownVital, "unknown vital");
    }
    if (e.state >= triage::vital_states(e.vital).size()) {
        throw Error(ErrorCode::InvalidState, "state index out of range for " + std::string(triage::vital_name(e.vital)));
    }
    if (e.timestamp_ms < 0) throw Error(ErrorCode::InvalidArgument, "evidence timestamp must be >= 0");
    if (!e.casualty_id.empty() && e.casualty_id != casualty_id_) {
        throw Error(ErrorCode::InvalidArgument,
                    "evidence for casualty '" + e.casualty_id + "' sent to ledger '" + casualty_id_ + "'");
    }

    history_.push_back(e);
    history_.back().casualty_id = casualty_id_;

    auto& slot = accepted_[triage::index_of(e.vital)];
    if (!slot || supersedes(history_.back(), *slot)) {
        slot = history_.back();
        return IngestResult::Accepted;
    }
    return IngestResult::Superseded;
}

std::optional<Timestamp> EvidenceLedger::latest_timestamp() const noexcept {
    std::optional<Timestamp> latest;
    for (const auto& e : history_) {
        if (!latest || e.timestamp_ms > *latest) latest = e.timestamp_ms;
    }
    return latest;
}

bn::HardEvidence EvidenceLedger::hard_evidence() const {
    bn::HardEvidence out;
    for (const auto& slot : accepted_) {
        if (slot) out.emplace(std::string(triage::vital_name(slot->vital)), slot->state);
    }
    return out;
}

EvidenceLedger ingest(EvidenceLedger ledger, const Evidence& e) {
    ledger.ingest(e);
    return ledger;
}

}  // namespace chiron::fusion
