#pragma once

// In-process state behind the evidence-ingestion API: the active model, one
// ledger per casualty, the mission clock and the update-stream listeners.

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "chiron/error.hpp"
#include "chiron/fusion/codec.hpp"
#include "chiron/fusion/ledger.hpp"

namespace chiron::service {

using fusion::Json;
using fusion::Timestamp;

enum class AckStatus { Accepted, Superseded, Rejected };

std::string_view to_string(AckStatus status) noexcept;

struct Acknowledgment {
    AckStatus status;
    std::optional<ErrorCode> reason;
    std::string message;
};

Json acknowledgment_to_json(const Acknowledgment& ack);

/// Evidence as posted by a client; labels are checked on submission.
struct EvidenceRequest {
    std::string vital;
    std::string state;
    std::string source;
    std::optional<Timestamp> t_ms;
    std::optional<std::string> model_version;
};

/// Throws Error(Syntax) for missing or mistyped fields.
EvidenceRequest evidence_request_from_json(const Json& j);

class Session {
public:
    using Listener = std::function<void(const fusion::AssessmentReport&)>;
    using ListenerId = std::uint64_t;

    Session() = default;
    explicit Session(bn::NetworkSpec model);

    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;

    /// Replaces the model and drops every ledger. Throws Error(UnknownModel)
    /// or Error(InvalidNetwork) when the model is unusable.
    void load_model(bn::NetworkSpec model);
    std::shared_ptr<const bn::NetworkSpec> model() const;

    /// Never throws for client mistakes; they come back as Rejected.
    /// Listeners see the refreshed report before this returns, and only when
    /// the evidence became the accepted value.
    Acknowledgment submit_evidence(const std::string& casualty_id, const EvidenceRequest& request);

    /// Throws Error(UnknownCasualty), Error(UnknownModel).
    fusion::AssessmentReport get_assessment(const std::string& casualty_id) const;

    /// Stateless hypothetical. An empty id means an empty base ledger.
    /// Overlay items without t_ms are stamped clock() + 1 so they supersede
    /// everything accepted so far.
    fusion::AssessmentReport whatif(const std::optional<std::string>& casualty_id,
                                    const std::vector<EvidenceRequest>& overlay) const;

    /// Latest evidence timestamp seen; monotone.
    Timestamp clock() const noexcept { return clock_.load(); }
    std::vector<std::string> casualty_ids() const;

    ListenerId subscribe(Listener listener);
    void unsubscribe(ListenerId id);

private:
    struct Slot {
        explicit Slot(std::string id) : ledger(std::move(id)) {}
        mutable std::mutex mutex;
        fusion::EvidenceLedger ledger;
    };

    std::shared_ptr<const bn::NetworkSpec> require_model() const;
    Slot* find_slot(const std::string& casualty_id) const;
    Slot& slot_for(const std::string& casualty_id);
    void advance_clock(Timestamp t) noexcept;
    void publish(const fusion::AssessmentReport& report) const;

    // Held shared by every operation, exclusively by load_model.
    mutable std::shared_mutex model_mutex_;
    std::shared_ptr<const bn::NetworkSpec> model_;

    mutable std::shared_mutex registry_mutex_;
    std::map<std::string, std::unique_ptr<Slot>, std::less<>> ledgers_;

    std::atomic<Timestamp> clock_{0};

    mutable std::mutex listener_mutex_;
    std::map<ListenerId, Listener> listeners_;
    ListenerId next_listener_ = 1;
};

}  // namespace chiron::service
