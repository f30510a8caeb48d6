#include "chiron/service/session.hpp"

#include "chiron/triage/vitals.hpp"

namespace chiron::service {

std::string_view to_string(AckStatus status) noexcept {
    switch (status) {
        case AckStatus::Accepted: return "accepted";
        case AckStatus::Superseded: return "superseded";
        case AckStatus::Rejected: return "rejected";
    }
    return "";
}

Json acknowledgment_to_json(const Acknowledgment& ack) {
    Json j;
    j["status"] = to_string(ack.status);
    j["reason"] = ack.reason ? Json(to_string(*ack.reason)) : Json(nullptr);
    j["message"] = ack.message;
    return j;
}

EvidenceRequest evidence_request_from_json(const Json& j) {
    if (!j.is_object()) throw Error(ErrorCode::Syntax, "evidence must be an object");
    auto text = [&](const char* key, bool required) -> std::string {
        auto it = j.find(key);
        if (it == j.end() || it->is_null()) {
            if (required) throw Error(ErrorCode::Syntax, std::string("missing field '") + key + "'");
            return {};
        }
        if (!it->is_string()) throw Error(ErrorCode::Syntax, std::string("field '") + key + "' must be a string");
        return it->get<std::string>();
    };
    EvidenceRequest r;
    r.vital = text("vital", true);
    r.state = text("state", true);
    r.source = text("source", false);
    if (auto it = j.find("t_ms"); it != j.end() && !it->is_null()) {
        if (!it->is_number_integer()) throw Error(ErrorCode::Syntax, "field 't_ms' must be an integer");
        r.t_ms = it->get<Timestamp>();
    }
    if (auto it = j.find("model_version"); it != j.end() && !it->is_null()) r.model_version = text("model_version", true);
    return r;
}

Session::Session(bn::NetworkSpec model) { load_model(std::move(model)); }

void Session::load_model(bn::NetworkSpec model) {
    const auto report = bn::validate_network(model);
    if (!report.empty()) throw Error(ErrorCode::InvalidNetwork, report.front().message);
    triage::require_vital_nodes(model);

    std::unique_lock model_lock(model_mutex_);
    std::unique_lock registry_lock(registry_mutex_);
    model_ = std::make_shared<const bn::NetworkSpec>(std::move(model));
    ledgers_.clear();
    clock_ = 0;
}

std::shared_ptr<const bn::NetworkSpec> Session::model() const {
    std::shared_lock lock(model_mutex_);
    return model_;
}

std::shared_ptr<const bn::NetworkSpec> Session::require_model() const {
    if (!model_) throw Error(ErrorCode::UnknownModel, "no model loaded");
    return model_;
}

Session::Slot* Session::find_slot(const std::string& casualty_id) const {
    std::shared_lock lock(registry_mutex_);
    auto it = ledgers_.find(casualty_id);
    return it == ledgers_.end() ? nullptr : it->second.get();
}

Session::Slot& Session::slot_for(const std::string& casualty_id) {
    if (Slot* s = find_slot(casualty_id)) return *s;
    std::unique_lock lock(registry_mutex_);
    auto [it, _] = ledgers_.try_emplace(casualty_id, std::make_unique<Slot>(casualty_id));
    return *it->second;
}

void Session::advance_clock(Timestamp t) noexcept {
    Timestamp current = clock_.load();
    while (t > current && !clock_.compare_exchange_weak(current, t)) {
    }
}

Acknowledgment Session::submit_evidence(const std::string& casualty_id, const EvidenceRequest& request) {
    std::shared_lock model_lock(model_mutex_);
    try {
        const auto model = require_model();
        if (request.model_version && *request.model_version != model->version) {
            throw Error(ErrorCode::UnknownModel, "evidence targets model version '" + *request.model_version +
                                                     "', active is '" + model->version + "'");
        }
        if (casualty_id.empty()) throw Error(ErrorCode::InvalidArgument, "empty casualty id");
        if (!request.t_ms) throw Error(ErrorCode::InvalidArgument, "evidence requires 't_ms'");
        const auto evidence =
            fusion::make_evidence(casualty_id, request.vital, request.state, request.source, *request.t_ms);

        Slot& slot = slot_for(casualty_id);
        std::lock_guard slot_lock(slot.mutex);
        fusion::EvidenceLedger next = slot.ledger;
        if (next.ingest(evidence) == fusion::IngestResult::Superseded) {
            slot.ledger = std::move(next);
            advance_clock(evidence.timestamp_ms);
            return {AckStatus::Superseded, std::nullopt, "a later observation of this vital is already accepted"};
        }
        advance_clock(evidence.timestamp_ms);
        // Assess before committing so a contradictory evidence set is refused
        // rather than leaving the casualty without a report.
        auto report = fusion::assess(next, *model, clock());
        slot.ledger = std::move(next);
        publish(report);
        return {AckStatus::Accepted, std::nullopt, {}};
    } catch (const Error& e) {
        return {AckStatus::Rejected, e.code(), e.what()};
    }
}

fusion::AssessmentReport Session::get_assessment(const std::string& casualty_id) const {
    std::shared_lock model_lock(model_mutex_);
    const auto model = require_model();
    Slot* slot = find_slot(casualty_id);
    if (!slot) throw Error(ErrorCode::UnknownCasualty, "unknown casualty '" + casualty_id + "'");
    std::lock_guard slot_lock(slot->mutex);
    return fusion::assess(slot->ledger, *model, clock());
}

fusion::AssessmentReport Session::whatif(const std::optional<std::string>& casualty_id,
                                         const std::vector<EvidenceRequest>& overlay) const {
    std::shared_lock model_lock(model_mutex_);
    const auto model = require_model();

    fusion::EvidenceLedger base(casualty_id.value_or(""));
    if (casualty_id && !casualty_id->empty()) {
        Slot* slot = find_slot(*casualty_id);
        if (!slot) throw Error(ErrorCode::UnknownCasualty, "unknown casualty '" + *casualty_id + "'");
        std::lock_guard slot_lock(slot->mutex);
        base = slot->ledger;
    }

    const Timestamp hypothetical = clock() + 1;
    Timestamp now = clock();
    std::vector<fusion::Evidence> items;
    for (const auto& r : overlay) {
        const Timestamp t = r.t_ms.value_or(hypothetical);
        now = std::max(now, t);
        items.push_back(fusion::make_evidence(base.casualty_id(), r.vital, r.state,
                                              r.source.empty() ? "whatif" : r.source, t));
    }
    return fusion::assess_whatif(base, items, *model, now);
}

std::vector<std::string> Session::casualty_ids() const {
    std::shared_lock lock(registry_mutex_);
    std::vector<std::string> ids;
    for (const auto& [id, _] : ledgers_) ids.push_back(id);
    return ids;
}

Session::ListenerId Session::subscribe(Listener listener) {
    std::lock_guard lock(listener_mutex_);
    const ListenerId id = next_listener_++;
    listeners_.emplace(id, std::move(listener));
    return id;
}

void Session::unsubscribe(ListenerId id) {
    std::lock_guard lock(listener_mutex_);
    listeners_.erase(id);
}

void Session::publish(const fusion::AssessmentReport& report) const {
    std::vector<Listener> targets;
    {
        std::lock_guard lock(listener_mutex_);
        for (const auto& [_, l] : listeners_) targets.push_back(l);
    }
    for (const auto& l : targets) l(report);
}

}  // namespace chiron::service
