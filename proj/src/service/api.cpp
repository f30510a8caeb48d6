#include "chiron/service/api.hpp"

#include <vector>

namespace chiron::service {

namespace {

HttpResponse json_response(int status, const Json& body) { return HttpResponse{status, body.dump(), "application/json"}; }

HttpResponse error_response(ErrorCode code, const std::string& message) {
    Json j;
    j["error"] = to_string(code);
    j["message"] = message;
    return json_response(http_status(code), j);
}

HttpResponse plain_error(int status, std::string_view error, const std::string& message) {
    Json j;
    j["error"] = error;
    j["message"] = message;
    return json_response(status, j);
}

std::vector<std::string_view> split_path(std::string_view target) {
    if (auto q = target.find('?'); q != std::string_view::npos) target = target.substr(0, q);
    std::vector<std::string_view> parts;
    while (!target.empty()) {
        auto slash = target.find('/');
        auto part = target.substr(0, slash);
        if (!part.empty()) parts.push_back(part);
        if (slash == std::string_view::npos) break;
        target.remove_prefix(slash + 1);
    }
    return parts;
}

Json parse_body(std::string_view body) {
    try {
        return Json::parse(body.begin(), body.end());
    } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::Syntax, std::string("request body: ") + e.what());
    }
}

HttpResponse method_not_allowed() { return plain_error(405, "METHOD_NOT_ALLOWED", "method not allowed"); }

HttpResponse post_evidence(Session& session, const std::string& id, std::string_view body) {
    const Acknowledgment ack = session.submit_evidence(id, evidence_request_from_json(parse_body(body)));
    const int status = ack.status == AckStatus::Rejected ? http_status(*ack.reason) : 200;
    return json_response(status, acknowledgment_to_json(ack));
}

HttpResponse post_whatif(Session& session, std::string_view body) {
    const Json j = parse_body(body);
    if (!j.is_object()) throw Error(ErrorCode::Syntax, "what-if request must be an object");
    std::optional<std::string> base;
    if (auto it = j.find("casualty_id"); it != j.end() && !it->is_null()) {
        if (!it->is_string()) throw Error(ErrorCode::Syntax, "'casualty_id' must be a string");
        base = it->get<std::string>();
    }
    std::vector<EvidenceRequest> overlay;
    if (auto it = j.find("overlay"); it != j.end()) {
        if (!it->is_array()) throw Error(ErrorCode::Syntax, "'overlay' must be an array");
        for (const auto& e : *it) overlay.push_back(evidence_request_from_json(e));
    }
    return json_response(200, fusion::report_to_json(session.whatif(base, overlay)));
}

HttpResponse get_network(const Session& session) {
    const auto model = session.model();
    if (!model) throw Error(ErrorCode::UnknownModel, "no model loaded");
    const std::string canonical = bn::serialize_network(*model);
    Json j;
    j["version"] = model->version;
    j["canonical"] = canonical;
    j["network"] = Json::parse(canonical);
    return json_response(200, j);
}

}  // namespace

int http_status(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Syntax:
        case ErrorCode::InvalidArgument: return 400;
        case ErrorCode::UnknownCasualty:
        case ErrorCode::UnknownReference: return 404;
        case ErrorCode::UnknownModel:
        case ErrorCode::ImpossibleEvidence: return 409;
        case ErrorCode::UnknownVital:
        case ErrorCode::InvalidState: return 422;
        default: return 500;
    }
}

HttpResponse handle_request(Session& session, std::string_view method, std::string_view target,
                            std::string_view body) {
    const auto parts = split_path(target);
    try {
        if (parts.size() < 2 || parts[0] != "api") return plain_error(404, "NOT_FOUND", "no such endpoint");

        if (parts[1] == "casualties") {
            if (parts.size() == 2) {
                if (method != "GET") return method_not_allowed();
                Json j;
                j["casualties"] = session.casualty_ids();
                return json_response(200, j);
            }
            if (parts.size() == 4) {
                const std::string id(parts[2]);
                if (parts[3] == "evidence") {
                    if (method != "POST") return method_not_allowed();
                    return post_evidence(session, id, body);
                }
                if (parts[3] == "assessment") {
                    if (method != "GET") return method_not_allowed();
                    return json_response(200, fusion::report_to_json(session.get_assessment(id)));
                }
            }
        } else if (parts.size() == 2 && parts[1] == "whatif") {
            if (method != "POST") return method_not_allowed();
            return post_whatif(session, body);
        } else if (parts.size() == 2 && parts[1] == "network") {
            if (method != "GET") return method_not_allowed();
            return get_network(session);
        }
        return plain_error(404, "NOT_FOUND", "no such endpoint");
    } catch (const Error& e) {
        return error_response(e.code(), e.what());
    }
}

}  // namespace chiron::service
