#pragma once

// Transport-independent HTTP routing for the evidence API.
//
//   POST /api/casualties/{id}/evidence   Evidence payload -> acknowledgment
//   GET  /api/casualties/{id}/assessment -> AssessmentReport
//   GET  /api/casualties                 -> {"casualties": [ids]}
//   POST /api/whatif                     {"casualty_id"?, "overlay": [...]} -> AssessmentReport
//   GET  /api/network                    -> {"version", "canonical", "network"}

#include <string>
#include <string_view>

#include "chiron/service/session.hpp"

namespace chiron::service {

struct HttpResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

/// HTTP status used when an operation fails with `code`.
int http_status(ErrorCode code) noexcept;

HttpResponse handle_request(Session& session, std::string_view method, std::string_view target,
                            std::string_view body);

}  // namespace chiron::service
