#pragma once
// JSON-over-HTTP front end for ForumService, with a server-sent event stream
// per theme.
//
//   POST /api/participants                 register
//   GET  /api/participants/{id}            profile with points
//   POST /api/themes                       create theme (admin)
//   GET  /api/themes                       list themes
//   GET  /api/themes/{id}                  theme with stats
//   POST /api/themes/{id}/posts            submit (X-Participant-Id header)
//   GET  /api/themes/{id}/posts            chronological posts
//   GET  /api/themes/{id}/tree             canonical tree document
//   GET  /api/themes/{id}/stats            stats; ?start=&end= (epoch ms) for one window
//   GET  /api/themes/{id}/summary          outline (text/plain)
//   GET  /api/themes/{id}/facilitator      policy and counter
//   PUT  /api/themes/{id}/facilitator      replace policy fields (admin)
//   POST /api/themes/{id}/import           JSON-lines transcript (admin); ?replay=instantaneous|real-time
//   GET  /api/themes/{id}/export           CSV; repeat ?window=label,start,end
//   GET  /api/themes/{id}/stream           text/event-stream
//
// Admin calls take "Authorization: Bearer <token>" or "X-Admin-Token".
// Errors come back as {"error": <code>, "message": ..., "detail": ...}.

#include "ibis/service.hpp"

#include <chrono>
#include <memory>
#include <string>

namespace ibis {

/// HTTP status used for a service error code.
int http_status_for(ErrorCode code) noexcept;

class HttpApi {
public:
    explicit HttpApi(ForumService& service, std::chrono::milliseconds keepalive = std::chrono::seconds{15});
    ~HttpApi();
    HttpApi(const HttpApi&) = delete;
    HttpApi& operator=(const HttpApi&) = delete;

    /// Binds without serving; port 0 picks a free port. Returns the bound
    /// port; throws std::runtime_error if the address is unavailable.
    int bind(const std::string& host, int port);
    /// Serves until stop(); blocks.
    void listen();
    /// bind + serve on a background thread.
    int start(const std::string& host, int port);
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace ibis
