#include "ibis/http_api.hpp"

#include "ibis/analytics.hpp"
#include "ibis/error.hpp"
#include "ibis/text.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <httplib.h>

namespace ibis {

int http_status_for(ErrorCode code) noexcept
{
    switch (code) {
        case ErrorCode::UnknownTheme:
        case ErrorCode::UnknownParentPost: return 404;
        case ErrorCode::Unauthorized: return 401;
        case ErrorCode::Unregistered: return 403;
        case ErrorCode::DuplicateEmail:
        case ErrorCode::ThemeNotEmpty:
        case ErrorCode::ThemeClosed: return 409;
        case ErrorCode::ModerationRejected: return 422;
        case ErrorCode::StorageFailure: return 500;
        case ErrorCode::ExternalUnavailable: return 503;
        default: return 400;
    }
}

namespace {

using nlohmann::json;

constexpr const char* kJson = "application/json";

struct BadRequest : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void send_json(httplib::Response& res, int status, const json& body)
{
    res.status = status;
    res.set_content(body.dump(), kJson);
}

json parse_body(const httplib::Request& req)
{
    if (req.body.empty()) return json::object();
    json j = json::parse(req.body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw BadRequest("request body must be a JSON object");
    return j;
}

std::uint64_t parse_u64(std::string_view s, const char* what)
{
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size()) throw BadRequest(std::string("invalid ") + what);
    return v;
}

std::int64_t parse_i64(std::string_view s, const char* what)
{
    std::int64_t v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size()) throw BadRequest(std::string("invalid ") + what);
    return v;
}

ThemeId theme_of(const httplib::Request& req) { return ThemeId{parse_u64(req.matches[1].str(), "theme id")}; }

std::string admin_token(const httplib::Request& req)
{
    if (req.has_header("X-Admin-Token")) return req.get_header_value("X-Admin-Token");
    const std::string auth = req.get_header_value("Authorization");
    constexpr std::string_view bearer = "Bearer ";
    if (auth.starts_with(bearer)) return auth.substr(bearer.size());
    return {};
}

std::string string_field(const json& j, const char* key, bool required)
{
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
        if (required) throw BadRequest(std::string("missing field ") + key);
        return {};
    }
    if (!it->is_string()) throw BadRequest(std::string(key) + " must be a string");
    return it->get<std::string>();
}

std::optional<std::int64_t> int_field(const json& j, const char* key)
{
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_number_integer()) throw BadRequest(std::string(key) + " must be an integer");
    return it->get<std::int64_t>();
}

PhaseWindow parse_window(const std::string& spec)
{
    // label,start,end
    const auto first = spec.find(',');
    const auto second = first == std::string::npos ? std::string::npos : spec.find(',', first + 1);
    if (second == std::string::npos) throw BadRequest("window must be label,start,end");
    PhaseWindow w;
    w.label = spec.substr(0, first);
    w.start = from_epoch_ms(parse_i64(std::string_view(spec).substr(first + 1, second - first - 1), "window start"));
    w.end = from_epoch_ms(parse_i64(std::string_view(spec).substr(second + 1), "window end"));
    return w;
}

}  // namespace

struct HttpApi::Impl {
    Impl(ForumService& s, std::chrono::milliseconds k) : service(s), keepalive(k)
    {
        server.new_task_queue = [] { return new httplib::ThreadPool(32); };
        routes();
    }

    ForumService& service;
    std::chrono::milliseconds keepalive;
    httplib::Server server;
    std::thread thread;

    template <typename F>
    httplib::Server::Handler wrap(F f)
    {
        return [f](const httplib::Request& req, httplib::Response& res) {
            try {
                f(req, res);
            } catch (const Error& e) {
                json body{{"error", to_string(e.code())}, {"message", e.what()}};
                if (!e.detail().empty()) body["detail"] = e.detail();
                send_json(res, http_status_for(e.code()), body);
            } catch (const BadRequest& e) {
                send_json(res, 400, {{"error", "BadRequest"}, {"message", e.what()}});
            } catch (const json::exception& e) {
                send_json(res, 400, {{"error", "BadRequest"}, {"message", e.what()}});
            }
        };
    }

    json participant_json(const ParticipantProfile& p) const
    {
        json j = profile_to_json(p);
        j["points"] = service.points(p.participant_id);
        return j;
    }

    void routes()
    {
        server.Post("/api/participants", wrap([this](const httplib::Request& req, httplib::Response& res) {
            const json body = parse_body(req);
            Registration r;
            r.name = string_field(body, "name", true);
            r.email = string_field(body, "email", true);
            if (auto g = string_field(body, "gender", false); !g.empty()) {
                auto gender = parse_gender(g);
                if (!gender) throw BadRequest("gender must be female, male, other or undisclosed");
                r.gender = *gender;
            }
            if (auto photo = string_field(body, "photo_ref", false); !photo.empty()) r.photo_ref = photo;
            auto consent = body.find("consent");
            r.consent = consent != body.end() && consent->is_boolean() && consent->get<bool>();
            send_json(res, 201, participant_json(service.register_participant(r)));
        }));

        server.Get(R"(/api/participants/(\d+))", wrap([this](const httplib::Request& req, httplib::Response& res) {
            auto p = service.participant(ParticipantId{parse_u64(req.matches[1].str(), "participant id")});
            if (!p) throw Error(ErrorCode::Unregistered, "unknown participant");
            send_json(res, 200, participant_json(*p));
        }));

        server.Post("/api/themes", wrap([this](const httplib::Request& req, httplib::Response& res) {
            const std::string token = admin_token(req);
            if (!service.is_admin(token)) throw Error(ErrorCode::Unauthorized, "administrator credentials required");
            const json body = parse_body(req);
            std::optional<FacilitatorPolicy> policy;
            if (auto it = body.find("policy"); it != body.end() && !it->is_null()) {
                policy = policy_from_json(*it, FacilitatorPolicy{});
            }
            Theme t = service.create_theme(string_field(body, "title", true), string_field(body, "description", false),
                                           token, policy);
            send_json(res, 201, theme_to_json(t));
        }));

        server.Get("/api/themes", wrap([this](const httplib::Request&, httplib::Response& res) {
            json out = json::array();
            for (const Theme& t : service.themes()) out.push_back(theme_to_json(t));
            send_json(res, 200, out);
        }));

        server.Get(R"(/api/themes/(\d+))", wrap([this](const httplib::Request& req, httplib::Response& res) {
            const ThemeId id = theme_of(req);
            json j = theme_to_json(service.theme(id));
            j["stats"] = stats_to_json(service.get_stats(id));
            send_json(res, 200, j);
        }));

        server.Post(R"(/api/themes/(\d+)/posts)", wrap([this](const httplib::Request& req, httplib::Response& res) {
            const ThemeId id = theme_of(req);
            if (!req.has_header("X-Participant-Id")) throw Error(ErrorCode::Unregistered, "X-Participant-Id header required");
            const json body = parse_body(req);
            Submission s;
            s.author = ParticipantId{parse_u64(req.get_header_value("X-Participant-Id"), "participant id")};
            s.theme_id = id;
            if (auto parent = int_field(body, "parent_post_id")) {
                if (*parent < 0) throw BadRequest("parent_post_id must not be negative");
                s.parent_post_id = PostId{static_cast<std::uint64_t>(*parent)};
            }
            s.text = string_field(body, "text", true);
            if (auto sat = int_field(body, "satisfaction")) {
                if (*sat < INT32_MIN || *sat > INT32_MAX) throw Error(ErrorCode::InvalidSatisfaction, "satisfaction out of range");
                s.satisfaction = static_cast<int>(*sat);
            }
            SubmitResult r = service.submit_post(s);
            send_json(res, 201,
                      {{"post", post_to_json(r.post, service.author_name(r.post.author_id, id))},
                       {"extraction", extraction_to_json(r.extraction)}});
        }));

        server.Get(R"(/api/themes/(\d+)/posts)", wrap([this](const httplib::Request& req, httplib::Response& res) {
            send_json(res, 200, service.posts_json(theme_of(req)));
        }));

        server.Get(R"(/api/themes/(\d+)/tree)", wrap([this](const httplib::Request& req, httplib::Response& res) {
            send_json(res, 200, service.get_tree(theme_of(req)));
        }));

        server.Get(R"(/api/themes/(\d+)/stats)", wrap([this](const httplib::Request& req, httplib::Response& res) {
            const ThemeId id = theme_of(req);
            if (req.has_param("start") || req.has_param("end")) {
                if (!req.has_param("start") || !req.has_param("end")) throw BadRequest("start and end go together");
                PhaseWindow w{"window", from_epoch_ms(parse_i64(req.get_param_value("start"), "start")),
                              from_epoch_ms(parse_i64(req.get_param_value("end"), "end"))};
                send_json(res, 200, stats_to_json(phase_stats(service.snapshot(id), w)));
                return;
            }
            send_json(res, 200, stats_to_json(service.get_stats(id)));
        }));

        server.Get(R"(/api/themes/(\d+)/summary)", wrap([this](const httplib::Request& req, httplib::Response& res) {
            res.set_content(service.get_summary(theme_of(req)), "text/plain; charset=utf-8");
        }));

        server.Get(R"(/api/themes/(\d+)/facilitator)", wrap([this](const httplib::Request& req, httplib::Response& res) {
            const ThemeId id = theme_of(req);
            json j = policy_to_json(service.theme(id).policy);
            j["posts_since_last_agent"] = service.facilitator_state(id).posts_since_last_agent;
            send_json(res, 200, j);
        }));

        server.Put(R"(/api/themes/(\d+)/facilitator)", wrap([this](const httplib::Request& req, httplib::Response& res) {
            const ThemeId id = theme_of(req);
            const std::string token = admin_token(req);
            if (!service.is_admin(token)) throw Error(ErrorCode::Unauthorized, "administrator credentials required");
            const FacilitatorPolicy policy = policy_from_json(parse_body(req), service.theme(id).policy);
            send_json(res, 200, theme_to_json(service.configure_facilitator(id, policy, token)));
        }));

        server.Post(R"(/api/themes/(\d+)/import)", wrap([this](const httplib::Request& req, httplib::Response& res) {
            const ThemeId id = theme_of(req);
            const std::string token = admin_token(req);
            if (!service.is_admin(token)) throw Error(ErrorCode::Unauthorized, "administrator credentials required");
            ReplayClock clock = ReplayClock::Instantaneous;
            if (req.has_param("replay")) {
                const std::string mode = req.get_param_value("replay");
                if (mode == "real-time") {
                    clock = ReplayClock::RealTime;
                } else if (mode != "instantaneous") {
                    throw BadRequest("replay must be instantaneous or real-time");
                }
            }
            std::istringstream in(req.body);
            const auto records = read_transcript(in);
            send_json(res, 200, import_report_to_json(service.import_transcript(id, records, clock, token)));
        }));

        server.Get(R"(/api/themes/(\d+)/export)", wrap([this](const httplib::Request& req, httplib::Response& res) {
            const ThemeSnapshot snap = service.snapshot(theme_of(req));
            std::vector<PhaseWindow> windows;
            const auto count = req.get_param_value_count("window");
            for (std::size_t i = 0; i < count; ++i) windows.push_back(parse_window(req.get_param_value("window", i)));
            if (windows.empty()) windows.push_back(whole_run_window(snap));
            res.set_content(export_csv(snap, windows), "text/csv; charset=utf-8");
        }));

        server.Get(R"(/api/themes/(\d+)/stream)", wrap([this](const httplib::Request& req, httplib::Response& res) {
            const ThemeId id = theme_of(req);
            service.theme(id);  // UnknownTheme before the stream opens
            auto sub = service.events().subscribe(id);
            auto greeted = std::make_shared<bool>(false);
            const auto wait = keepalive;
            res.set_header("Cache-Control", "no-cache");
            res.set_chunked_content_provider(
                "text/event-stream",
                [sub, greeted, wait](std::size_t, httplib::DataSink& sink) {
                    if (!*greeted) {
                        *greeted = true;
                        const std::string hello = ": connected\n\n";
                        return sink.write(hello.data(), hello.size());
                    }
                    if (auto ev = sub->next(wait)) {
                        const std::string chunk = format_sse(*ev);
                        return sink.write(chunk.data(), chunk.size());
                    }
                    if (sub->closed()) {
                        sink.done();
                        return true;
                    }
                    const std::string ping = ": keepalive\n\n";
                    return sink.write(ping.data(), ping.size());
                },
                [sub](bool) { sub->close(); });
        }));
    }
};

HttpApi::HttpApi(ForumService& service, std::chrono::milliseconds keepalive)
    : impl_(std::make_unique<Impl>(service, keepalive))
{
}

HttpApi::~HttpApi() { stop(); }

int HttpApi::bind(const std::string& host, int port)
{
    const int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    return bound;
}

void HttpApi::listen() { impl_->server.listen_after_bind(); }

int HttpApi::start(const std::string& host, int port)
{
    const int bound = bind(host, port);
    impl_->thread = std::thread([this] { listen(); });
    impl_->server.wait_until_ready();
    return bound;
}

void HttpApi::stop()
{
    if (!impl_) return;
    impl_->service.events().close_all();
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace ibis
