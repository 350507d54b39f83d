#pragma once
// Per-theme fan-out of live events to stream subscribers.

#include "ibis/ids.hpp"

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace ibis {

namespace event_type {
inline constexpr const char* kPostAccepted = "post_accepted";
inline constexpr const char* kNodeAttached = "node_attached";
inline constexpr const char* kAgentPosted = "agent_posted";
inline constexpr const char* kStatsUpdated = "stats_updated";
}  // namespace event_type

struct Event {
    std::uint64_t seq = 0;  // per theme, starting at 1
    ThemeId theme_id;
    std::string type;
    nlohmann::json data;
};

/// Queue owned jointly by the bus and one consumer. A consumer that falls
/// more than `capacity` events behind is closed and must resubscribe.
class Subscription {
public:
    explicit Subscription(std::size_t capacity) : capacity_(capacity) {}

    /// Waits up to `timeout`; nullopt on timeout or once closed and drained.
    std::optional<Event> next(std::chrono::milliseconds timeout);
    /// Everything queued right now, without waiting.
    std::vector<Event> drain();
    void close();
    bool closed() const;

private:
    friend class EventBus;
    bool push(const Event& e);

    const std::size_t capacity_;
    mutable std::mutex mutex_;
    std::condition_variable cv_;
    std::deque<Event> queue_;
    bool closed_ = false;
};

class EventBus {
public:
    explicit EventBus(std::size_t subscriber_capacity = 1 << 16) : capacity_(subscriber_capacity) {}

    std::shared_ptr<Subscription> subscribe(ThemeId theme);
    /// Delivers to every live subscriber of `theme` in call order.
    void publish(ThemeId theme, std::string type, nlohmann::json data);
    std::size_t subscriber_count(ThemeId theme) const;
    /// Closes every subscription, e.g. on shutdown.
    void close_all();

private:
    const std::size_t capacity_;
    mutable std::mutex mutex_;
    std::map<ThemeId, std::vector<std::shared_ptr<Subscription>>> subscribers_;
    std::map<ThemeId, std::uint64_t> seq_;
};

/// Wire form for a server-sent event stream.
std::string format_sse(const Event& e);

}  // namespace ibis
