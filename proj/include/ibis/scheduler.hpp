#pragma once
// Background driver for facilitator ticks. Each theme is ticked at most once
// per its policy period, never twice at the same time.

#include "ibis/service.hpp"

#include <chrono>
#include <condition_variable>
#include <map>
#include <mutex>
#include <thread>

namespace ibis {

class FacilitatorScheduler {
public:
    explicit FacilitatorScheduler(ForumService& service, std::chrono::milliseconds poll = std::chrono::milliseconds{250});
    ~FacilitatorScheduler();
    FacilitatorScheduler(const FacilitatorScheduler&) = delete;
    FacilitatorScheduler& operator=(const FacilitatorScheduler&) = delete;

    void start();
    void stop();

    /// Ticks every theme whose period has elapsed at `now`; returns the
    /// number of agent posts made. A theme's first period starts when the
    /// scheduler first sees it.
    std::size_t run_due(Timestamp now);

private:
    ForumService& service_;
    const std::chrono::milliseconds poll_;
    std::mutex mutex_;  // guards last_tick_ and serializes run_due
    std::map<ThemeId, Timestamp> last_tick_;
    std::mutex stop_mutex_;
    std::condition_variable stop_cv_;
    bool stopping_ = false;
    std::thread worker_;
};

}  // namespace ibis
