#include "ibis/scheduler.hpp"

#include "ibis/error.hpp"

#include <iostream>

namespace ibis {

FacilitatorScheduler::FacilitatorScheduler(ForumService& service, std::chrono::milliseconds poll)
    : service_(service), poll_(poll)
{
}

FacilitatorScheduler::~FacilitatorScheduler() { stop(); }

void FacilitatorScheduler::start()
{
    if (worker_.joinable()) return;
    {
        std::lock_guard lock(stop_mutex_);
        stopping_ = false;
    }
    worker_ = std::thread([this] {
        std::unique_lock lock(stop_mutex_);
        while (!stopping_) {
            lock.unlock();
            try {
                run_due(service_.now());
            } catch (const std::exception& e) {
                std::cerr << "facilitator tick failed: " << e.what() << '\n';
            }
            lock.lock();
            stop_cv_.wait_for(lock, poll_, [this] { return stopping_; });
        }
    });
}

void FacilitatorScheduler::stop()
{
    {
        std::lock_guard lock(stop_mutex_);
        stopping_ = true;
    }
    stop_cv_.notify_all();
    if (worker_.joinable()) worker_.join();
}

std::size_t FacilitatorScheduler::run_due(Timestamp now)
{
    std::lock_guard lock(mutex_);
    std::size_t posted = 0;
    for (const Theme& theme : service_.themes()) {
        auto [it, fresh] = last_tick_.try_emplace(theme.theme_id, now);
        if (fresh || !theme.policy.enabled || now - it->second < theme.policy.period) continue;
        it->second = now;
        try {
            if (service_.run_tick(theme.theme_id, now)) ++posted;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::UnknownTheme) throw;
        }
    }
    return posted;
}

}  // namespace ibis
