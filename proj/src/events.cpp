#include "ibis/events.hpp"

#include <algorithm>

namespace ibis {

std::optional<Event> Subscription::next(std::chrono::milliseconds timeout)
{
    std::unique_lock lock(mutex_);
    cv_.wait_for(lock, timeout, [&] { return !queue_.empty() || closed_; });
    if (queue_.empty()) return std::nullopt;
    Event e = std::move(queue_.front());
    queue_.pop_front();
    return e;
}

std::vector<Event> Subscription::drain()
{
    std::lock_guard lock(mutex_);
    std::vector<Event> out(std::make_move_iterator(queue_.begin()), std::make_move_iterator(queue_.end()));
    queue_.clear();
    return out;
}

void Subscription::close()
{
    {
        std::lock_guard lock(mutex_);
        closed_ = true;
    }
    cv_.notify_all();
}

bool Subscription::closed() const
{
    std::lock_guard lock(mutex_);
    return closed_;
}

bool Subscription::push(const Event& e)
{
    {
        std::lock_guard lock(mutex_);
        if (closed_) return false;
        if (queue_.size() >= capacity_) {
            closed_ = true;
        } else {
            queue_.push_back(e);
        }
    }
    cv_.notify_all();
    return true;
}

std::shared_ptr<Subscription> EventBus::subscribe(ThemeId theme)
{
    auto sub = std::make_shared<Subscription>(capacity_);
    std::lock_guard lock(mutex_);
    subscribers_[theme].push_back(sub);
    return sub;
}

void EventBus::publish(ThemeId theme, std::string type, nlohmann::json data)
{
    std::lock_guard lock(mutex_);
    Event e{++seq_[theme], theme, std::move(type), std::move(data)};
    auto it = subscribers_.find(theme);
    if (it == subscribers_.end()) return;
    auto& subs = it->second;
    std::erase_if(subs, [&](const std::shared_ptr<Subscription>& s) { return !s->push(e) || s->closed(); });
}

std::size_t EventBus::subscriber_count(ThemeId theme) const
{
    std::lock_guard lock(mutex_);
    auto it = subscribers_.find(theme);
    if (it == subscribers_.end()) return 0;
    return static_cast<std::size_t>(
        std::count_if(it->second.begin(), it->second.end(), [](const auto& s) { return !s->closed(); }));
}

void EventBus::close_all()
{
    std::lock_guard lock(mutex_);
    for (auto& [theme, subs] : subscribers_) {
        for (auto& s : subs) s->close();
    }
    subscribers_.clear();
}

std::string format_sse(const Event& e)
{
    return "id: " + std::to_string(e.seq) + "\nevent: " + e.type + "\ndata: " + e.data.dump() + "\n\n";
}

}  // namespace ibis
