#pragma once
// Strongly typed identifiers and the millisecond timestamp used across the
// discussion service.

#include <atomic>
#include <chrono>
#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>

namespace ibis {

template <typename Tag>
struct Id {
    std::uint64_t value = 0;

    constexpr Id() = default;
    constexpr explicit Id(std::uint64_t v) : value(v) {}

    friend constexpr auto operator<=>(const Id&, const Id&) = default;

    friend std::ostream& operator<<(std::ostream& os, const Id& id) { return os << id.value; }
};

using NodeId = Id<struct NodeTag>;
using PostId = Id<struct PostTag>;
using ParticipantId = Id<struct ParticipantTag>;
using ThemeId = Id<struct ThemeTag>;

// Reserved author identities. Registered participants are numbered from
// kFirstParticipantId upward.
inline constexpr ParticipantId kFacilitatorId{0};
inline constexpr ParticipantId kAdministratorId{1};
inline constexpr std::uint64_t kFirstParticipantId = 2;

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;
using Millis = std::chrono::milliseconds;

inline std::int64_t to_epoch_ms(Timestamp t) { return t.time_since_epoch().count(); }
inline Timestamp from_epoch_ms(std::int64_t ms) { return Timestamp{Millis{ms}}; }

/// Thread-safe monotonically increasing id source.
template <typename IdT>
class IdSequence {
public:
    explicit IdSequence(std::uint64_t first = 1) : next_(first) {}
    IdSequence(const IdSequence&) = delete;
    IdSequence& operator=(const IdSequence&) = delete;

    IdT next() noexcept { return IdT{next_.fetch_add(1)}; }
    std::uint64_t peek() const noexcept { return next_.load(); }
    /// Ensures later ids are strictly greater than `used`.
    void advance_past(IdT used) noexcept
    {
        std::uint64_t cur = next_.load();
        while (cur <= used.value && !next_.compare_exchange_weak(cur, used.value + 1)) {
        }
    }

private:
    std::atomic<std::uint64_t> next_;
};

inline Timestamp now_ms()
{
    return std::chrono::time_point_cast<Millis>(std::chrono::system_clock::now());
}

}  // namespace ibis

template <typename Tag>
struct std::hash<ibis::Id<Tag>> {
    std::size_t operator()(const ibis::Id<Tag>& id) const noexcept
    {
        return std::hash<std::uint64_t>{}(id.value);
    }
};
