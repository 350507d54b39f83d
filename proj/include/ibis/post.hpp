#pragma once

#include "ibis/ids.hpp"

#include <optional>
#include <string>

namespace ibis {

inline constexpr std::size_t kMaxPostLength = 4000;

/// A raw participant or agent submission. Agent posts carry no satisfaction.
struct Post {
    PostId post_id;
    ThemeId theme_id;
    ParticipantId author_id;
    std::optional<PostId> parent_post_id;
    std::string text;
    std::optional<int> satisfaction;
    Timestamp created_at{};
    bool is_agent = false;

    friend bool operator==(const Post&, const Post&) = default;
};

}  // namespace ibis
