#pragma once
// Forum-level records: participants, themes and their JSON forms.

#include "ibis/facilitator.hpp"
#include "ibis/model.hpp"
#include "ibis/post.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace ibis {

enum class Gender { Female, Male, Other, Undisclosed };

std::string_view to_string(Gender g) noexcept;
std::optional<Gender> parse_gender(std::string_view text) noexcept;

struct ParticipantProfile {
    ParticipantId participant_id;
    std::string name;
    Gender gender = Gender::Undisclosed;
    std::string email;
    std::optional<std::string> photo_ref;
    Timestamp registered_at{};
    bool consent = false;

    friend bool operator==(const ParticipantProfile&, const ParticipantProfile&) = default;
};

struct Registration {
    std::string name;
    Gender gender = Gender::Undisclosed;
    std::string email;
    std::optional<std::string> photo_ref;
    bool consent = false;
};

/// Loose syntactic check: one '@', non-empty local part, a dotted domain,
/// no whitespace.
bool is_valid_email(std::string_view email) noexcept;

/// Stand-in for an external sign-in provider. `verify` throws to refuse a
/// registration; the default accepts any syntactically valid address.
class IdentityProvider {
public:
    virtual ~IdentityProvider() = default;
    virtual void verify(const Registration& registration) const;
};

enum class Stance { Opposing, Agreement };

std::string_view to_string(Stance s) noexcept;

/// 1..5 opposing, 6..10 agreement. Errors: OutOfRange.
Stance satisfaction_stance(int satisfaction);

struct Theme {
    ThemeId theme_id;
    std::string title;
    std::string description;
    ParticipantId created_by = kAdministratorId;
    FacilitatorPolicy policy;
    bool open = true;
    Timestamp created_at{};

    friend bool operator==(const Theme&, const Theme&) = default;
};

/// Consistent copy of one theme's data, taken under the theme's read lock.
struct ThemeSnapshot {
    Theme theme;
    DiscussionTree tree;
    std::vector<Post> posts;  // chronological
};

nlohmann::json profile_to_json(const ParticipantProfile& profile);
nlohmann::json theme_to_json(const Theme& theme);

/// Public form of a post. With `disclose_agent` false, agent posts are shown
/// under the facilitator name without the agent flag.
nlohmann::json post_to_json(const Post& post, std::string_view author_name, bool disclose_agent = true);

}  // namespace ibis
