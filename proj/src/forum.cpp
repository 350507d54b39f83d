#include "ibis/forum.hpp"

#include "ibis/error.hpp"
#include "ibis/text.hpp"

#include <algorithm>

namespace ibis {

std::string_view to_string(Gender g) noexcept
{
    switch (g) {
        case Gender::Female: return "female";
        case Gender::Male: return "male";
        case Gender::Other: return "other";
        case Gender::Undisclosed: return "undisclosed";
    }
    return "undisclosed";
}

std::optional<Gender> parse_gender(std::string_view text) noexcept
{
    for (Gender g : {Gender::Female, Gender::Male, Gender::Other, Gender::Undisclosed}) {
        if (text::to_lower(text) == to_string(g)) return g;
    }
    if (text == "f" || text == "F") return Gender::Female;
    if (text == "m" || text == "M") return Gender::Male;
    return std::nullopt;
}

bool is_valid_email(std::string_view email) noexcept
{
    if (email.empty() || email.size() > 254) return false;
    if (std::any_of(email.begin(), email.end(), [](char c) { return text::is_space(c); })) return false;
    const auto at = email.find('@');
    if (at == std::string_view::npos || at == 0 || email.find('@', at + 1) != std::string_view::npos) return false;
    const std::string_view domain = email.substr(at + 1);
    const auto dot = domain.find('.');
    return dot != std::string_view::npos && dot > 0 && domain.back() != '.' && domain.find("..") == std::string_view::npos;
}

void IdentityProvider::verify(const Registration& r) const
{
    if (!is_valid_email(r.email)) throw Error(ErrorCode::InvalidEmail, "invalid email address: " + r.email);
}

std::string_view to_string(Stance s) noexcept { return s == Stance::Opposing ? "opposing" : "agreement"; }

Stance satisfaction_stance(int satisfaction)
{
    if (satisfaction < 1 || satisfaction > 10) {
        throw Error(ErrorCode::OutOfRange, "satisfaction must be between 1 and 10, got " + std::to_string(satisfaction));
    }
    return satisfaction <= 5 ? Stance::Opposing : Stance::Agreement;
}

nlohmann::json profile_to_json(const ParticipantProfile& p)
{
    nlohmann::json j{
        {"participant_id", p.participant_id.value},
        {"name", p.name},
        {"gender", to_string(p.gender)},
        {"email", p.email},
        {"registered_at", to_epoch_ms(p.registered_at)},
        {"consent", p.consent},
    };
    j["photo_ref"] = p.photo_ref ? nlohmann::json(*p.photo_ref) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json theme_to_json(const Theme& t)
{
    return {
        {"theme_id", t.theme_id.value},
        {"title", t.title},
        {"description", t.description},
        {"created_by", t.created_by.value},
        {"policy", policy_to_json(t.policy)},
        {"open", t.open},
        {"created_at", to_epoch_ms(t.created_at)},
    };
}

nlohmann::json post_to_json(const Post& post, std::string_view author_name, bool disclose_agent)
{
    nlohmann::json j{
        {"post_id", post.post_id.value},
        {"theme_id", post.theme_id.value},
        {"author_id", post.author_id.value},
        {"author_name", author_name},
        {"text", post.text},
        {"created_at", to_epoch_ms(post.created_at)},
        {"is_agent", post.is_agent && disclose_agent},
    };
    j["parent_post_id"] = post.parent_post_id ? nlohmann::json(post.parent_post_id->value) : nlohmann::json(nullptr);
    if (post.satisfaction) {
        j["satisfaction"] = *post.satisfaction;
        j["stance"] = to_string(satisfaction_stance(*post.satisfaction));
    } else {
        j["satisfaction"] = nullptr;
    }
    return j;
}

}  // namespace ibis
