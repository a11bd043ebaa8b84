#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "sketchmo/errors.hpp"

namespace sketchmo {

// Tracked joints of a dataset entry. Root drives the global stage; the other
// three are the only limbs that can be sketched and grafted in the local stage.
enum class Role { root, head, left_hand, right_hand };

inline constexpr std::array<Role, 4> kAllRoles{Role::root, Role::head, Role::left_hand, Role::right_hand};
inline constexpr std::array<Role, 3> kLimbRoles{Role::head, Role::left_hand, Role::right_hand};

inline std::string_view to_string(Role r) {
    switch (r) {
        case Role::root: return "root";
        case Role::head: return "head";
        case Role::left_hand: return "left_hand";
        case Role::right_hand: return "right_hand";
    }
    return "?";
}

inline std::optional<Role> role_from_string(std::string_view s) {
    for (Role r : kAllRoles)
        if (to_string(r) == s) return r;
    return std::nullopt;
}

inline Role parse_role(std::string_view s) {
    if (auto r = role_from_string(s)) return *r;
    throw LookupError("unknown role '" + std::string(s) + "'");
}

inline bool is_limb(Role r) { return r != Role::root; }

}  // namespace sketchmo
