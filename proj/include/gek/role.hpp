#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace gek {

/// Semantic roles of an event tuple. The enumerator order is the canonical
/// slot order used for composition and realization.
enum class Role { agent, verb, patient, instrument, time, location };

inline constexpr std::array kAllRoles{Role::agent,      Role::verb, Role::patient,
                                      Role::instrument, Role::time, Role::location};

std::string_view to_string(Role role);

/// Throws gek::Error for unknown names.
Role parse_role(std::string_view name);

std::optional<Role> try_parse_role(std::string_view name);

/// Instrument, time and location are realized as prepositional obliques.
constexpr bool is_oblique(Role role) {
  return role == Role::instrument || role == Role::time || role == Role::location;
}

/// Preposition used for an oblique role when the item does not override it.
std::string_view default_preposition(Role role);

enum class Variant { typical, atypical };

std::string_view to_string(Variant variant);
Variant parse_variant(std::string_view name);

}  // namespace gek
