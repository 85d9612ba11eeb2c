#include "gek/role.hpp"

#include <string>

#include "gek/error.hpp"

namespace gek {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::agent: return "agent";
    case Role::verb: return "verb";
    case Role::patient: return "patient";
    case Role::instrument: return "instrument";
    case Role::time: return "time";
    case Role::location: return "location";
  }
  return "?";
}

std::optional<Role> try_parse_role(std::string_view name) {
  for (auto role : kAllRoles) {
    if (to_string(role) == name) return role;
  }
  return std::nullopt;
}

Role parse_role(std::string_view name) {
  if (auto role = try_parse_role(name)) return *role;
  throw Error("datasets", "unknown role '" + std::string(name) + "'");
}

std::string_view default_preposition(Role role) {
  switch (role) {
    case Role::instrument: return "with";
    case Role::location: return "on";
    case Role::time: return "during";
    default: return "";
  }
}

std::string_view to_string(Variant variant) {
  return variant == Variant::typical ? "typical" : "atypical";
}

Variant parse_variant(std::string_view name) {
  if (name == "typical") return Variant::typical;
  if (name == "atypical") return Variant::atypical;
  throw Error("datasets", "unknown variant '" + std::string(name) + "'");
}

}  // namespace gek
