#include "gek/role_relations.hpp"

#include "gek/error.hpp"

namespace gek {

RoleRelationMap RoleRelationMap::universal_dependencies() {
  RoleRelationMap m;
  m.set(Role::agent, {{"nsubj"}});
  m.set(Role::patient, {{"obj"}});
  m.set(Role::instrument, {{"obl:{prep}"}});
  m.set(Role::time, {{"obl:{prep}"}});
  m.set(Role::location, {{"obl:{prep}"}});
  return m;
}

void RoleRelationMap::set(Role role, std::vector<RelationSpec> specs) {
  if (role == Role::verb) throw Error("corpus-graph", "the verb role has no relation label");
  if (specs.empty()) {
    throw Error("corpus-graph",
                "role " + std::string(to_string(role)) + " needs at least one relation label");
  }
  for (const auto& s : specs) {
    if (s.label.empty()) throw Error("corpus-graph", "empty relation label");
  }
  map_[role] = std::move(specs);
}

std::vector<RelationSpec> RoleRelationMap::resolve(Role role,
                                                   std::optional<std::string_view> preposition) const {
  auto it = map_.find(role);
  if (it == map_.end()) {
    throw Error("corpus-graph",
                "no relation label configured for role " + std::string(to_string(role)));
  }
  std::string prep(preposition.value_or(default_preposition(role)));
  auto specs = it->second;
  for (auto& s : specs) {
    static constexpr std::string_view kPlaceholder = "{prep}";
    auto pos = s.label.find(kPlaceholder);
    if (pos == std::string::npos) continue;
    if (prep.empty()) {
      throw Error("corpus-graph", "relation '" + s.label + "' needs a preposition for role " +
                                      std::string(to_string(role)));
    }
    s.label.replace(pos, kPlaceholder.size(), prep);
  }
  return specs;
}

}  // namespace gek
