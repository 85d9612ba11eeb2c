#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gek/event_graph.hpp"
#include "gek/role.hpp"

namespace gek {

struct RelationSpec {
  /// Dependency label; "{prep}" is replaced by the item's preposition.
  std::string label;
  /// as_head: the filler depends on the verb.
  Direction direction = Direction::as_head;

  friend bool operator==(const RelationSpec&, const RelationSpec&) = default;
};

/// Maps semantic roles onto the dependency labels harvested into the graph.
class RoleRelationMap {
 public:
  /// agent -> nsubj, patient -> obj, obliques -> obl:{prep}.
  static RoleRelationMap universal_dependencies();

  /// Replaces the labels for `role`; throws when `specs` is empty.
  void set(Role role, std::vector<RelationSpec> specs);

  /// Labels for `role` with "{prep}" substituted by `preposition`, or by the
  /// role's default preposition when none is given.
  std::vector<RelationSpec> resolve(Role role,
                                    std::optional<std::string_view> preposition = {}) const;

  const std::map<Role, std::vector<RelationSpec>>& entries() const noexcept { return map_; }

 private:
  std::map<Role, std::vector<RelationSpec>> map_;
};

}  // namespace gek
