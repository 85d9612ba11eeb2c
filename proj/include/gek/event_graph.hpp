#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gek/corpus_counts.hpp"

namespace gek {

/// Frequency floors applied by `prune`. Defaults are the full-corpus setting.
struct PruneThresholds {
  std::uint64_t min_node_freq = 300;
  std::uint64_t min_event_freq = 30;

  friend bool operator==(const PruneThresholds&, const PruneThresholds&) = default;
};

struct Edge {
  std::string head;
  std::string relation;
  std::string dependent;
  std::uint64_t count = 0;
  double pmi = 0.0;
  double lmi = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Event {
  std::string verb;
  std::vector<RoleFiller> roles;  // sorted by (relation, lemma)
  std::uint64_t count = 0;

  friend bool operator==(const Event&, const Event&) = default;
};

enum class Direction { as_head, as_dependent };

/// A ranked neighbour. `weight` is LMI for edge queries and the summed event
/// count for joint-event queries.
struct Associate {
  std::string lemma;
  double weight = 0.0;
  std::uint64_t count = 0;

  friend bool operator==(const Associate&, const Associate&) = default;
};

/// Distributional Event Graph: lemma nodes, relation-labelled weighted edges
/// and verb-rooted joint events. Immutable once built; safe to share across
/// threads for reading.
class EventGraph {
 public:
  EventGraph() = default;
  EventGraph(std::map<std::string, std::uint64_t> nodes, std::vector<Edge> edges,
             std::vector<Event> events, PruneThresholds thresholds);

  const std::map<std::string, std::uint64_t>& nodes() const noexcept { return nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<Event>& events() const noexcept { return events_; }
  const PruneThresholds& thresholds() const noexcept { return thresholds_; }

  std::optional<std::uint64_t> node_freq(std::string_view lemma) const;

  /// Indices into edges() whose head (or dependent) is `lemma`.
  std::span<const std::size_t> edges_with_head(std::string_view lemma) const;
  std::span<const std::size_t> edges_with_dependent(std::string_view lemma) const;
  /// Indices into events() rooted at `verb`.
  std::span<const std::size_t> events_of_verb(std::string_view verb) const;
  /// Indices into events() containing the (relation, lemma) dependent.
  std::span<const std::size_t> events_with(std::string_view relation, std::string_view lemma) const;

  friend bool operator==(const EventGraph& a, const EventGraph& b) {
    return a.thresholds_ == b.thresholds_ && a.nodes_ == b.nodes_ && a.edges_ == b.edges_ &&
           a.events_ == b.events_;
  }

 private:
  using Index = std::unordered_map<std::string, std::vector<std::size_t>>;
  static std::span<const std::size_t> lookup(const Index& index, std::string_view key);
  void build_indexes();

  std::map<std::string, std::uint64_t> nodes_;
  std::vector<Edge> edges_;
  std::vector<Event> events_;
  PruneThresholds thresholds_{1, 1};
  Index by_head_;
  Index by_dependent_;
  Index by_verb_;
  Index by_role_;
};

/// Weights every edge with PMI (log2, maximum-likelihood probabilities within
/// the edge's relation) and LMI = count * PMI. The result is unpruned and
/// records thresholds (1, 1).
EventGraph compute_association(const RelationCounts& counts);

/// Drops nodes below min_node_freq with their incident edges, and events below
/// min_event_freq or touching a dropped node.
EventGraph prune(const EventGraph& graph, PruneThresholds thresholds = {});

/// The k highest-LMI neighbours of `cue` under `relation`. Ties go to the
/// higher raw count, then to the lexicographically smaller lemma.
std::vector<Associate> top_associates(const EventGraph& graph, std::string_view cue,
                                      std::string_view relation, Direction direction,
                                      std::size_t k);

/// Relation name that addresses an event's verb in a cue list.
inline constexpr std::string_view kVerbRelation = "verb";

struct Cue {
  std::string relation;
  std::string lemma;
};

struct FillerQuery {
  std::vector<Associate> fillers;
  bool fallback = false;
};

/// Ranks fillers of `target_relation` over the stored events that contain
/// every cue. Without a matching event, falls back to top_associates of the
/// verb cue and sets `fallback`. A lone verb cue is answered by
/// top_associates directly.
FillerQuery query_event_fillers(const EventGraph& graph, std::span<const Cue> cues,
                                std::string_view target_relation, std::size_t k);

inline constexpr std::uint32_t kGraphFormatVersion = 1;

void write_graph(const EventGraph& graph, std::ostream& out);
EventGraph read_graph(std::istream& in);
void save_graph(const EventGraph& graph, const std::filesystem::path& path);
EventGraph load_graph(const std::filesystem::path& path);

/// Writes <prefix>.nodes.tsv, <prefix>.edges.tsv and <prefix>.events.tsv.
void export_graph_tsv(const EventGraph& graph, const std::filesystem::path& prefix);

/// Lemma frequency table (lemma <TAB> count), sorted by lemma.
void write_frequencies(std::ostream& out, const RelationCounts::NodeMap& freq);
std::unordered_map<std::string, std::uint64_t> load_frequencies(const std::filesystem::path& path);

}  // namespace gek
