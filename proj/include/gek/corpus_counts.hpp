#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace gek {

struct EdgeKey {
  std::string head;
  std::string relation;
  std::string dependent;

  friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

/// (relation, lemma) dependent of an event's verb.
using RoleFiller = std::pair<std::string, std::string>;

/// A verb with the sorted, duplicate-free set of its harvested dependents.
struct EventKey {
  std::string verb;
  std::vector<RoleFiller> roles;

  friend bool operator==(const EventKey&, const EventKey&) = default;
  friend auto operator<=>(const EventKey&, const EventKey&) = default;
};

struct EdgeKeyHash {
  std::size_t operator()(const EdgeKey& key) const noexcept;
};
struct EventKeyHash {
  std::size_t operator()(const EventKey& key) const noexcept;
};

/// Raw syntactic statistics of a corpus. Counts merge by addition, so shards
/// can be counted independently and combined in any order.
class RelationCounts {
 public:
  using NodeMap = std::unordered_map<std::string, std::uint64_t>;
  using EdgeMap = std::unordered_map<EdgeKey, std::uint64_t, EdgeKeyHash>;
  using EventMap = std::unordered_map<EventKey, std::uint64_t, EventKeyHash>;

  void add_node(const std::string& lemma, std::uint64_t n = 1);
  void add_edge(const EdgeKey& edge, std::uint64_t n = 1);
  void add_event(const EventKey& event, std::uint64_t n = 1);
  void merge(const RelationCounts& other);

  const NodeMap& node_freq() const noexcept { return nodes_; }
  const EdgeMap& edge_freq() const noexcept { return edges_; }
  const EventMap& event_freq() const noexcept { return events_; }
  const NodeMap& relation_totals() const noexcept { return relation_totals_; }

  bool empty() const noexcept { return nodes_.empty() && edges_.empty() && events_.empty(); }

  friend bool operator==(const RelationCounts&, const RelationCounts&) = default;

 private:
  NodeMap nodes_;
  EdgeMap edges_;
  EventMap events_;
  NodeMap relation_totals_;
};

struct IngestConfig {
  /// Dependency labels to harvest. A subtyped label ("obl:tmod") matches its
  /// base ("obl") when only the base is listed.
  std::set<std::string> relations{"nsubj", "obj", "obl"};
  /// Rewrites an "obl" edge as "obl:<case lemma>" using the dependent's case child.
  bool mark_oblique_case = true;
  std::size_t max_event_arity = 3;
  /// Tokens with these UPOS tags are neither nodes nor edge endpoints.
  std::set<std::string> skip_upos{"PUNCT", "SYM", "X"};
  /// Heads with these UPOS tags root joint events.
  std::set<std::string> event_head_upos{"VERB"};
};

struct IngestStats {
  std::size_t sentences = 0;
  std::size_t skipped_sentences = 0;
  std::size_t tokens = 0;

  IngestStats& operator+=(const IngestStats& o) {
    sentences += o.sentences;
    skipped_sentences += o.skipped_sentences;
    tokens += o.tokens;
    return *this;
  }
};

/// Streams CoNLL-U sentences. Malformed sentences are skipped with a warning.
RelationCounts ingest_conllu(std::istream& in, const IngestConfig& config,
                             IngestStats* stats = nullptr);

/// Counts each file as an independent shard on up to `threads` workers and
/// merges the results. Files may be gzip-compressed.
RelationCounts ingest_files(std::span<const std::filesystem::path> shards,
                            const IngestConfig& config, unsigned threads = 1,
                            IngestStats* stats = nullptr);

}  // namespace gek
