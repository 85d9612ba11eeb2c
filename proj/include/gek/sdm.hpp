#pragma once

#include <atomic>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "gek/datasets.hpp"
#include "gek/embeddings.hpp"
#include "gek/event_graph.hpp"
#include "gek/role_relations.hpp"

namespace gek {

inline constexpr std::string_view kSdmScorer = "sdm";

struct SdmOptions {
  /// Associates retrieved per cue.
  std::size_t k = 20;
  /// Unit-normalize each cue's role vector before averaging them into AC.
  bool normalize_role_vectors = false;
  RoleRelationMap relations = RoleRelationMap::universal_dependencies();
};

/// Which associates one context cue contributed to the active context.
struct CueTrace {
  Role role;
  std::string cue;
  std::vector<std::string> associates;
  bool fallback = false;
};

template <typename Scalar>
struct SemanticRepresentation {
  Vector<Scalar> lc;
  std::optional<Vector<Scalar>> ac;
  std::vector<CueTrace> cue_trace;  // nonempty iff ac is present
};

struct FillerScore {
  double score = 0.0;
  bool used_fallback = false;
};

/// Sum of the embeddings of the verb and every realized non-target argument.
/// Throws UncoveredItem naming the first lemma without an embedding.
template <typename Scalar>
Vector<Scalar> build_lc(const EventTuple& tuple, const EmbeddingStore<Scalar>& store) {
  Vector<Scalar> lc = Vector<Scalar>::Zero(store.dimension());
  for (const auto& slot : tuple.context()) lc += store.at(slot.lemma);
  return lc;
}

/// Target-role fillers expected from one context cue: joint events of the
/// verb with the cue, or the verb's associates when no such event exists.
inline FillerQuery expected_fillers(const EventGraph& graph, const EventTuple& tuple,
                                    const Slot& cue, const SdmOptions& options) {
  std::vector<Cue> cues{{std::string(kVerbRelation), tuple.verb()}};
  if (cue.role != Role::verb) {
    cues.push_back({options.relations.resolve(cue.role, tuple.preposition_for(cue.role)).front().label, cue.lemma});
  }

  auto query = [&](const RelationSpec& target) {
    if (target.direction == Direction::as_head) {
      return query_event_fillers(graph, cues, target.label, options.k);
    }
    // Events only store dependents of the verb; other directions use edges.
    return FillerQuery{top_associates(graph, tuple.verb(), target.label, Direction::as_dependent,
                                      options.k),
                       cues.size() > 1};
  };

  auto targets = options.relations.resolve(tuple.target_role, tuple.preposition_for(tuple.target_role));
  if (targets.size() == 1) return query(targets.front());

  FillerQuery merged;
  merged.fallback = true;
  std::map<std::string, Associate> by_lemma;
  for (const auto& target : targets) {
    auto q = query(target);
    merged.fallback = merged.fallback && q.fallback;
    for (auto& a : q.fillers) {
      auto [it, inserted] = by_lemma.try_emplace(a.lemma, a);
      if (!inserted) {
        it->second.weight += a.weight;
        it->second.count += a.count;
      }
    }
  }
  for (auto& [lemma, a] : by_lemma) merged.fillers.push_back(std::move(a));
  std::sort(merged.fillers.begin(), merged.fillers.end(), [](const Associate& a, const Associate& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    if (a.count != b.count) return a.count > b.count;
    return a.lemma < b.lemma;
  });
  if (merged.fillers.size() > options.k) merged.fillers.resize(options.k);
  return merged;
}

/// Active-context prototype: the centroid of one role vector per context cue,
/// each role vector being the centroid of that cue's embeddable associates.
/// Absent when no cue yields an embeddable associate.
template <typename Scalar>
std::optional<Vector<Scalar>> build_ac(const EventTuple& tuple, const EventGraph& graph,
                                       const EmbeddingStore<Scalar>& store,
                                       const SdmOptions& options = {},
                                       std::vector<CueTrace>* trace = nullptr) {
  std::vector<Vector<Scalar>> role_vectors;
  for (const auto& slot : tuple.context()) {
    auto query = expected_fillers(graph, tuple, slot, options);
    std::vector<Vector<Scalar>> found;
    CueTrace entry{slot.role, slot.lemma, {}, query.fallback};
    for (const auto& a : query.fillers) {
      if (const auto* v = store.find(a.lemma)) {
        found.push_back(*v);
        entry.associates.push_back(a.lemma);
      }
    }
    if (found.empty()) continue;
    Vector<Scalar> rv = centroid<Scalar>(found);
    if (options.normalize_role_vectors) {
      const Scalar n = rv.norm();
      if (n == Scalar(0)) continue;
      rv /= n;
    }
    role_vectors.push_back(std::move(rv));
    if (trace) trace->push_back(std::move(entry));
  }
  if (role_vectors.empty()) return std::nullopt;
  Vector<Scalar> ac = centroid<Scalar>(role_vectors);
  if (ac.isZero(0)) {
    if (trace) trace->clear();
    return std::nullopt;
  }
  return ac;
}

template <typename Scalar>
SemanticRepresentation<Scalar> represent(const EventTuple& tuple, const EventGraph& graph,
                                         const EmbeddingStore<Scalar>& store,
                                         const SdmOptions& options = {}) {
  SemanticRepresentation<Scalar> rep;
  rep.lc = build_lc(tuple, store);
  rep.ac = build_ac(tuple, graph, store, options, &rep.cue_trace);
  return rep;
}

/// (cos(f, LC) + cos(f, AC)) / 2, or cos(f, LC) alone when AC is absent.
template <typename Scalar>
FillerScore score_filler(std::string_view filler, const SemanticRepresentation<Scalar>& rep,
                         const EmbeddingStore<Scalar>& store) {
  const auto& f = store.at(filler);
  const double with_lc = static_cast<double>(cosine(f, rep.lc));
  if (!rep.ac) return {with_lc, true};
  const double with_ac = static_cast<double>(cosine(f, *rep.ac));
  return {(with_lc + with_ac) / 2.0, false};
}

template <typename Scalar>
FillerScore score_filler(std::string_view filler, const EventTuple& tuple, const EventGraph& graph,
                         const EmbeddingStore<Scalar>& store, const SdmOptions& options = {}) {
  store.at(filler);
  return score_filler(filler, represent(tuple, graph, store, options), store);
}

struct UncoveredPair {
  std::string pair_id;
  std::string reason;
};

struct PairTrace {
  std::string pair_id;
  bool used_fallback = false;
  std::vector<CueTrace> cues;
};

struct ScoredDataset {
  std::vector<ScoreRecord> records;  // typical then atypical, in input order
  std::vector<UncoveredPair> uncovered;
  std::vector<PairTrace> traces;     // one per covered pair
};

/// Scores both fillers of every pair. Pairs with an out-of-vocabulary lemma
/// (or an undefined cosine) are reported as uncovered instead.
template <typename Scalar>
ScoredDataset score_dataset(std::span<const ItemPair> pairs, const EventGraph& graph,
                            const EmbeddingStore<Scalar>& store, const SdmOptions& options = {},
                            unsigned threads = 1) {
  struct Outcome {
    std::optional<FillerScore> typical, atypical;
    std::vector<CueTrace> cues;
    std::string reason;
  };
  std::vector<Outcome> outcomes(pairs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (auto i = next++; i < pairs.size(); i = next++) {
      const auto& pair = pairs[i];
      auto& out = outcomes[i];
      try {
        store.at(pair.typical.lemma);
        store.at(pair.atypical.lemma);
        auto rep = represent(pair.base, graph, store, options);
        out.typical = score_filler(pair.typical.lemma, rep, store);
        out.atypical = score_filler(pair.atypical.lemma, rep, store);
        out.cues = std::move(rep.cue_trace);
      } catch (const UncoveredItem& e) {
        out.typical.reset();
        out.reason = "out of vocabulary: " + e.lemma();
      } catch (const ZeroVectorError& e) {
        out.typical.reset();
        out.reason = e.what();
      }
    }
  };
  {
    const auto workers = std::max(1u, std::min<unsigned>(threads, pairs.size()));
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
  }

  ScoredDataset result;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto& out = outcomes[i];
    if (!out.typical) {
      result.uncovered.push_back({pairs[i].pair_id, std::move(out.reason)});
      continue;
    }
    std::string scorer(kSdmScorer);
    result.records.push_back({pairs[i].pair_id, Variant::typical, scorer, out.typical->score});
    result.records.push_back({pairs[i].pair_id, Variant::atypical, scorer, out.atypical->score});
    result.traces.push_back({pairs[i].pair_id, out.typical->used_fallback, std::move(out.cues)});
  }
  return result;
}

/// Explainability dump: pair_id, cue role, cue lemma, fallback flag, associates.
void write_traces(std::ostream& out, std::span<const PairTrace> traces);

}  // namespace gek
