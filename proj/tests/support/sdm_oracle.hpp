#pragma once

// Brute-force structured distributional model for agent and patient targets:
// scans every edge and event of the graph instead of using its indexes.

#include <algorithm>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "gek/datasets.hpp"
#include "gek/embeddings.hpp"
#include "gek/event_graph.hpp"
#include "support/oracles.hpp"

namespace gek::testing {

struct NaiveScore {
  double score = 0.0;
  bool fallback = false;
};

inline std::vector<double> as_std(const Vector<double>& v) { return {v.data(), v.data() + v.size()}; }

inline NaiveScore naive_sdm(const EventTuple& tuple, const std::string& filler, const EventGraph& g,
                            const EmbeddingStore<double>& store, std::size_t k) {
  auto relation = [](Role r) { return r == Role::agent ? std::string("nsubj") : std::string("obj"); };
  const std::string target = relation(tuple.target_role);
  std::string verb;
  for (const auto& s : tuple.slots) {
    if (s.role == Role::verb) verb = s.lemma;
  }

  using Ranked = std::tuple<double, double, std::string>;  // -weight, -count, lemma
  auto verb_associates = [&] {
    std::vector<Ranked> r;
    for (const auto& e : g.edges()) {
      if (e.head == verb && e.relation == target) {
        r.emplace_back(-e.lmi, -static_cast<double>(e.count), e.dependent);
      }
    }
    return r;
  };

  std::vector<double> lc;
  std::vector<std::vector<double>> role_vectors;
  for (const auto& s : tuple.slots) {
    if (s.role == tuple.target_role) continue;
    auto v = as_std(*store.find(s.lemma));
    lc = lc.empty() ? v : naive_add(lc, v);

    std::vector<Ranked> ranked;
    if (s.role == Role::verb) {
      ranked = verb_associates();
    } else {
      std::map<std::string, double> weight;
      for (const auto& ev : g.events()) {
        if (ev.verb != verb) continue;
        bool has_cue = false;
        for (const auto& [rel, lemma] : ev.roles) has_cue |= rel == relation(s.role) && lemma == s.lemma;
        if (!has_cue) continue;
        for (const auto& [rel, lemma] : ev.roles) {
          if (rel == target) weight[lemma] += static_cast<double>(ev.count);
        }
      }
      for (const auto& [lemma, w] : weight) ranked.emplace_back(-w, -w, lemma);
      if (ranked.empty()) ranked = verb_associates();
    }
    std::sort(ranked.begin(), ranked.end());
    if (ranked.size() > k) ranked.resize(k);
    std::vector<std::vector<double>> found;
    for (const auto& r : ranked) {
      if (const auto* v = store.find(std::get<2>(r))) found.push_back(as_std(*v));
    }
    if (!found.empty()) role_vectors.push_back(naive_mean(found));
  }

  const auto f = as_std(store.at(filler));
  const double with_lc = naive_cosine(f, lc);
  if (role_vectors.empty()) return {with_lc, true};
  return {(with_lc + naive_cosine(f, naive_mean(role_vectors))) / 2.0, false};
}

}  // namespace gek::testing
