#include <sstream>

#include "doctest.h"

#include "gek/corpus_counts.hpp"
#include "gek/fixtures.hpp"
#include "gek/sdm.hpp"
#include "support/generators.hpp"
#include "support/sdm_oracle.hpp"

using namespace gek;
using gek::testing::Gen;

namespace {

Vector<double> vec(double x, double y) { return (Vector<double>(2) << x, y).finished(); }

EventTuple tailor_sew() {
  return {"t1", {{Role::agent, "tailor"}, {Role::verb, "sew"}, {Role::patient, "___"}}, Role::patient};
}

Edge edge(std::string h, std::string r, std::string d, std::uint64_t c, double lmi) {
  return {std::move(h), std::move(r), std::move(d), c, lmi / static_cast<double>(c), lmi};
}

EventGraph graph_of(std::vector<Edge> edges, std::vector<Event> events) {
  std::map<std::string, std::uint64_t> nodes;
  for (const auto& e : edges) nodes[e.head] += e.count, nodes[e.dependent] += e.count;
  for (const auto& ev : events) {
    nodes[ev.verb] += ev.count;
    for (const auto& [rel, lemma] : ev.roles) nodes[lemma] += ev.count;
  }
  return {std::move(nodes), std::move(edges), std::move(events), {1, 1}};
}

EventGraph fixture_graph(std::size_t sentences = 500) {
  std::stringstream corpus;
  write_fixture_corpus(corpus, sentences, 42);
  return compute_association(ingest_conllu(corpus, IngestConfig{}));
}

}  // namespace

TEST_CASE("build_lc sums the context") {
  EmbeddingStore<double> s(2);
  s.insert("sew", vec(1, 0));
  s.insert("tailor", vec(0, 1));
  CHECK(build_lc(tailor_sew(), s) == vec(1, 1));

  EventTuple lone{"t2", {{Role::verb, "sew"}, {Role::patient, "___"}}, Role::patient};
  CHECK(build_lc(lone, s) == vec(1, 0));

  EventTuple oov{"t3", {{Role::agent, "robot"}, {Role::verb, "sew"}, {Role::patient, "___"}}, Role::patient};
  try {
    build_lc(oov, s);
    FAIL("expected UncoveredItem");
  } catch (const UncoveredItem& e) {
    CHECK(e.lemma() == "robot");
  }
}

TEST_CASE("build_ac") {
  EmbeddingStore<double> s(2);
  s.insert("sew", vec(1, 0));
  s.insert("tailor", vec(0, 1));
  s.insert("dress", vec(1, 1));
  s.insert("button", vec(0, 1));
  s.insert("cloth", vec(1, 0));

  SUBCASE("a single associate for both cues") {
    auto g = graph_of({edge("sew", "obj", "dress", 3, 6.0)}, {});
    std::vector<CueTrace> trace;
    auto ac = build_ac(tailor_sew(), g, s, {}, &trace);
    REQUIRE(ac);
    CHECK(*ac == vec(1, 1));
    REQUIRE(trace.size() == 2);
    CHECK(trace[0].role == Role::agent);
    CHECK(trace[0].fallback);
    CHECK(trace[1].role == Role::verb);
    CHECK_FALSE(trace[1].fallback);
  }
  SUBCASE("disjoint cue associates average their role vectors") {
    auto g = graph_of({edge("sew", "obj", "cloth", 3, 6.0)},
                      {{"sew", {{"nsubj", "tailor"}, {"obj", "button"}}, 2}});
    auto ac = build_ac(tailor_sew(), g, s);
    REQUIRE(ac);
    CHECK(*ac == vec(0.5, 0.5));
  }
  SUBCASE("role vectors can be normalized first") {
    s.insert("gown", vec(2, 0));
    auto g = graph_of({edge("sew", "obj", "gown", 3, 6.0)},
                      {{"sew", {{"nsubj", "tailor"}, {"obj", "button"}}, 2}});
    CHECK(*build_ac(tailor_sew(), g, s) == vec(1, 0.5));
    SdmOptions normalized;
    normalized.normalize_role_vectors = true;
    CHECK(*build_ac(tailor_sew(), g, s, normalized) == vec(0.5, 0.5));
  }
  SUBCASE("associates without vectors are skipped") {
    auto g = graph_of({edge("sew", "obj", "zipper", 5, 20.0), edge("sew", "obj", "dress", 1, 1.0)}, {});
    std::vector<CueTrace> trace;
    CHECK(*build_ac(tailor_sew(), g, s, {}, &trace) == vec(1, 1));
    CHECK(trace[1].associates == std::vector<std::string>{"dress"});
  }
  SUBCASE("k bounds the associates per cue") {
    auto g = graph_of({edge("sew", "obj", "cloth", 5, 20.0), edge("sew", "obj", "button", 1, 1.0)}, {});
    SdmOptions one;
    one.k = 1;
    CHECK(*build_ac(tailor_sew(), g, s, one) == vec(1, 0));
    CHECK(*build_ac(tailor_sew(), g, s) == vec(0.5, 0.5));
  }
  SUBCASE("no associates means no active context") {
    std::vector<CueTrace> trace;
    CHECK_FALSE(build_ac(tailor_sew(), EventGraph{}, s, {}, &trace));
    CHECK(trace.empty());
  }
  SUBCASE("a zero centroid counts as absent") {
    s.insert("left", vec(-1, 0));
    auto g = graph_of({edge("sew", "obj", "cloth", 3, 6.0), edge("sew", "obj", "left", 3, 6.0)}, {});
    EventTuple lone{"t2", {{Role::verb, "sew"}, {Role::patient, "___"}}, Role::patient};
    CHECK_FALSE(build_ac(lone, g, s));
  }
}

TEST_CASE("score_filler") {
  EmbeddingStore<double> s(2);
  s.insert("f", vec(1, 1));
  SemanticRepresentation<double> rep{vec(1, 1), vec(1, 0), {}};
  auto both = score_filler("f", rep, s);
  CHECK(std::abs(both.score - 0.853553390) < 1e-9);
  CHECK(std::abs(both.score - (1.0 + 1.0 / std::sqrt(2.0)) / 2.0) < 1e-15);
  CHECK_FALSE(both.used_fallback);

  EmbeddingStore<double> t(2);
  t.insert("f", vec(1, 0));
  SemanticRepresentation<double> mixed{vec(0.6, 0.8), vec(0.4, std::sqrt(0.84)), {}};
  CHECK(std::abs(score_filler("f", mixed, t).score - 0.5) < 1e-12);

  SemanticRepresentation<double> lc_only{vec(0.6, 0.8), std::nullopt, {}};
  auto alone = score_filler("f", lc_only, t);
  CHECK(alone.used_fallback);
  CHECK(alone.score == cosine(t.at("f"), vec(0.6, 0.8)));

  CHECK_THROWS_AS(score_filler("g", rep, s), UncoveredItem);
}

TEST_CASE("a single stored event gives the closed form") {
  Gen g(5);
  for (int trial = 0; trial < 50; ++trial) {
    EmbeddingStore<double> s(4);
    for (const char* w : {"tailor", "sew", "dress", "f"}) {
      Vector<double> v(4);
      for (int i = 0; i < 4; ++i) v[i] = g.uniform(-1, 1);
      s.insert(w, v);
    }
    auto graph = graph_of({edge("sew", "obj", "dress", 2, 4.0), edge("sew", "nsubj", "tailor", 2, 4.0)},
                          {{"sew", {{"nsubj", "tailor"}, {"obj", "dress"}}, 2}});
    const auto lc = (s.at("tailor") + s.at("sew")).eval();
    const double expected = (cosine(s.at("f"), lc) + cosine(s.at("f"), s.at("dress"))) / 2.0;
    CHECK(std::abs(score_filler("f", tailor_sew(), graph, s).score - expected) < 1e-12);
  }
}

TEST_CASE("scores survive uniform rescaling and slot reordering") {
  auto graph = fixture_graph(200);
  auto base = fixture_vectors(7);
  auto pairs = fixture_pairs(Role::patient);
  Gen g(99);
  for (int trial = 0; trial < 20; ++trial) {
    const double alpha = std::exp(g.uniform(-5, 5));
    EmbeddingStore<double> scaled(base.dimension());
    for (const auto& w : base.words()) scaled.insert(w, alpha * base.at(w));
    for (const auto& p : pairs) {
      auto a = score_filler(p.typical.lemma, p.base, graph, base);
      auto b = score_filler(p.typical.lemma, p.base, graph, scaled);
      CHECK(std::abs(a.score - b.score) < 1e-12);

      auto shuffled = p.base;
      g.shuffle(shuffled.slots);
      CHECK(std::abs(score_filler(p.typical.lemma, shuffled, graph, base).score - a.score) < 1e-12);
    }
  }
}

TEST_CASE("score_dataset") {
  auto graph = fixture_graph();
  auto store = fixture_vectors(42);
  for (Role role : {Role::agent, Role::patient}) {
    CAPTURE(to_string(role));
    auto pairs = fixture_pairs(role);
    auto scored = score_dataset<double>(pairs, graph, store);
    REQUIRE(scored.records.size() == 20);
    CHECK(scored.uncovered.empty());
    CHECK(scored.traces.size() == 10);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto& t = scored.records[2 * i];
      const auto& a = scored.records[2 * i + 1];
      CHECK(t.item_id == pairs[i].pair_id);
      CHECK(t.variant == Variant::typical);
      CHECK(a.variant == Variant::atypical);
      CHECK(t.scorer == "sdm");
      CHECK(t.score > a.score);

      auto naive_t = gek::testing::naive_sdm(pairs[i].base, pairs[i].typical.lemma, graph, store, 20);
      auto naive_a = gek::testing::naive_sdm(pairs[i].base, pairs[i].atypical.lemma, graph, store, 20);
      CHECK(std::abs(t.score - naive_t.score) < 1e-12);
      CHECK(std::abs(a.score - naive_a.score) < 1e-12);
      CHECK(scored.traces[i].used_fallback == naive_t.fallback);
    }

    auto threaded = score_dataset<double>(pairs, graph, store, {}, 4);
    CHECK(threaded.records == scored.records);

    EmbeddingStore<float> narrow(store.dimension());
    for (const auto& w : store.words()) narrow.insert(w, store.at(w));
    auto single = score_dataset<float>(pairs, graph, narrow);
    REQUIRE(single.records.size() == 20);
    for (std::size_t i = 0; i < 20; ++i) {
      CHECK(std::abs(single.records[i].score - scored.records[i].score) < 1e-5);
    }
  }

  SUBCASE("out-of-vocabulary pairs are reported, not scored") {
    auto pairs = fixture_pairs(Role::patient);
    pairs[3].atypical.lemma = "zebra";
    auto scored = score_dataset<double>(pairs, graph, store, {}, 3);
    CHECK(scored.records.size() == 18);
    REQUIRE(scored.uncovered.size() == 1);
    CHECK(scored.uncovered[0].pair_id == pairs[3].pair_id);
    CHECK(scored.uncovered[0].reason == "out of vocabulary: zebra");
  }
}

TEST_CASE("oracle agreement on random graphs") {
  Gen g(2024);
  const std::vector<std::string> lemmas{"a", "b", "c", "d", "e", "f"};
  for (int trial = 0; trial < 100; ++trial) {
    RelationCounts counts;
    for (int n = 0; n < 40; ++n) {
      std::string verb = g.coin(0.5) ? "v" : "w";
      EventKey ev{verb, {}};
      if (g.coin(0.8)) ev.roles.emplace_back("nsubj", g.pick(lemmas));
      if (g.coin(0.8)) ev.roles.emplace_back("obj", g.pick(lemmas));
      if (ev.roles.empty()) continue;
      std::sort(ev.roles.begin(), ev.roles.end());
      counts.add_node(verb);
      for (const auto& [rel, lemma] : ev.roles) {
        counts.add_node(lemma);
        counts.add_edge({verb, rel, lemma});
      }
      counts.add_event(ev);
    }
    auto graph = compute_association(counts);
    EmbeddingStore<double> store(3);
    for (const auto& w : {"a", "b", "c", "d", "e", "v", "w"}) {  // "f" stays out of vocabulary
      Vector<double> v(3);
      for (int i = 0; i < 3; ++i) v[i] = g.uniform(0.1, 1.0);
      store.insert(w, v);
    }
    const Role target = g.coin(0.5) ? Role::agent : Role::patient;
    const Role other = target == Role::agent ? Role::patient : Role::agent;
    EventTuple tuple{"x", {{Role::verb, g.coin(0.5) ? "v" : "w"}, {target, "___"}}, target};
    if (g.coin(0.7)) tuple.slots.push_back({other, lemmas[g.index(5)]});
    const std::size_t k = 1 + g.index(4);
    SdmOptions options;
    options.k = k;
    for (const char* filler : {"a", "c", "e"}) {
      auto fast = score_filler(filler, tuple, graph, store, options);
      auto slow = gek::testing::naive_sdm(tuple, filler, graph, store, k);
      CHECK(std::abs(fast.score - slow.score) < 1e-12);
      CHECK(fast.used_fallback == slow.fallback);
    }
  }
}

TEST_CASE("write_traces") {
  std::vector<PairTrace> traces{
      {"p1", false, {{Role::verb, "sew", {"dress", "button"}, false}, {Role::agent, "tailor", {}, true}}},
      {"p2", true, {}}};
  std::ostringstream out;
  write_traces(out, traces);
  CHECK(out.str() ==
        "pair_id\tcue_role\tcue\tfallback\tassociates\n"
        "p1\tverb\tsew\tno\tdress,button\n"
        "p1\tagent\ttailor\tyes\t\n"
        "p2\t-\t-\tyes\t\n");
}
