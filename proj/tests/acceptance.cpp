// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Tolerances and time limits are fixed here.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include "gek/corpus_counts.hpp"
#include "gek/diagnostics.hpp"
#include "gek/eval.hpp"
#include "gek/event_graph.hpp"
#include "gek/fixtures.hpp"
#include "gek/sdm.hpp"
#include "gek/stats.hpp"
#include "support/generators.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"
#include "support/sdm_oracle.hpp"

using namespace gek;
using gek::testing::Gen;

namespace {

constexpr double kOracleTolerance = 1e-9;

/// Records the first failed expectation of a criterion.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failure_.empty()) failure_ = what;
  }
  void near(double actual, double expected, double tolerance, const std::string& what) {
    if (!(std::abs(actual - expected) <= tolerance)) {
      expect(false, what + ": got " + format_double(actual) + ", expected " + format_double(expected));
    }
  }
  const std::string& failure() const { return failure_; }

 private:
  std::string failure_;
};

struct Criterion {
  std::string name;
  double limit_seconds;
  std::function<void(Checks&)> body;
};

Eigen::VectorXd ev(const std::vector<double>& xs) {
  return Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

std::string graph_bytes(const EventGraph& g) {
  std::ostringstream out(std::ios::binary);
  write_graph(g, out);
  return out.str();
}

EventGraph fixture_graph() {
  std::stringstream corpus;
  write_fixture_corpus(corpus, 500, 42);
  return compute_association(ingest_conllu(corpus, IngestConfig{}));
}

void association_oracle(Checks& c) {
  RelationCounts hand;
  hand.add_edge({"eat", "obj", "pizza"}, 4);
  hand.add_edge({"eat", "obj", "cake"}, 1);
  hand.add_edge({"cook", "obj", "soup"}, 5);
  auto g = compute_association(hand);
  std::vector<gek::testing::CountedEdge> naive;
  for (const auto& e : g.edges()) naive.push_back({e.head, e.relation, e.dependent, static_cast<double>(e.count)});
  auto expected = gek::testing::naive_association(naive);
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    const auto& e = g.edges()[i];
    if (e.dependent == "pizza") {
      c.expect(e.pmi == 1.0, "hand fixture PMI(eat, obj, pizza) is not exactly 1.0");
      c.expect(e.lmi == 4.0, "hand fixture LMI(eat, obj, pizza) is not exactly 4.0");
    }
    c.near(e.pmi, expected[i].first, 1e-12, "hand fixture PMI of " + e.dependent);
    c.near(e.lmi, expected[i].second, 1e-12, "hand fixture LMI of " + e.dependent);
  }

  Gen gen(1);
  const std::vector<std::string> heads{"h0", "h1", "h2", "h3", "h4", "h5"};
  const std::vector<std::string> deps{"d0", "d1", "d2", "d3", "d4", "h1"};
  const std::vector<std::string> rels{"nsubj", "obj", "obl:with", "obl:on"};
  for (int table = 0; table < 1000; ++table) {
    RelationCounts counts;
    for (std::size_t i = 0; i < 1 + gen.index(30); ++i) {
      const auto n = static_cast<std::uint64_t>(gen.integer(1, 1000));
      const auto& h = gen.pick(heads);
      const auto& d = gen.pick(deps);
      counts.add_edge({h, gen.pick(rels), d}, n);
      counts.add_node(h, n);
      counts.add_node(d, n);
    }
    auto graph = compute_association(counts);
    std::vector<gek::testing::CountedEdge> edges;
    for (const auto& e : graph.edges()) {
      edges.push_back({e.head, e.relation, e.dependent, static_cast<double>(e.count)});
    }
    auto want = gek::testing::naive_association(edges);
    c.expect(graph.edges().size() == counts.edge_freq().size(), "edge count differs from the table");
    for (std::size_t i = 0; i < want.size(); ++i) {
      c.near(graph.edges()[i].pmi, want[i].first, kOracleTolerance, "random table PMI");
      c.near(graph.edges()[i].lmi, want[i].second, kOracleTolerance, "random table LMI");
    }
  }
}

void spearman_oracle(Checks& c) {
  Gen g(2);
  for (int trial = 0; trial < 500; ++trial) {
    const auto n = static_cast<std::size_t>(g.integer(3, 200));
    auto xs = g.varied(n), ys = g.varied(n);
    c.near(spearman(ev(xs), ev(ys)), gek::testing::naive_spearman(xs, ys), kOracleTolerance,
           "spearman vs oracle, n=" + std::to_string(n));
  }
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<std::size_t>(g.integer(3, 200));
    auto xs = g.varied(n), ys = g.varied(n);
    auto f = g.monotone();
    std::vector<double> fx;
    for (double x : xs) fx.push_back(f(x));
    c.near(spearman(ev(fx), ev(ys)), spearman(ev(xs), ev(ys)), kOracleTolerance, "monotone invariance");
  }
}

void equation_one(Checks& c) {
  EmbeddingStore<double> s(2);
  s.insert("f", (Vector<double>(2) << 1, 1).finished());
  SemanticRepresentation<double> rep{(Vector<double>(2) << 1, 1).finished(),
                                     (Vector<double>(2) << 1, 0).finished(), {}};
  c.near(score_filler("f", rep, s).score, 0.853553390, 1e-9, "2-d fixture");

  SemanticRepresentation<double> lc_only{(Vector<double>(2) << 0.3, 0.9).finished(), std::nullopt, {}};
  auto fb = score_filler("f", lc_only, s);
  c.expect(fb.used_fallback, "fallback flag not set without an active context");
  c.expect(fb.score == cosine(s.at("f"), lc_only.lc), "fallback score is not exactly cos(f, LC)");

  auto graph = fixture_graph();
  auto base = fixture_vectors(42);
  auto pairs = fixture_pairs(Role::patient);
  Gen g(3);
  for (int trial = 0; trial < 100; ++trial) {
    const double alpha = std::exp(g.uniform(-6, 6));
    EmbeddingStore<double> scaled(base.dimension());
    for (const auto& w : base.words()) scaled.insert(w, alpha * base.at(w));
    const auto& p = pairs[static_cast<std::size_t>(trial) % pairs.size()];
    c.near(score_filler(p.typical.lemma, p.base, graph, scaled).score,
           score_filler(p.typical.lemma, p.base, graph, base).score, 1e-12, "rescaling invariance");
  }
}

void graph_determinism(Checks& c) {
  gek::testing::TempDir dir;
  std::ostringstream corpus;
  write_fixture_corpus(corpus, 500, 42);
  const auto text = corpus.str();
  std::vector<std::string> sentences;
  for (std::size_t start = 0; start < text.size();) {
    const auto end = text.find("\n\n", start) + 2;
    sentences.push_back(text.substr(start, end - start));
    start = end;
  }
  c.expect(sentences.size() == 500, "fixture corpus does not have 500 sentences");

  std::vector<std::string> persisted;
  for (std::size_t shards : {1u, 2u, 4u}) {
    std::vector<std::filesystem::path> paths;
    for (std::size_t s = 0; s < shards; ++s) {
      std::string chunk;
      for (std::size_t i = s * sentences.size() / shards; i < (s + 1) * sentences.size() / shards; ++i) {
        chunk += sentences[i];
      }
      paths.push_back(dir / ("s" + std::to_string(shards) + "_" + std::to_string(s) + ".conllu"));
      gek::testing::write_text(paths.back(), chunk);
    }
    auto graph = compute_association(ingest_files(paths, {}, static_cast<unsigned>(shards)));
    const auto file = dir / ("g" + std::to_string(shards) + ".bin");
    save_graph(graph, file);
    persisted.push_back(gek::testing::read_text(file));

    c.expect(prune(graph, {1, 1}) == graph, "pruning with (1, 1) changed the graph");
    c.expect(graph_bytes(prune(graph, {1, 1})) == graph_bytes(graph), "pruning with (1, 1) changed the bytes");
    auto pruned = prune(graph);
    c.expect(pruned.thresholds() == PruneThresholds{300, 30}, "default thresholds are not (300, 30)");
    c.expect(load_graph(file).thresholds() == PruneThresholds{1, 1}, "unpruned graph lost its (1, 1) metadata");
    save_graph(pruned, dir / "pruned.bin");
    c.expect(load_graph(dir / "pruned.bin").thresholds() == PruneThresholds{300, 30},
             "persisted metadata lost the (300, 30) defaults");
  }
  c.expect(persisted[1] == persisted[0], "2 shards differ from 1 shard");
  c.expect(persisted[2] == persisted[0], "4 shards differ from 1 shard");
}

void end_to_end(Checks& c) {
  auto graph = fixture_graph();
  auto store = fixture_vectors(42);
  for (Role role : {Role::agent, Role::patient}) {
    const std::string tag(to_string(role));
    auto pairs = fixture_pairs(role);
    for (const auto& p : pairs) {
      auto t = gek::testing::naive_sdm(p.base, p.typical.lemma, graph, store, 20);
      auto a = gek::testing::naive_sdm(p.base, p.atypical.lemma, graph, store, 20);
      c.expect(t.score > a.score, "brute force: intended filler loses for " + p.pair_id);
      c.near(score_filler(p.typical.lemma, p.base, graph, store).score, t.score, 1e-12,
             "scorer vs brute force for " + p.pair_id);
    }
    auto scored = score_dataset<double>(pairs, graph, store, {}, 2);
    c.expect(scored.uncovered.empty(), tag + ": fixture pairs left uncovered");
    EvalOptions o;
    o.dataset = "fixture-" + tag;
    o.scorer = std::string(kSdmScorer);
    auto report = evaluate(pairs, scored.records, o);
    c.expect(report.accuracy && *report.accuracy == 1.0,
             tag + ": accuracy " + (report.accuracy ? format_double(*report.accuracy) : "-"));
    c.expect(report.spearman_rho && *report.spearman_rho >= 0.8,
             tag + ": spearman " + (report.spearman_rho ? format_double(*report.spearman_rho) : "-"));
  }
}

void stimulus_realization(Checks& c) {
  auto tuple = [](std::vector<Slot> slots, Role target) { return EventTuple{"x", std::move(slots), target, {}, {}}; };
  auto tailor = tuple({{Role::agent, "tailor"}, {Role::verb, "sew"}, {Role::patient, "___"}}, Role::patient);
  auto actor = tuple({{Role::agent, "actor"}, {Role::verb, "win"}, {Role::patient, "___"}}, Role::patient);
  auto boxer = tuple({{Role::agent, "boxer"}, {Role::verb, "deliver"}, {Role::patient, "punch"}, {Role::location, "___"}},
                     Role::location);
  auto guard = tuple({{Role::agent, "guard"}, {Role::verb, "open"}, {Role::patient, "door"}, {Role::instrument, "___"}},
                     Role::instrument);
  const std::vector<std::pair<std::string, std::string>> verbatim{
      {realize_declarative(tailor, "dress").text(), "The tailor sewed the dress."},
      {realize_cleft(actor, "award").text(), "It was the award that the actor won."},
      {realize_cleft(boxer, "ring").text(), "It was on the ring that the boxer delivered the punch."},
      {realize_cleft(guard, "key").masked("[MASK]"), "It was with the [MASK] that the guard opened the door."},
      {realize_wh(actor, "award").text(), "Which award did the actor win?"},
      {realize_wh(boxer, "ring").text(), "On which ring did the boxer deliver the punch?"},
  };
  for (const auto& [got, want] : verbatim) c.expect(got == want, "'" + got + "' != '" + want + "'");

  const std::set<std::string> function_words{"the", "it", "was", "that", "which", "did", "with", "on"};
  for (Role role : {Role::agent, Role::patient}) {
    for (const auto& p : fixture_pairs(role)) {
      for (const auto* filler : {&p.typical.lemma, &p.atypical.lemma}) {
        std::multiset<std::string> want{*filler};
        for (const auto& s : p.base.slots) {
          if (s.role != p.base.target_role) want.insert(s.lemma);
        }
        for (auto construction : kAllConstructions) {
          auto s = realize(p.base, *filler, Variant::typical, construction);
          std::multiset<std::string> got;
          std::string word;
          for (char ch : s.text() + " ") {
            if (std::isalpha(static_cast<unsigned char>(ch))) {
              word += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
              continue;
            }
            if (word == past_tense(p.base.verb())) word = p.base.verb();
            if (!word.empty() && !function_words.contains(word)) got.insert(word);
            word.clear();
          }
          c.expect(got == want, "content words of '" + s.text() + "'");
          c.expect(s.text().substr(s.slot_offset(), s.filler.size()) == *filler, "slot offset of '" + s.text() + "'");
        }
      }
    }
  }
}

void diagnostics_rules(Checks& c) {
  const FrequencyTable freq{{"plant", 900000}, {"flora", 12000}, {"herb", 300000}, {"sprout", 299999}};
  auto verdict = [&](std::string o, std::string r) {
    return validate_synonym_swap({std::move(o), std::move(r), 0, 0, SwapSource::synonym, 0}, freq);
  };
  c.expect(verdict("plant", "flora").valid, "plant -> flora rejected");
  c.expect(!verdict("flora", "plant").valid && verdict("flora", "plant").reason.starts_with("rule 1"),
           "a more frequent replacement passes rule 1");
  c.expect(!verdict("plant", "herb").valid && verdict("plant", "herb").reason.starts_with("rule 2"),
           "a replacement exactly at the 300000 cap passes rule 2");
  c.expect(verdict("plant", "sprout").valid, "a replacement just under the cap is rejected");

  std::map<std::string, std::uint64_t> nodes;
  std::vector<Edge> edges;
  for (auto [dep, count, lmi] : std::vector<std::tuple<std::string, std::uint64_t, double>>{
           {"album", 40, 120.0}, {"hostage", 30, 90.0}, {"prisoner", 25, 60.0}, {"single", 12, 33.0},
           {"statement", 10, 20.0}}) {
    edges.push_back({"release", "obj", dep, count, lmi / static_cast<double>(count), lmi});
    nodes[dep] = count;
  }
  nodes["release"] = 117;
  EventGraph graph(nodes, edges, {}, {1, 1});
  ItemPair pair{"r1", {"hostage", 6.0}, {"prisoner", 2.0},
                {"r1", {{Role::agent, "terrorist"}, {Role::verb, "release"}, {Role::patient, "___"}}, Role::patient, {}, {}}};
  auto got = adversarial_fillers(graph, pair, "obj", 10);
  c.expect(got.size() == 3 && got[0].replacement == "album", "album is not the top adversarial filler");
  for (std::size_t i = 0; i < got.size(); ++i) {
    c.expect(got[i].replacement != "hostage" && got[i].replacement != "prisoner", "an existing filler was suggested");
    if (i > 0) c.expect(got[i - 1].lmi >= got[i].lmi, "adversarial fillers are not LMI-sorted");
  }
  c.expect(adversarial_fillers(graph, pair, "obj", 0).empty(), "k = 0 returned candidates");

  auto store = fixture_vectors(42);
  auto fixture = compute_association([] {
    std::stringstream corpus;
    write_fixture_corpus(corpus, 200, 42);
    return ingest_conllu(corpus, IngestConfig{});
  }());
  for (const auto& p : fixture_pairs(Role::patient)) {
    auto cands = adversarial_fillers(fixture, p, "obj", 5);
    auto ranked = top_associates(fixture, p.base.verb(), "obj", Direction::as_head, 100);
    std::vector<std::string> expected;
    for (const auto& a : ranked) {
      if (a.lemma != p.typical.lemma && a.lemma != p.atypical.lemma && expected.size() < 5) expected.push_back(a.lemma);
    }
    std::vector<std::string> actual;
    for (const auto& cand : cands) actual.push_back(cand.replacement);
    c.expect(actual == expected, "fixture adversarial list for " + p.pair_id);
  }
}

void statistics_edges(Checks& c) {
  auto same = fisher_r_to_z(0.55, 100, 0.55, 100);
  c.expect(same.z == 0.0 && same.p_one_tailed == 0.5, "equal correlations do not give z=0, p=0.5");
  Gen g(8);
  for (int trial = 0; trial < 1000; ++trial) {
    const double r1 = g.uniform(-0.99, 0.99), r2 = g.uniform(-0.99, 0.99);
    const auto n1 = static_cast<std::size_t>(g.integer(4, 1000)), n2 = static_cast<std::size_t>(g.integer(4, 1000));
    auto a = fisher_r_to_z(r1, n1, r2, n2), b = fisher_r_to_z(r2, n2, r1, n1);
    c.expect(a.z == -b.z, "fisher antisymmetry");
    c.near(a.p_one_tailed + b.p_one_tailed, 1.0, 1e-12, "fisher p complement");
  }

  for (int trial = 0; trial < 100; ++trial) {
    auto human = g.continuous(3 + g.index(50), 1, 7);
    const double slope = g.uniform(0.1, 4), offset = g.uniform(-5, 5);
    std::vector<double> linear;
    for (double h : human) linear.push_back(offset + slope * h);
    c.near(residual_sum(ev(human), ev(linear)), 0.0, 1e-9, "residual_sum on linear data");
  }

  for (int trial = 0; trial < 1000; ++trial) {
    auto xs = g.varied(2 + g.index(100));
    auto s = minmax_scale(ev(xs));
    c.expect(s.minCoeff() == 0.0 && s.maxCoeff() == 1.0, "minmax endpoints");
    for (std::size_t i = 1; i < xs.size(); ++i) {
      const auto a = static_cast<Eigen::Index>(i - 1), b = static_cast<Eigen::Index>(i);
      c.expect((xs[i - 1] < xs[i]) == (s[a] < s[b]) && (xs[i - 1] == xs[i]) == (s[a] == s[b]), "minmax order");
    }
  }
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"LMI/PMI oracle equivalence", 1.0, association_oracle},
      {"Spearman oracle equivalence", 5.0, spearman_oracle},
      {"SDM score correctness", 1.0, equation_one},
      {"Graph pipeline determinism", 10.0, graph_determinism},
      {"End-to-end fixture run", 10.0, end_to_end},
      {"Stimulus realization", 1.0, stimulus_realization},
      {"Diagnostics rules", 1.0, diagnostics_rules},
      {"Statistics edge behavior", 2.0, statistics_edges},
  };
  gek::testing::CapturedWarnings quiet;
  int failed = 0;
  for (const auto& criterion : criteria) {
    Checks checks;
    const auto start = std::chrono::steady_clock::now();
    try {
      criterion.body(checks);
    } catch (const std::exception& e) {
      checks.expect(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string detail = checks.failure();
    if (detail.empty() && seconds > criterion.limit_seconds) detail = "exceeded the time limit";
    const bool ok = detail.empty();
    failed += ok ? 0 : 1;
    std::printf("%s  %-30s %7.3f s (limit %.0f s)%s%s\n", ok ? "PASS" : "FAIL", criterion.name.c_str(), seconds,
                criterion.limit_seconds, ok ? "" : "  ", detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
