#include "gek/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <thread>
#include <type_traits>

#include "CLI11.hpp"
#include "json.hpp"

#include "gek/config.hpp"
#include "gek/corpus_counts.hpp"
#include "gek/datasets.hpp"
#include "gek/diagnostics.hpp"
#include "gek/embeddings.hpp"
#include "gek/eval.hpp"
#include "gek/event_graph.hpp"
#include "gek/fixtures.hpp"
#include "gek/io.hpp"
#include "gek/log.hpp"
#include "gek/sdm.hpp"

namespace gek {
namespace {

namespace fs = std::filesystem;
using config::Kind;

const std::vector<std::string> kRoleNames{"agent", "patient", "instrument", "time", "location"};

// Feeds a validated JSON config file to CLI11, which gives command-line
// values precedence over file values.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(const config::Schema& schema) : schema_(schema) {}

  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return {}; }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw config::ConfigError("", std::string("not valid JSON: ") + e.what());
    }
    std::vector<CLI::ConfigItem> items;
    for (auto& s : schema_.validate(doc)) {
      CLI::ConfigItem item;
      item.parents = std::move(s.section);
      item.name = std::move(s.key);
      item.inputs = std::move(s.inputs);
      items.push_back(std::move(item));
    }
    return items;
  }

 private:
  const config::Schema& schema_;
};

template <typename T>
constexpr Kind kind_of() {
  if constexpr (std::is_same_v<T, bool>) return Kind::boolean;
  else if constexpr (std::is_integral_v<T>) return Kind::integer;
  else if constexpr (std::is_floating_point_v<T>) return Kind::number;
  else if constexpr (std::is_same_v<T, fs::path>) return Kind::path;
  else if constexpr (std::is_same_v<T, std::vector<fs::path>>) return Kind::path_list;
  else if constexpr (std::is_same_v<T, std::vector<std::string>>) return Kind::string_list;
  else return Kind::string;
}

template <typename T>
nlohmann::json json_default(const T& value) {
  if constexpr (std::is_same_v<T, fs::path>) return value.string();
  else if constexpr (std::is_same_v<T, std::vector<fs::path>>) {
    auto j = nlohmann::json::array();
    for (const auto& p : value) j.push_back(p.string());
    return j;
  } else return value;
}

// Declares options on one (sub)command and records them in the config schema.
class Section {
 public:
  Section(CLI::App* app, std::vector<std::string> path, config::Schema& schema)
      : app_(app), path_(std::move(path)), schema_(schema) {}

  CLI::App* app() const { return app_; }

  Section sub(const std::string& name, const std::string& description) {
    auto p = path_;
    p.push_back(name);
    return Section(app_->add_subcommand(name, description), std::move(p), schema_);
  }

  template <typename T>
  CLI::Option* option(const std::string& key, T& value, const std::string& description,
                      std::optional<double> minimum = {}) {
    config::Entry e{path_, key, kind_of<T>(), description, minimum, {}, {}};
    CLI::Option* opt;
    if constexpr (std::is_same_v<T, bool>) {
      opt = app_->add_flag("--" + key, value, description);
      e.default_value = false;
    } else {
      opt = app_->add_option("--" + key, value, description);
      if constexpr (std::is_arithmetic_v<T>) {
        opt->capture_default_str();
        e.default_value = json_default(value);
        if (minimum) {
          const double lo = *minimum;
          opt->check(CLI::Validator(
              [lo](std::string& text) -> std::string {
                auto v = parse_double(text);
                if (v && *v >= lo) return {};
                return "value " + text + " must be >= " + format_double(lo);
              },
              ">=" + format_double(lo)));
        }
      } else if constexpr (std::is_same_v<T, std::vector<std::string>> ||
                           std::is_same_v<T, std::vector<fs::path>>) {
        opt->delimiter(',');
        if (!value.empty()) {
          opt->capture_default_str();
          e.default_value = json_default(value);
        }
      } else {
        if (!value.empty()) {
          opt->capture_default_str();
          e.default_value = json_default(value);
        }
      }
    }
    schema_.add(std::move(e));
    return opt;
  }

  template <typename T>
  CLI::Option* input(const std::string& key, T& value, const std::string& description) {
    return option(key, value, description)->check(CLI::ExistingFile);
  }

  CLI::Option* choice(const std::string& key, std::string& value,
                      const std::vector<std::string>& choices, const std::string& description) {
    config::Entry e{path_, key, Kind::choice, description, {}, choices, {}};
    auto* opt = app_->add_option("--" + key, value, description)->check(CLI::IsMember(choices));
    if (!value.empty()) {
      opt->capture_default_str();
      e.default_value = value;
    }
    schema_.add(std::move(e));
    return opt;
  }

 private:
  CLI::App* app_;
  std::vector<std::string> path_;
  config::Schema& schema_;
};

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& writer) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  atomic_write(path, writer);
}

// ---------------------------------------------------------------- build-graph

struct BuildGraphArgs {
  std::vector<fs::path> corpus;
  fs::path out;
  std::uint64_t min_node_freq = PruneThresholds{}.min_node_freq;
  std::uint64_t min_event_freq = PruneThresholds{}.min_event_freq;
  std::size_t max_arity = 3;
  std::vector<std::string> relations{"nsubj", "obj", "obl"};
  bool plain_obl = false;
  fs::path tsv;
  fs::path frequencies;
};

void build_graph(const BuildGraphArgs& a, unsigned threads, std::ostream& out) {
  IngestConfig ic;
  ic.relations = {a.relations.begin(), a.relations.end()};
  ic.mark_oblique_case = !a.plain_obl;
  ic.max_event_arity = a.max_arity;
  IngestStats stats;
  const auto counts = ingest_files(a.corpus, ic, threads, &stats);
  const auto graph = prune(compute_association(counts), {a.min_node_freq, a.min_event_freq});
  if (a.out.has_parent_path()) fs::create_directories(a.out.parent_path());
  save_graph(graph, a.out);
  if (!a.tsv.empty()) export_graph_tsv(graph, a.tsv);
  if (!a.frequencies.empty()) {
    write_file(a.frequencies, [&](std::ostream& o) { write_frequencies(o, counts.node_freq()); });
  }
  out << "sentences\t" << stats.sentences << "\nskipped_sentences\t" << stats.skipped_sentences
      << "\nnodes\t" << graph.nodes().size() << "\nedges\t" << graph.edges().size()
      << "\nevents\t" << graph.events().size() << "\nmin_node_freq\t"
      << graph.thresholds().min_node_freq << "\nmin_event_freq\t"
      << graph.thresholds().min_event_freq << '\n';
}

// ---------------------------------------------------------------- score-sdm

struct ScoreSdmArgs {
  fs::path graph;
  fs::path vectors;
  fs::path dataset;
  std::string role = "patient";
  std::size_t k = SdmOptions{}.k;
  bool normalize_role_vectors = false;
  std::string precision = "double";
  std::vector<std::string> relation;
  fs::path out;
  fs::path uncovered;
  fs::path trace;
};

RoleRelationMap relation_map(const std::vector<std::string>& overrides) {
  auto map = RoleRelationMap::universal_dependencies();
  std::map<Role, std::vector<RelationSpec>> specs;
  for (const auto& o : overrides) {
    auto eq = o.find('=');
    if (eq == std::string::npos) {
      throw Error("cli", "relation override '" + o + "' must look like role=label");
    }
    auto role = parse_role(trim(std::string_view(o).substr(0, eq)));
    auto label = std::string(trim(std::string_view(o).substr(eq + 1)));
    auto direction = Direction::as_head;
    if (label.starts_with('^')) {
      direction = Direction::as_dependent;
      label.erase(0, 1);
    }
    specs[role].push_back({label, direction});
  }
  for (auto& [role, list] : specs) map.set(role, std::move(list));
  return map;
}

template <typename Scalar>
void score_sdm(const ScoreSdmArgs& a, unsigned threads, std::ostream& out) {
  const auto role = parse_role(a.role);
  const auto pairs = load_dtfit(a.dataset, role);
  const auto graph = load_graph(a.graph);

  std::unordered_set<std::string> wanted;
  for (const auto& [lemma, freq] : graph.nodes()) wanted.insert(lemma);
  for (const auto& p : pairs) {
    wanted.insert(p.typical.lemma);
    wanted.insert(p.atypical.lemma);
    for (const auto& s : p.base.slots) wanted.insert(s.lemma);
  }
  const auto store = load_vectors<Scalar>(a.vectors, &wanted);

  SdmOptions options;
  options.k = a.k;
  options.normalize_role_vectors = a.normalize_role_vectors;
  options.relations = relation_map(a.relation);
  const auto scored = score_dataset<Scalar>(pairs, graph, store, options, threads);

  write_file(a.out, [&](std::ostream& o) { write_scores(o, scored.records); });
  if (!a.uncovered.empty()) {
    write_file(a.uncovered, [&](std::ostream& o) {
      o << "pair_id\treason\n";
      for (const auto& u : scored.uncovered) o << u.pair_id << '\t' << u.reason << '\n';
    });
  }
  if (!a.trace.empty()) {
    write_file(a.trace, [&](std::ostream& o) { write_traces(o, scored.traces); });
  }
  const auto fallbacks = std::count_if(scored.traces.begin(), scored.traces.end(),
                                       [](const PairTrace& t) { return t.used_fallback; });
  out << "scored\t" << Coverage{scored.traces.size(), pairs.size()}.str() << "\nfallback\t"
      << fallbacks << '\n';
  for (const auto& u : scored.uncovered) out << "uncovered\t" << u.pair_id << '\t' << u.reason << '\n';
}

// ---------------------------------------------------------------- gen-stimuli

struct GenStimuliArgs {
  fs::path dataset;
  std::string role = "patient";
  std::vector<std::string> constructions{"declarative", "cleft", "wh"};
  std::vector<std::string> variants{"typical", "atypical"};
  fs::path out_dir;
};

void gen_stimuli(const GenStimuliArgs& a, std::ostream& out) {
  const auto pairs = load_dtfit(a.dataset, parse_role(a.role));
  std::vector<Variant> variants;
  for (const auto& v : a.variants) variants.push_back(parse_variant(v));
  std::vector<Construction> constructions;
  for (const auto& c : a.constructions) constructions.push_back(parse_construction(c));
  for (auto c : constructions) {
    auto stimuli = realize_pairs(pairs, c, variants);
    const auto path = a.out_dir / ("stimuli." + std::string(to_string(c)) + ".jsonl");
    write_file(path, [&](std::ostream& o) { write_stimuli(o, stimuli); });
    out << to_string(c) << '\t' << stimuli.size() << '\t' << path.string() << '\n';
  }
}

// ---------------------------------------------------------------- gen-diagnostics

struct AdversarialArgs {
  fs::path graph;
  fs::path dataset;
  std::string role = "patient";
  std::size_t k = 5;
  fs::path out;
  fs::path draft;
};

void gen_adversarial(const AdversarialArgs& a, std::ostream& out) {
  const auto role = parse_role(a.role);
  const auto pairs = load_dtfit(a.dataset, role);
  const auto graph = load_graph(a.graph);
  const auto relations = RoleRelationMap::universal_dependencies();
  std::vector<CandidateRow> rows;
  for (const auto& p : pairs) {
    const auto label = relations.resolve(role, p.base.preposition_for(role)).front().label;
    for (auto& c : adversarial_fillers(graph, p, label, a.k)) {
      rows.push_back({p.pair_id, std::move(c), std::nullopt});
    }
  }
  write_file(a.out, [&](std::ostream& o) { write_candidates(o, rows); });
  out << "candidates\t" << rows.size() << '\n';
  if (!a.draft.empty()) {
    const auto draft = adversarial_dataset(pairs, rows);
    write_file(a.draft, [&](std::ostream& o) { write_dtfit(o, draft); });
    out << "draft_pairs\t" << draft.size() << '\n';
  }
}

struct SynonymArgs {
  fs::path dataset;
  std::string role = "patient";
  fs::path synonyms;
  fs::path frequencies;
  std::uint64_t cap = kSynonymFrequencyCap;
  fs::path out;
  fs::path draft;
};

void gen_synonym(const SynonymArgs& a, std::ostream& out) {
  const auto pairs = load_dtfit(a.dataset, parse_role(a.role));
  const auto synonyms = load_synonyms(a.synonyms);
  const auto freq = load_frequencies(a.frequencies);
  std::vector<CandidateRow> rows;
  std::size_t valid = 0;
  for (const auto& p : pairs) {
    auto it = synonyms.find(p.typical.lemma);
    if (it == synonyms.end()) continue;
    for (auto& c : synonym_candidates(p.typical.lemma, it->second, freq)) {
      auto verdict = validate_synonym_swap(c, freq, a.cap);
      valid += verdict.valid;
      rows.push_back({p.pair_id, std::move(c), std::move(verdict)});
    }
  }
  write_file(a.out, [&](std::ostream& o) { write_candidates(o, rows); });
  out << "candidates\t" << rows.size() << "\nvalid\t" << valid << '\n';
  if (!a.draft.empty()) {
    const auto draft = synonym_dataset(pairs, rows);
    write_file(a.draft, [&](std::ostream& o) { write_dtfit(o, draft); });
    out << "draft_pairs\t" << draft.size() << '\n';
  }
}

struct WangArgs {
  fs::path plausibility;
  std::string role = "patient";
  fs::path out;
};

void gen_wang(const WangArgs& a, std::ostream& out) {
  const auto triples = load_plausibility(a.plausibility);
  std::vector<PlausibilityTriple> plausible, implausible;
  for (const auto& t : triples) {
    (t.label == Plausibility::plausible ? plausible : implausible).push_back(t);
  }
  const auto pairs = mine_minimal_pairs(plausible, implausible, parse_role(a.role));
  write_file(a.out, [&](std::ostream& o) { write_dtfit(o, pairs); });
  out << "pairs\t" << pairs.size() << '\n';
}

struct DeriveRolesArgs {
  fs::path triples;
  fs::path agent_out;
  fs::path patient_out;
  fs::path skipped;
};

void gen_derive_roles(const DeriveRolesArgs& a, std::ostream& out) {
  const auto rows = load_triple_rows(a.triples);
  const auto derived = derive_role_pairs(rows);
  write_file(a.agent_out, [&](std::ostream& o) { write_dtfit(o, derived.agent_pairs); });
  write_file(a.patient_out, [&](std::ostream& o) { write_dtfit(o, derived.patient_pairs); });
  for (const auto& s : derived.skipped) warn("group " + s.group_id + " skipped: " + s.reason);
  if (!a.skipped.empty()) {
    write_file(a.skipped, [&](std::ostream& o) {
      o << "group_id\treason\n";
      for (const auto& s : derived.skipped) o << s.group_id << '\t' << s.reason << '\n';
    });
  }
  out << "agent_pairs\t" << derived.agent_pairs.size() << "\npatient_pairs\t"
      << derived.patient_pairs.size() << "\nskipped\t" << derived.skipped.size() << '\n';
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  fs::path dataset;
  std::string role = "patient";
  std::vector<fs::path> scores;
  std::vector<std::string> scorers;
  std::string reference;
  std::string name;
  std::string construction = "declarative";
  bool log_transform = false;
  bool residuals = false;
  std::string residual_norm = "l1";
  fs::path out;
  fs::path table;
  fs::path plot;
};

void run_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const auto pairs = load_dtfit(a.dataset, parse_role(a.role));
  std::vector<ScoreRecord> records;
  for (const auto& path : a.scores) {
    auto more = load_scores(path);
    records.insert(records.end(), std::make_move_iterator(more.begin()),
                   std::make_move_iterator(more.end()));
  }
  auto scorers = a.scorers;
  if (scorers.empty()) {
    for (const auto& r : records) {
      if (std::find(scorers.begin(), scorers.end(), r.scorer) == scorers.end()) {
        scorers.push_back(r.scorer);
      }
    }
  }
  if (scorers.empty()) throw Error("eval-stats", "no scores to evaluate");
  if (!a.reference.empty() &&
      std::find(scorers.begin(), scorers.end(), a.reference) == scorers.end()) {
    scorers.push_back(a.reference);
  }

  std::vector<EvalReport> reports;
  for (const auto& scorer : scorers) {
    EvalOptions o;
    o.dataset = a.name.empty() ? a.dataset.stem().string() : a.name;
    o.scorer = scorer;
    o.construction = a.construction;
    if (!a.reference.empty() && scorer != a.reference) o.compare_scorer = a.reference;
    o.coverage_scorers = scorers;
    o.log_transform = a.log_transform;
    o.residuals = a.residuals;
    o.residual_norm = a.residual_norm == "l2" ? ResidualNorm::l2 : ResidualNorm::l1;
    reports.push_back(evaluate(pairs, records, o));
  }
  write_file(a.out, [&](std::ostream& o) { write_report_tsv(o, reports); });
  if (a.table.empty()) {
    write_report_table(out, reports);
  } else {
    write_file(a.table, [&](std::ostream& o) { write_report_table(o, reports); });
  }
  if (!a.plot.empty()) {
    for (const auto& scorer : scorers) {
      fs::path path = a.plot;
      path += "." + scorer + ".tsv";
      write_file(path, [&](std::ostream& o) { write_plot_tsv(o, pairs, records, scorer); });
    }
  }
}

// ---------------------------------------------------------------- report

struct ReportArgs {
  std::vector<fs::path> reports;
  std::string metric = "spearman";
  std::string pivot = "scorer";
  bool table = false;
  fs::path out;
};

void run_report(const ReportArgs& a, std::ostream& out) {
  std::vector<EvalReport> reports;
  for (const auto& path : a.reports) {
    std::ifstream in(path);
    if (!in) throw Error("eval-stats", "cannot open " + path.string());
    auto more = read_report_tsv(in, path.string());
    reports.insert(reports.end(), more.begin(), more.end());
  }
  auto emit = [&](std::ostream& o) {
    if (a.table) {
      write_report_table(o, reports);
      return;
    }
    write_matrix(o, reports, a.metric == "accuracy" ? Metric::accuracy : Metric::spearman,
                 a.pivot == "construction" ? PivotColumn::construction : PivotColumn::scorer);
  };
  if (a.out.empty()) emit(out);
  else write_file(a.out, emit);
}

// ---------------------------------------------------------------- gen-fixture

struct FixtureArgs {
  fs::path out_dir;
  std::size_t sentences = 500;
  std::uint64_t seed = 42;
};

void gen_fixture(const FixtureArgs& a, std::ostream& out) {
  write_file(a.out_dir / "corpus.conllu",
             [&](std::ostream& o) { write_fixture_corpus(o, a.sentences, a.seed); });
  const auto vectors = fixture_vectors(a.seed);
  write_file(a.out_dir / "vectors.txt", [&](std::ostream& o) { write_vectors(o, vectors); });
  for (auto role : {Role::agent, Role::patient}) {
    const auto pairs = fixture_pairs(role);
    write_file(a.out_dir / ("dtfit_" + std::string(to_string(role)) + ".tsv"),
               [&](std::ostream& o) { write_dtfit(o, pairs); });
  }
  out << "fixture\t" << a.out_dir.string() << '\n';
}

void report_error(const Error& e, std::ostream& err) {
  err << "gek: error [" << e.module() << "]: " << e.what() << '\n';
  if (const auto* d = dynamic_cast<const DatasetError*>(&e); d && d->problems().size() > 1) {
    for (const auto& p : d->problems()) err << "  " << p << '\n';
  }
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized event knowledge toolkit: event graphs, SDM scoring, stimuli, evaluation",
               "gek"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  config::Schema schema;
  Section root(&app, {}, schema);

  app.set_config("--config", "", "JSON config file with one section per subcommand");
  app.config_formatter(std::make_shared<JsonConfig>(schema));
  bool show_version = false, show_schema = false;
  app.add_flag("--version", show_version, "Print version information as JSON");
  app.add_flag("--config-schema", show_schema, "Print the config file JSON schema");
  unsigned threads = 0;
  root.option("threads", threads, "Worker threads (0: all hardware threads)", 0);

  BuildGraphArgs bg;
  auto s_bg = root.sub("build-graph", "Count a CoNLL-U corpus into a pruned event graph");
  s_bg.input("corpus", bg.corpus, "CoNLL-U files, one shard each (gzip allowed)")->required();
  s_bg.option("out", bg.out, "Graph file to write")->required();
  s_bg.option("min-node-freq", bg.min_node_freq, "Minimum lemma frequency", 1);
  s_bg.option("min-event-freq", bg.min_event_freq, "Minimum joint event frequency", 1);
  s_bg.option("max-arity", bg.max_arity, "Dependents kept per joint event", 1);
  s_bg.option("relations", bg.relations, "Dependency labels to harvest");
  s_bg.option("plain-obl", bg.plain_obl, "Do not subtype obl edges by their case marker");
  s_bg.option("tsv", bg.tsv, "Also export <prefix>.nodes/.edges/.events.tsv");
  s_bg.option("frequencies", bg.frequencies, "Also write the unpruned lemma frequency table");

  ScoreSdmArgs sd;
  auto s_sd = root.sub("score-sdm", "Score a DTFit dataset with the structured distributional model");
  s_sd.input("graph", sd.graph, "Event graph file")->required();
  s_sd.input("vectors", sd.vectors, "word2vec text vectors (gzip allowed)")->required();
  s_sd.input("dataset", sd.dataset, "DTFit TSV")->required();
  s_sd.choice("role", sd.role, kRoleNames, "Target role of the dataset");
  s_sd.option("k", sd.k, "Associates retrieved per context cue", 1);
  s_sd.option("normalize-role-vectors", sd.normalize_role_vectors,
              "Unit-normalize each cue's role vector before averaging");
  s_sd.choice("precision", sd.precision, {"double", "float"}, "Vector arithmetic precision");
  s_sd.option("relation", sd.relation,
              "Role relation override role=label ({prep} expands, ^label reads the edge backwards)");
  s_sd.option("out", sd.out, "Score JSONL to write")->required();
  s_sd.option("uncovered", sd.uncovered, "TSV of pairs left unscored");
  s_sd.option("trace", sd.trace, "TSV of the associates each cue contributed");

  GenStimuliArgs gs;
  auto s_gs = root.sub("gen-stimuli", "Realize dataset pairs as sentences with a marked filler slot");
  s_gs.input("dataset", gs.dataset, "DTFit TSV")->required();
  s_gs.choice("role", gs.role, kRoleNames, "Target role of the dataset");
  s_gs.option("constructions", gs.constructions, "declarative, cleft and/or wh")
      ->check(CLI::IsMember({"declarative", "cleft", "wh"}));
  s_gs.option("variants", gs.variants, "typical and/or atypical")
      ->check(CLI::IsMember({"typical", "atypical"}));
  s_gs.option("out-dir", gs.out_dir, "Directory for stimuli.<construction>.jsonl")->required();

  auto s_gd = root.sub("gen-diagnostics", "Candidate tables for the diagnostic datasets");
  s_gd.app()->require_subcommand(1);

  AdversarialArgs ad;
  auto s_ad = s_gd.sub("adversarial", "High-LMI replacements for the atypical filler");
  s_ad.input("graph", ad.graph, "Event graph file")->required();
  s_ad.input("dataset", ad.dataset, "DTFit TSV")->required();
  s_ad.choice("role", ad.role, kRoleNames, "Target role of the dataset");
  s_ad.option("k", ad.k, "Candidates per pair", 0);
  s_ad.option("out", ad.out, "Candidate TSV to write")->required();
  s_ad.option("draft", ad.draft, "Draft DTFit TSV using each pair's top candidate");

  SynonymArgs sy;
  auto s_sy = s_gd.sub("synonym", "Low-frequency synonym replacements for the typical filler");
  s_sy.input("dataset", sy.dataset, "DTFit TSV")->required();
  s_sy.choice("role", sy.role, kRoleNames, "Target role of the dataset");
  s_sy.input("synonyms", sy.synonyms, "TSV: lemma <TAB> comma-separated synonyms")->required();
  s_sy.input("frequencies", sy.frequencies, "Lemma frequency table from build-graph")->required();
  s_sy.option("cap", sy.cap, "Replacement frequency must stay below this", 1);
  s_sy.option("out", sy.out, "Candidate TSV to write")->required();
  s_sy.option("draft", sy.draft, "Draft DTFit TSV using each pair's first valid synonym");

  WangArgs wg;
  auto s_wg = s_gd.sub("wang", "Minimal pairs from plausible/implausible SVO triples");
  s_wg.input("plausibility", wg.plausibility, "TSV: agent, verb, patient, label")->required();
  s_wg.choice("role", wg.role, {"agent", "patient"}, "Role the pair members differ in");
  s_wg.option("out", wg.out, "DTFit TSV to write")->required();

  DeriveRolesArgs dr;
  auto s_dr = s_gd.sub("derive-roles", "Agent and patient splits from grouped typicality triples");
  s_dr.input("triples", dr.triples, "TSV: group_id, agent, verb, patient, T/A, rating")->required();
  s_dr.option("agent-out", dr.agent_out, "Agent DTFit TSV to write")->required();
  s_dr.option("patient-out", dr.patient_out, "Patient DTFit TSV to write")->required();
  s_dr.option("skipped", dr.skipped, "TSV of skipped groups");

  EvaluateArgs ev;
  auto s_ev = root.sub("evaluate", "Spearman, accuracy, residuals and significance per scorer");
  s_ev.input("dataset", ev.dataset, "DTFit TSV")->required();
  s_ev.choice("role", ev.role, kRoleNames, "Target role of the dataset");
  s_ev.input("scores", ev.scores, "Score JSONL files")->required();
  s_ev.option("scorers", ev.scorers, "Scorers to evaluate (default: all in the score files)");
  s_ev.option("reference", ev.reference, "Scorer the others are tested against");
  s_ev.option("name", ev.name, "Dataset name in the report (default: file stem)");
  s_ev.option("construction", ev.construction, "Construction label in the report");
  s_ev.option("log-transform", ev.log_transform, "Take the natural log of positive scores first");
  s_ev.option("residuals", ev.residuals, "Report the regression residual sum");
  s_ev.choice("residual-norm", ev.residual_norm, {"l1", "l2"}, "Residual magnitude");
  s_ev.option("out", ev.out, "Report TSV to write")->required();
  s_ev.option("table", ev.table, "Write the readable table here instead of stdout");
  s_ev.option("plot", ev.plot, "Write <prefix>.<scorer>.tsv scatter data");

  ReportArgs rp;
  auto s_rp = root.sub("report", "Merge report TSVs into a dataset by scorer matrix");
  s_rp.input("reports", rp.reports, "Report TSVs from evaluate")->required();
  s_rp.choice("metric", rp.metric, {"spearman", "accuracy"}, "Matrix cell value");
  s_rp.choice("pivot", rp.pivot, {"scorer", "construction"}, "Matrix columns");
  s_rp.option("table", rp.table, "Print all rows as a readable table instead of a matrix");
  s_rp.option("out", rp.out, "Write here instead of stdout");

  FixtureArgs fx;
  auto s_fx = root.sub("gen-fixture", "Write the synthetic corpus, vectors and datasets");
  s_fx.option("out-dir", fx.out_dir, "Directory to write into")->required();
  s_fx.option("sentences", fx.sentences, "Corpus size", 1);
  s_fx.option("seed", fx.seed, "Random seed");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends exit 0; every other parse failure is a usage error.
    return app.exit(e, out, err) == 0 ? 0 : 2;
  } catch (const Error& e) {
    report_error(e, err);
    return 2;
  }

  if (show_version) {
    nlohmann::ordered_json v{{"name", "gek"},
                             {"version", kVersion},
                             {"graph_format", kGraphFormatVersion}};
    out << v.dump() << '\n';
    return 0;
  }
  if (show_schema) {
    out << schema.json_schema().dump(2) << '\n';
    return 0;
  }

  const auto workers = resolve_threads(threads);
  try {
    if (s_bg.app()->parsed()) build_graph(bg, workers, out);
    else if (s_sd.app()->parsed()) {
      if (sd.precision == "float") score_sdm<float>(sd, workers, out);
      else score_sdm<double>(sd, workers, out);
    } else if (s_gs.app()->parsed()) gen_stimuli(gs, out);
    else if (s_ad.app()->parsed()) gen_adversarial(ad, out);
    else if (s_sy.app()->parsed()) gen_synonym(sy, out);
    else if (s_wg.app()->parsed()) gen_wang(wg, out);
    else if (s_dr.app()->parsed()) gen_derive_roles(dr, out);
    else if (s_ev.app()->parsed()) run_evaluate(ev, out);
    else if (s_rp.app()->parsed()) run_report(rp, out);
    else if (s_fx.app()->parsed()) gen_fixture(fx, out);
    else {
      err << app.help();
      return 2;
    }
  } catch (const Error& e) {
    report_error(e, err);
    return 1;
  } catch (const std::exception& e) {
    err << "gek: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace gek
