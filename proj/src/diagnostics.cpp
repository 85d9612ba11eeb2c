#include "gek/diagnostics.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>

#include "json.hpp"

#include "gek/io.hpp"
#include "gek/log.hpp"

namespace gek {
namespace {

// Placeholder word marking the filler position while a sentence is assembled.
const std::string kSentinel = "\x01";

std::string surface(std::string_view lemma) {
  std::string s(lemma);
  std::replace(s.begin(), s.end(), '_', ' ');
  return s;
}

class SentenceBuilder {
 public:
  SentenceBuilder(const EventTuple& tuple) : tuple_(tuple) {
    tuple_.validate();
  }

  void word(std::string w) { words_.push_back(std::move(w)); }
  void slot() { words_.push_back(kSentinel); }

  std::string lemma_of(Role role) const {
    const auto* l = tuple_.lemma(role);
    return l ? surface(*l) : std::string();
  }

  std::string verb_past() const {
    return tuple_.verb_past ? *tuple_.verb_past : surface(past_tense(tuple_.verb()));
  }
  std::string verb_base() const { return surface(tuple_.verb()); }

  void subject() {
    const auto* agent = tuple_.lemma(Role::agent);
    if (!agent) {
      throw RealizationError("item " + tuple_.item_id + ": sentence templates need an agent");
    }
    word("the");
    word(surface(*agent));
  }

  void object() {
    if (tuple_.target_role == Role::patient || !tuple_.lemma(Role::patient)) return;
    word("the");
    word(lemma_of(Role::patient));
  }

  // Realized obliques other than the target, in canonical order.
  void obliques() {
    for (auto role : {Role::instrument, Role::time, Role::location}) {
      if (role == tuple_.target_role || !tuple_.lemma(role)) continue;
      word(tuple_.preposition_for(role));
      word("the");
      word(lemma_of(role));
    }
  }

  RealizedStimulus finish(std::string_view filler, Variant variant, Construction construction,
                          char punctuation) const {
    std::string text;
    for (const auto& w : words_) {
      if (!text.empty()) text += ' ';
      text += w;
    }
    text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
    auto at = text.find(kSentinel);
    RealizedStimulus s;
    s.item_id = tuple_.item_id;
    s.variant = variant;
    s.construction = construction;
    s.prefix = text.substr(0, at);
    s.filler = std::string(filler);
    s.suffix = text.substr(at + kSentinel.size()) + punctuation;
    return s;
  }

  const EventTuple& tuple() const { return tuple_; }

 private:
  const EventTuple& tuple_;
  std::vector<std::string> words_;
};

void check_filler(std::string_view filler) {
  if (filler.empty() || filler.find_first_of(" \t\n") != std::string_view::npos) {
    throw RealizationError("filler '" + std::string(filler) + "' must be a single nonempty token");
  }
}

}  // namespace

std::string_view to_string(Construction c) {
  switch (c) {
    case Construction::declarative: return "declarative";
    case Construction::cleft: return "cleft";
    case Construction::wh: return "wh";
  }
  return "?";
}

Construction parse_construction(std::string_view name) {
  for (auto c : kAllConstructions) {
    if (to_string(c) == name) return c;
  }
  throw RealizationError("unknown construction '" + std::string(name) + "'");
}

RealizedStimulus realize_declarative(const EventTuple& tuple, std::string_view filler,
                                     Variant variant) {
  check_filler(filler);
  SentenceBuilder b(tuple);
  const auto target = tuple.target_role;
  if (target == Role::agent) {
    b.word("the");
    b.slot();
  } else {
    b.subject();
  }
  b.word(b.verb_past());
  if (target == Role::patient) {
    b.word("the");
    b.slot();
  } else {
    b.object();
  }
  b.obliques();
  if (is_oblique(target)) {
    b.word(tuple.preposition_for(target));
    b.word("the");
    b.slot();
  }
  return b.finish(filler, variant, Construction::declarative, '.');
}

RealizedStimulus realize_cleft(const EventTuple& tuple, std::string_view filler, Variant variant) {
  check_filler(filler);
  SentenceBuilder b(tuple);
  const auto target = tuple.target_role;
  b.word("it");
  b.word("was");
  if (is_oblique(target)) b.word(tuple.preposition_for(target));
  b.word("the");
  b.slot();
  b.word("that");
  if (target != Role::agent) b.subject();
  b.word(b.verb_past());
  b.object();
  b.obliques();
  return b.finish(filler, variant, Construction::cleft, '.');
}

RealizedStimulus realize_wh(const EventTuple& tuple, std::string_view filler, Variant variant) {
  check_filler(filler);
  SentenceBuilder b(tuple);
  const auto target = tuple.target_role;
  if (target == Role::agent) {
    b.word("which");
    b.slot();
    b.word(b.verb_past());
  } else {
    if (is_oblique(target)) b.word(tuple.preposition_for(target));
    b.word("which");
    b.slot();
    b.word("did");
    b.subject();
    b.word(b.verb_base());
  }
  b.object();
  b.obliques();
  return b.finish(filler, variant, Construction::wh, '?');
}

RealizedStimulus realize(const EventTuple& tuple, std::string_view filler, Variant variant,
                         Construction construction) {
  switch (construction) {
    case Construction::declarative: return realize_declarative(tuple, filler, variant);
    case Construction::cleft: return realize_cleft(tuple, filler, variant);
    case Construction::wh: return realize_wh(tuple, filler, variant);
  }
  throw RealizationError("unknown construction");
}

std::vector<RealizedStimulus> realize_pairs(std::span<const ItemPair> pairs,
                                            Construction construction,
                                            std::span<const Variant> variants) {
  std::vector<RealizedStimulus> out;
  for (const auto& pair : pairs) {
    for (auto v : variants) {
      try {
        out.push_back(realize(pair.base, pair.filler(v).lemma, v, construction));
      } catch (const DatasetError& e) {
        throw RealizationError("item " + pair.pair_id + ": " + e.what());
      }
    }
  }
  return out;
}

void write_stimuli(std::ostream& out, std::span<const RealizedStimulus> stimuli) {
  for (const auto& s : stimuli) {
    nlohmann::ordered_json j;
    j["item_id"] = s.item_id;
    j["variant"] = to_string(s.variant);
    j["construction"] = to_string(s.construction);
    j["prefix"] = s.prefix;
    j["filler"] = s.filler;
    j["suffix"] = s.suffix;
    out << j.dump() << '\n';
  }
}

std::vector<RealizedStimulus> read_stimuli(std::istream& in) {
  std::vector<RealizedStimulus> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      RealizedStimulus s;
      s.item_id = j.at("item_id").get<std::string>();
      s.variant = parse_variant(j.at("variant").get<std::string>());
      s.construction = parse_construction(j.at("construction").get<std::string>());
      s.prefix = j.at("prefix").get<std::string>();
      s.filler = j.at("filler").get<std::string>();
      s.suffix = j.at("suffix").get<std::string>();
      out.push_back(std::move(s));
    } catch (const std::exception& e) {
      throw RealizationError("stimulus line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<SwapCandidate> adversarial_fillers(const EventGraph& graph, const ItemPair& pair,
                                               std::string_view target_relation, std::size_t k) {
  if (k == 0) return {};
  const auto& verb = pair.base.verb();
  if (!graph.node_freq(verb)) {
    warn("adversarial fillers: verb '" + verb + "' is not in the graph");
    return {};
  }
  auto associates = top_associates(graph, verb, target_relation, Direction::as_head,
                                   std::numeric_limits<std::size_t>::max());
  std::vector<SwapCandidate> out;
  for (const auto& a : associates) {
    if (a.lemma == pair.typical.lemma || a.lemma == pair.atypical.lemma) continue;
    out.push_back({pair.atypical.lemma, a.lemma, graph.node_freq(pair.atypical.lemma).value_or(0),
                   graph.node_freq(a.lemma).value_or(0), SwapSource::lmi_adversarial, a.weight});
    if (out.size() == k) break;
  }
  return out;
}

SwapVerdict validate_synonym_swap(const SwapCandidate& candidate, const FrequencyTable& freq,
                                  std::uint64_t cap) {
  auto lookup = [&](const std::string& w) {
    auto it = freq.find(w);
    return it == freq.end() ? std::uint64_t{0} : it->second;
  };
  const auto original = lookup(candidate.original);
  const auto replacement = lookup(candidate.replacement);
  if (candidate.replacement == candidate.original) return {false, "replacement equals original"};
  if (!(replacement < original)) {
    return {false, "rule 1: replacement frequency " + std::to_string(replacement) +
                       " is not lower than original frequency " + std::to_string(original)};
  }
  if (!(replacement < cap)) {
    return {false, "rule 2: replacement frequency " + std::to_string(replacement) +
                       " is not below the cap " + std::to_string(cap)};
  }
  return {true, "ok"};
}

std::vector<SwapCandidate> synonym_candidates(std::string_view original,
                                              std::span<const std::string> synonyms,
                                              const FrequencyTable& freq) {
  auto lookup = [&](const std::string& w) {
    auto it = freq.find(w);
    return it == freq.end() ? std::uint64_t{0} : it->second;
  };
  std::vector<SwapCandidate> out;
  std::string orig(original);
  for (const auto& s : synonyms) {
    if (s == orig) continue;
    out.push_back({orig, s, lookup(orig), lookup(s), SwapSource::synonym, 0.0});
  }
  return out;
}

std::unordered_map<std::string, std::vector<std::string>> load_synonyms(
    const std::filesystem::path& path) {
  LineReader reader(path);
  std::unordered_map<std::string, std::vector<std::string>> out;
  std::string line;
  while (reader.getline(line)) {
    if (trim(line).empty() || line.front() == '#') continue;
    auto cells = split(line, '\t');
    if (cells.size() != 2) {
      throw Error("diagnostics", path.string() + " line " + std::to_string(reader.line_number()) +
                                     ": expected 'original<TAB>syn1,syn2,...'");
    }
    auto& list = out[to_lower(trim(cells[0]))];
    for (auto s : split(cells[1], ',')) {
      s = trim(s);
      if (!s.empty()) list.push_back(to_lower(s));
    }
  }
  return out;
}

void write_candidates(std::ostream& out, std::span<const CandidateRow> rows) {
  out << "pair_id\toriginal\treplacement\tfreq_original\tfreq_replacement\tsource\tlmi\tvalid\treason\n";
  for (const auto& r : rows) {
    const auto& c = r.candidate;
    out << r.pair_id << '\t' << c.original << '\t' << c.replacement << '\t' << c.freq_original
        << '\t' << c.freq_replacement << '\t'
        << (c.source == SwapSource::lmi_adversarial ? "lmi_adversarial" : "synonym") << '\t'
        << (c.source == SwapSource::lmi_adversarial ? format_double(c.lmi) : std::string()) << '\t'
        << (r.verdict ? (r.verdict->valid ? "yes" : "no") : "") << '\t'
        << (r.verdict ? r.verdict->reason : "") << '\n';
  }
}

namespace {

std::map<std::string, const CandidateRow*> first_usable(std::span<const CandidateRow> rows) {
  std::map<std::string, const CandidateRow*> first;
  for (const auto& r : rows) {
    if (r.verdict && !r.verdict->valid) continue;
    first.try_emplace(r.pair_id, &r);
  }
  return first;
}

}  // namespace

std::vector<ItemPair> adversarial_dataset(std::span<const ItemPair> pairs,
                                          std::span<const CandidateRow> rows) {
  auto first = first_usable(rows);
  std::vector<ItemPair> out;
  for (const auto& p : pairs) {
    auto it = first.find(p.pair_id);
    if (it == first.end()) continue;
    ItemPair q = p;
    q.atypical = {it->second->candidate.replacement, std::nullopt};
    q.typical.rating.reset();
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<ItemPair> synonym_dataset(std::span<const ItemPair> pairs,
                                      std::span<const CandidateRow> rows) {
  auto first = first_usable(rows);
  std::vector<ItemPair> out;
  for (const auto& p : pairs) {
    auto it = first.find(p.pair_id);
    if (it == first.end() || it->second->candidate.replacement == p.atypical.lemma) continue;
    ItemPair q = p;
    q.typical = {it->second->candidate.replacement, std::nullopt};
    q.atypical.rating.reset();
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace gek
