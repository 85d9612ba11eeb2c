#include "gek/datasets.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "gek/io.hpp"

namespace gek {
namespace {

constexpr std::array kDtfitHeader{
    "item_id",         "role",          "agent",          "verb",
    "patient",         "instrument",    "time",           "location",
    "typical_filler",  "typical_rating", "atypical_filler", "atypical_rating",
    "preposition",     "verb_past"};

// Slot columns 2..7 follow the Role enumerator order.
constexpr std::size_t kFirstSlotColumn = 2;

bool valid_lemma(std::string_view lemma) {
  return !lemma.empty() &&
         std::none_of(lemma.begin(), lemma.end(),
                      [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string summarize(const std::vector<std::string>& problems) {
  constexpr std::size_t kShown = 5;
  std::vector<std::string> shown(problems.begin(),
                                 problems.begin() + std::min(problems.size(), kShown));
  auto text = join(shown, "; ");
  if (problems.size() > kShown) {
    text += "; ... (" + std::to_string(problems.size() - kShown) + " more)";
  }
  return text;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError({"cannot open '" + path.string() + "'"});
  return in;
}

bool skippable(std::string_view line) {
  auto t = trim(line);
  return t.empty() || t.front() == '#';
}

std::optional<double> parse_rating(std::string_view cell, std::string& problem) {
  cell = trim(cell);
  if (cell.empty()) return std::nullopt;
  auto value = parse_double(cell);
  if (!value) {
    problem = "rating '" + std::string(cell) + "' is not a number";
    return std::nullopt;
  }
  if (*value < 1.0 || *value > 7.0) {
    problem = "rating " + std::string(cell) + " outside [1,7]";
    return std::nullopt;
  }
  return value;
}

std::string rating_text(const std::optional<double>& rating) {
  return rating ? format_double(*rating) : std::string();
}

}  // namespace

DatasetError::DatasetError(std::vector<std::string> problems)
    : Error("datasets", summarize(problems)), problems_(std::move(problems)) {}

const std::string* EventTuple::lemma(Role role) const {
  for (const auto& slot : slots) {
    if (slot.role == role) return &slot.lemma;
  }
  return nullptr;
}

const std::string& EventTuple::verb() const {
  if (const auto* v = lemma(Role::verb)) return *v;
  throw DatasetError({"item " + item_id + ": tuple has no verb"});
}

std::string EventTuple::preposition_for(Role role) const {
  // The single override column belongs to the target when it is oblique,
  // otherwise to the context obliques.
  if (preposition && (role == target_role || !is_oblique(target_role))) return *preposition;
  return std::string(default_preposition(role));
}

std::vector<Slot> EventTuple::context() const {
  std::vector<Slot> out;
  for (const auto& slot : slots) {
    if (slot.role != target_role) out.push_back(slot);
  }
  std::sort(out.begin(), out.end(),
            [](const Slot& a, const Slot& b) { return a.role < b.role; });
  return out;
}

void EventTuple::validate() const {
  std::vector<std::string> problems;
  auto fail = [&](const std::string& what) { problems.push_back("item " + item_id + ": " + what); };
  std::array<int, kAllRoles.size()> seen{};
  int targets = 0;
  for (const auto& slot : slots) {
    if (++seen[static_cast<std::size_t>(slot.role)] > 1) {
      fail("role " + std::string(to_string(slot.role)) + " appears twice");
    }
    if (!valid_lemma(slot.lemma)) {
      fail("lemma '" + slot.lemma + "' is empty or contains whitespace");
    }
    const bool marked = slot.lemma == kTargetMarker;
    if (slot.role == target_role) {
      ++targets;
      if (!marked) fail("target slot must hold the target marker");
    } else if (marked) {
      fail("non-target slot " + std::string(to_string(slot.role)) + " holds the target marker");
    }
  }
  if (target_role == Role::verb) fail("the verb cannot be the target");
  if (targets != 1) fail("missing target slot " + std::string(to_string(target_role)));
  if (seen[static_cast<std::size_t>(Role::verb)] == 0) fail("verb slot missing");
  if (!problems.empty()) throw DatasetError(std::move(problems));
}

std::vector<ItemPair> parse_dtfit(std::istream& in, Role role, std::string_view source) {
  std::vector<ItemPair> pairs;
  std::vector<std::string> problems;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (skippable(line)) continue;
    auto cells = split(line, '\t');
    if (cells[0] == kDtfitHeader[0]) continue;
    auto where = std::string(source) + " line " + std::to_string(line_no) + ": ";
    if (cells.size() < 12 || cells.size() > 14) {
      problems.push_back(where + "expected 12-14 tab-separated columns, found " +
                         std::to_string(cells.size()));
      continue;
    }
    for (auto& c : cells) c = trim(c);

    ItemPair pair;
    pair.pair_id = std::string(cells[0]);
    pair.base.item_id = pair.pair_id;
    pair.base.target_role = role;
    std::vector<std::string> row_problems;
    if (pair.pair_id.empty()) row_problems.push_back("empty item_id");
    if (cells[1] != to_string(role)) {
      row_problems.push_back("role '" + std::string(cells[1]) + "' does not match requested role " +
                             std::string(to_string(role)));
    }
    for (std::size_t i = 0; i < kAllRoles.size(); ++i) {
      auto cell = cells[kFirstSlotColumn + i];
      if (!cell.empty()) pair.base.slots.push_back({kAllRoles[i], to_lower(cell)});
    }
    if (cells.size() > 12 && !cells[12].empty()) pair.base.preposition = to_lower(cells[12]);
    if (cells.size() > 13 && !cells[13].empty()) pair.base.verb_past = std::string(cells[13]);

    pair.typical.lemma = to_lower(cells[8]);
    pair.atypical.lemma = to_lower(cells[10]);
    std::string problem;
    pair.typical.rating = parse_rating(cells[9], problem);
    if (!problem.empty()) row_problems.push_back(problem);
    problem.clear();
    pair.atypical.rating = parse_rating(cells[11], problem);
    if (!problem.empty()) row_problems.push_back(problem);
    if (!valid_lemma(pair.typical.lemma) || !valid_lemma(pair.atypical.lemma)) {
      row_problems.push_back("fillers must be nonempty single tokens");
    } else if (pair.typical.lemma == pair.atypical.lemma) {
      row_problems.push_back("typical and atypical filler are identical");
    }
    try {
      pair.base.validate();
    } catch (const DatasetError& e) {
      for (const auto& p : e.problems()) row_problems.push_back(p);
    }
    if (!pair.pair_id.empty() && !ids.insert(pair.pair_id).second) {
      row_problems.push_back("duplicate item_id " + pair.pair_id);
    }
    if (row_problems.empty()) {
      pairs.push_back(std::move(pair));
    } else {
      for (const auto& p : row_problems) problems.push_back(where + p);
    }
  }
  if (!problems.empty()) throw DatasetError(std::move(problems));
  return pairs;
}

std::vector<ItemPair> load_dtfit(const std::filesystem::path& path, Role role) {
  auto in = open_input(path);
  return parse_dtfit(in, role, path.string());
}

void write_dtfit(std::ostream& out, std::span<const ItemPair> pairs) {
  for (std::size_t i = 0; i < kDtfitHeader.size(); ++i) {
    out << (i ? "\t" : "") << kDtfitHeader[i];
  }
  out << '\n';
  for (const auto& pair : pairs) {
    out << pair.pair_id << '\t' << to_string(pair.base.target_role);
    for (auto role : kAllRoles) {
      const auto* lemma = pair.base.lemma(role);
      out << '\t' << (lemma ? *lemma : std::string());
    }
    out << '\t' << pair.typical.lemma << '\t' << rating_text(pair.typical.rating) << '\t'
        << pair.atypical.lemma << '\t' << rating_text(pair.atypical.rating) << '\t'
        << pair.base.preposition.value_or("") << '\t' << pair.base.verb_past.value_or("")
        << '\n';
  }
}

std::vector<TripleRow> load_triple_rows(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<TripleRow> rows;
  std::vector<std::string> problems;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (skippable(line)) continue;
    auto cells = split(line, '\t');
    if (cells[0] == "group_id") continue;
    auto where = path.string() + " line " + std::to_string(line_no) + ": ";
    if (cells.size() != 6) {
      problems.push_back(where + "expected 6 columns");
      continue;
    }
    for (auto& c : cells) c = trim(c);
    TripleRow row{std::string(cells[0]), to_lower(cells[1]), to_lower(cells[2]),
                  to_lower(cells[3]), Variant::typical, std::nullopt};
    if (cells[4] == "T" || cells[4] == "typical") {
      row.condition = Variant::typical;
    } else if (cells[4] == "A" || cells[4] == "atypical") {
      row.condition = Variant::atypical;
    } else {
      problems.push_back(where + "condition must be T or A");
      continue;
    }
    std::string problem;
    row.rating = parse_rating(cells[5], problem);
    if (!problem.empty()) {
      problems.push_back(where + problem);
      continue;
    }
    if (!valid_lemma(row.agent) || !valid_lemma(row.verb) || !valid_lemma(row.patient)) {
      problems.push_back(where + "lemmas must be nonempty single tokens");
      continue;
    }
    rows.push_back(std::move(row));
  }
  if (!problems.empty()) throw DatasetError(std::move(problems));
  return rows;
}

DerivedPairs derive_role_pairs(std::span<const TripleRow> rows) {
  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<const TripleRow*>> groups;
  for (const auto& row : rows) {
    auto [it, inserted] = groups.try_emplace(row.group_id);
    if (inserted) order.push_back(row.group_id);
    it->second.push_back(&row);
  }

  DerivedPairs out;
  std::vector<std::string> problems;
  for (const auto& id : order) {
    const auto& members = groups[id];
    if (members.size() != 2) {
      problems.push_back("group " + id + " has " + std::to_string(members.size()) +
                         " rows, expected 2");
      continue;
    }
    const TripleRow* typical = members[0];
    const TripleRow* atypical = members[1];
    if (typical->condition == atypical->condition) {
      problems.push_back("group " + id + " needs one typical and one atypical row");
      continue;
    }
    if (typical->condition != Variant::typical) std::swap(typical, atypical);

    const bool agent_differs = typical->agent != atypical->agent;
    const bool verb_differs = typical->verb != atypical->verb;
    const bool patient_differs = typical->patient != atypical->patient;
    const int differing = agent_differs + verb_differs + patient_differs;
    if (differing == 0) {
      problems.push_back("group " + id + " rows are identical");
      continue;
    }
    if (differing > 1) {
      out.skipped.push_back({id, std::to_string(differing) + " slots differ"});
      continue;
    }
    if (verb_differs) {
      out.skipped.push_back({id, "only the verb differs"});
      continue;
    }

    ItemPair pair;
    pair.pair_id = id;
    pair.base.item_id = id;
    pair.base.target_role = agent_differs ? Role::agent : Role::patient;
    pair.base.slots = {
        {Role::agent, agent_differs ? std::string(kTargetMarker) : typical->agent},
        {Role::verb, typical->verb},
        {Role::patient, patient_differs ? std::string(kTargetMarker) : typical->patient}};
    pair.typical = {agent_differs ? typical->agent : typical->patient, typical->rating};
    pair.atypical = {agent_differs ? atypical->agent : atypical->patient, atypical->rating};
    (agent_differs ? out.agent_pairs : out.patient_pairs).push_back(std::move(pair));
  }
  if (!problems.empty()) throw DatasetError(std::move(problems));
  return out;
}

std::vector<PlausibilityTriple> load_plausibility(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<PlausibilityTriple> triples;
  std::vector<std::string> problems;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (skippable(line)) continue;
    auto cells = split(line, '\t');
    if (cells[0] == "agent") continue;
    auto where = path.string() + " line " + std::to_string(line_no) + ": ";
    if (cells.size() != 4) {
      problems.push_back(where + "expected 4 columns");
      continue;
    }
    for (auto& c : cells) c = trim(c);
    PlausibilityTriple t{to_lower(cells[0]), to_lower(cells[1]), to_lower(cells[2]),
                         Plausibility::plausible};
    if (cells[3] == "implausible") {
      t.label = Plausibility::implausible;
    } else if (cells[3] != "plausible") {
      problems.push_back(where + "label must be plausible or implausible");
      continue;
    }
    if (!valid_lemma(t.agent) || !valid_lemma(t.verb) || !valid_lemma(t.patient)) {
      problems.push_back(where + "lemmas must be nonempty single tokens");
      continue;
    }
    triples.push_back(std::move(t));
  }
  if (!problems.empty()) throw DatasetError(std::move(problems));
  return triples;
}

std::vector<ItemPair> mine_minimal_pairs(std::span<const PlausibilityTriple> plausible,
                                         std::span<const PlausibilityTriple> implausible,
                                         Role role) {
  if (role != Role::agent && role != Role::patient) {
    throw DatasetError({"minimal pairs are mined for agent or patient only"});
  }
  if (plausible.empty() || implausible.empty()) {
    throw DatasetError({"both plausible and implausible triples are required"});
  }
  for (const auto* list : {&plausible, &implausible}) {
    for (const auto& t : *list) {
      if (!valid_lemma(t.agent) || !valid_lemma(t.verb) || !valid_lemma(t.patient)) {
        throw DatasetError({"triple with an empty or multi-token lemma"});
      }
    }
  }

  const bool agent_target = role == Role::agent;
  auto key = [&](const PlausibilityTriple& t) {
    return t.verb + '\t' + (agent_target ? t.patient : t.agent);
  };
  std::multimap<std::string, std::size_t> implausible_by_key;
  for (std::size_t j = 0; j < implausible.size(); ++j) {
    implausible_by_key.emplace(key(implausible[j]), j);
  }

  std::vector<ItemPair> pairs;
  for (std::size_t i = 0; i < plausible.size(); ++i) {
    const auto& p = plausible[i];
    auto [lo, hi] = implausible_by_key.equal_range(key(p));
    for (auto it = lo; it != hi; ++it) {
      const auto& q = implausible[it->second];
      const auto& good = agent_target ? p.agent : p.patient;
      const auto& bad = agent_target ? q.agent : q.patient;
      if (good == bad) continue;
      ItemPair pair;
      pair.pair_id = std::string(to_string(role)) + "-" + std::to_string(i) + "-" +
                     std::to_string(it->second);
      pair.base.item_id = pair.pair_id;
      pair.base.target_role = role;
      pair.base.slots = {{Role::agent, agent_target ? std::string(kTargetMarker) : p.agent},
                         {Role::verb, p.verb},
                         {Role::patient, agent_target ? p.patient : std::string(kTargetMarker)}};
      pair.typical = {good, std::nullopt};
      pair.atypical = {bad, std::nullopt};
      pairs.push_back(std::move(pair));
    }
  }
  return pairs;
}

std::set<std::string> intersect_coverage(std::span<const ScoreSetIds> score_sets) {
  if (score_sets.empty()) throw DatasetError({"coverage needs at least one score set"});
  std::set<std::string> common = score_sets.front().second;
  for (const auto& [scorer, ids] : score_sets.subspan(1)) {
    std::set<std::string> next;
    std::set_intersection(common.begin(), common.end(), ids.begin(), ids.end(),
                          std::inserter(next, next.end()));
    common = std::move(next);
  }
  return common;
}

std::set<std::string> covered_items(std::span<const ScoreRecord> records, std::string_view scorer) {
  std::map<std::string, int> seen;
  for (const auto& r : records) {
    if (r.scorer != scorer) continue;
    seen[r.item_id] |= r.variant == Variant::typical ? 1 : 2;
  }
  std::set<std::string> ids;
  for (const auto& [id, mask] : seen) {
    if (mask == 3) ids.insert(id);
  }
  return ids;
}

std::vector<ScoreRecord> read_scores(std::istream& in, std::string_view source) {
  using nlohmann::json;
  std::vector<ScoreRecord> records;
  std::vector<std::string> problems;
  std::set<std::tuple<std::string, Variant, std::string>> keys;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto where = std::string(source) + " line " + std::to_string(line_no) + ": ";
    try {
      auto j = json::parse(line);
      ScoreRecord r;
      r.item_id = j.at("item_id").get<std::string>();
      r.variant = parse_variant(j.at("variant").get<std::string>());
      r.scorer = j.at("scorer").get<std::string>();
      r.score = j.at("score").get<double>();
      if (!std::isfinite(r.score)) {
        problems.push_back(where + "score is not finite");
        continue;
      }
      if (!keys.emplace(r.item_id, r.variant, r.scorer).second) {
        problems.push_back(where + "duplicate (item_id, variant, scorer) " + r.item_id);
        continue;
      }
      records.push_back(std::move(r));
    } catch (const std::exception& e) {
      problems.push_back(where + e.what());
    }
  }
  if (!problems.empty()) throw DatasetError(std::move(problems));
  return records;
}

std::vector<ScoreRecord> load_scores(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_scores(in, path.string());
}

void write_scores(std::ostream& out, std::span<const ScoreRecord> records) {
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["item_id"] = r.item_id;
    j["variant"] = to_string(r.variant);
    j["scorer"] = r.scorer;
    j["score"] = r.score;
    out << j.dump() << '\n';
  }
}

}  // namespace gek
