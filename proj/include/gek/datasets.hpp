#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gek/error.hpp"
#include "gek/role.hpp"

namespace gek {

/// Lemma placeholder for the slot being predicted.
inline constexpr std::string_view kTargetMarker = "___";

struct Slot {
  Role role;
  std::string lemma;

  friend bool operator==(const Slot&, const Slot&) = default;
};

/// A role-labelled lemma tuple with one target slot, e.g. "tailor sew ___".
/// The target slot is stored with `kTargetMarker` as its lemma.
struct EventTuple {
  std::string item_id;
  std::vector<Slot> slots;
  Role target_role = Role::patient;
  std::optional<std::string> preposition;  // surface preposition of the target oblique
  std::optional<std::string> verb_past;

  /// Lemma filling `role`, or nullptr when the role is not realized.
  const std::string* lemma(Role role) const;
  const std::string& verb() const;

  /// Preposition introducing oblique `role`: the item's override when it
  /// applies to that slot, otherwise the role default.
  std::string preposition_for(Role role) const;

  /// Realized non-target slots in canonical role order.
  std::vector<Slot> context() const;

  /// Throws DatasetError when an invariant does not hold.
  void validate() const;

  friend bool operator==(const EventTuple&, const EventTuple&) = default;
};

struct Filler {
  std::string lemma;
  std::optional<double> rating;  // human typicality, 1..7

  friend bool operator==(const Filler&, const Filler&) = default;
};

struct ItemPair {
  std::string pair_id;
  Filler typical;
  Filler atypical;
  EventTuple base;

  const Filler& filler(Variant variant) const {
    return variant == Variant::typical ? typical : atypical;
  }
  bool has_ratings() const { return typical.rating && atypical.rating; }

  friend bool operator==(const ItemPair&, const ItemPair&) = default;
};

enum class Plausibility { plausible, implausible };

struct PlausibilityTriple {
  std::string agent;
  std::string verb;
  std::string patient;
  Plausibility label = Plausibility::plausible;
};

/// One row of the score interchange format. Higher scores mean more typical.
struct ScoreRecord {
  std::string item_id;
  Variant variant = Variant::typical;
  std::string scorer;
  double score = 0.0;

  friend bool operator==(const ScoreRecord&, const ScoreRecord&) = default;
};

/// Input rejection. `problems()` carries one "line N: ..." entry per bad row.
class DatasetError : public Error {
 public:
  explicit DatasetError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

// DTFit TSV: item_id, role, agent, verb, patient, instrument, time, location,
// typical_filler, typical_rating, atypical_filler, atypical_rating,
// [preposition], [verb_past]. Empty cells mark absent slots, "___" the target.
std::vector<ItemPair> parse_dtfit(std::istream& in, Role role, std::string_view source = "<stream>");
std::vector<ItemPair> load_dtfit(const std::filesystem::path& path, Role role);
void write_dtfit(std::ostream& out, std::span<const ItemPair> pairs);

/// Typical/atypical agent-verb-patient rows sharing an explicit group id.
struct TripleRow {
  std::string group_id;
  std::string agent;
  std::string verb;
  std::string patient;
  Variant condition = Variant::typical;
  std::optional<double> rating;
};

struct SkippedGroup {
  std::string group_id;
  std::string reason;
};

struct DerivedPairs {
  std::vector<ItemPair> agent_pairs;
  std::vector<ItemPair> patient_pairs;
  std::vector<SkippedGroup> skipped;
};

/// TSV: group_id, agent, verb, patient, condition (T/A), rating.
std::vector<TripleRow> load_triple_rows(const std::filesystem::path& path);
DerivedPairs derive_role_pairs(std::span<const TripleRow> rows);

/// TSV: agent, verb, patient, label (plausible/implausible).
std::vector<PlausibilityTriple> load_plausibility(const std::filesystem::path& path);

/// Every (plausible, implausible) combination that agrees on verb and on the
/// non-target argument. Pairs carry no ratings.
std::vector<ItemPair> mine_minimal_pairs(std::span<const PlausibilityTriple> plausible,
                                         std::span<const PlausibilityTriple> implausible,
                                         Role role);

struct Coverage {
  std::size_t covered = 0;
  std::size_t total = 0;

  std::string str() const { return std::to_string(covered) + "/" + std::to_string(total); }
  friend bool operator==(const Coverage&, const Coverage&) = default;
};

using ScoreSetIds = std::pair<std::string, std::set<std::string>>;

/// Items scored by every set. An empty result is legal; callers flag it.
std::set<std::string> intersect_coverage(std::span<const ScoreSetIds> score_sets);

/// Item ids carrying both variants for `scorer`.
std::set<std::string> covered_items(std::span<const ScoreRecord> records, std::string_view scorer);

// JSON Lines, one object per record with keys item_id, variant, scorer, score.
std::vector<ScoreRecord> read_scores(std::istream& in, std::string_view source = "<stream>");
std::vector<ScoreRecord> load_scores(const std::filesystem::path& path);
void write_scores(std::ostream& out, std::span<const ScoreRecord> records);

}  // namespace gek
