#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gek/datasets.hpp"
#include "gek/event_graph.hpp"

namespace gek {

class RealizationError : public Error {
 public:
  explicit RealizationError(const std::string& what) : Error("diagnostics", what) {}
};

/// Simple past of a verb lemma: irregular table first, then the -ed rules
/// (silent e, consonant + y, consonant doubling). Underscore-joined phrasal
/// lemmas inflect their first word. Throws RealizationError when the lemma
/// is not alphabetic.
std::string past_tense(std::string_view lemma);

/// Past form from the irregular table, if listed.
std::optional<std::string_view> irregular_past(std::string_view lemma);

enum class Construction { declarative, cleft, wh };

inline constexpr std::array kAllConstructions{Construction::declarative, Construction::cleft,
                                              Construction::wh};

std::string_view to_string(Construction c);
Construction parse_construction(std::string_view name);

inline constexpr std::string_view kSlotMarker = "[SLOT]";

/// A sentence with one filler position: text = prefix + filler + suffix.
struct RealizedStimulus {
  std::string item_id;
  Variant variant = Variant::typical;
  std::string prefix;
  std::string filler;
  std::string suffix;
  Construction construction = Construction::declarative;

  std::size_t slot_offset() const noexcept { return prefix.size(); }
  std::string text() const { return prefix + filler + suffix; }
  std::string masked(std::string_view marker = kSlotMarker) const {
    return prefix + std::string(marker) + suffix;
  }

  friend bool operator==(const RealizedStimulus&, const RealizedStimulus&) = default;
};

/// "The tailor sewed the [SLOT]."
RealizedStimulus realize_declarative(const EventTuple& tuple, std::string_view filler,
                                     Variant variant = Variant::typical);
/// "It was the [SLOT] that the actor won." / "It was on the [SLOT] that ..."
RealizedStimulus realize_cleft(const EventTuple& tuple, std::string_view filler,
                               Variant variant = Variant::typical);
/// "Which [SLOT] did the actor win?" / "On which [SLOT] did ...?" /
/// "Which [SLOT] mixed the paint?" (subject questions take no do-support)
RealizedStimulus realize_wh(const EventTuple& tuple, std::string_view filler,
                            Variant variant = Variant::typical);
RealizedStimulus realize(const EventTuple& tuple, std::string_view filler, Variant variant,
                         Construction construction);

/// Both variants of every pair, in pair order.
std::vector<RealizedStimulus> realize_pairs(std::span<const ItemPair> pairs,
                                            Construction construction,
                                            std::span<const Variant> variants);

// JSON Lines with keys item_id, variant, construction, prefix, filler, suffix.
void write_stimuli(std::ostream& out, std::span<const RealizedStimulus> stimuli);
std::vector<RealizedStimulus> read_stimuli(std::istream& in);

using FrequencyTable = std::unordered_map<std::string, std::uint64_t>;

enum class SwapSource { lmi_adversarial, synonym };

struct SwapCandidate {
  std::string original;
  std::string replacement;
  std::uint64_t freq_original = 0;
  std::uint64_t freq_replacement = 0;
  SwapSource source = SwapSource::lmi_adversarial;
  double lmi = 0.0;  // verb association of the replacement (adversarial only)
};

/// Highest-LMI `target_relation` associates of the pair's verb, excluding the
/// pair's own fillers. `original` is the atypical filler they would replace.
/// The list is a suggestion for manual curation.
std::vector<SwapCandidate> adversarial_fillers(const EventGraph& graph, const ItemPair& pair,
                                               std::string_view target_relation, std::size_t k);

inline constexpr std::uint64_t kSynonymFrequencyCap = 300000;

struct SwapVerdict {
  bool valid = false;
  std::string reason;
};

/// Valid iff the replacement is strictly rarer than the original and strictly
/// below `cap`. Lemmas missing from `freq` count as frequency 0.
SwapVerdict validate_synonym_swap(const SwapCandidate& candidate, const FrequencyTable& freq,
                                  std::uint64_t cap = kSynonymFrequencyCap);

std::vector<SwapCandidate> synonym_candidates(std::string_view original,
                                              std::span<const std::string> synonyms,
                                              const FrequencyTable& freq);

/// TSV: original <TAB> comma-separated synonyms (curator order).
std::unordered_map<std::string, std::vector<std::string>> load_synonyms(
    const std::filesystem::path& path);

/// Candidate table for curation: pair_id, original, replacement, freq_original,
/// freq_replacement, source, lmi, valid, reason.
struct CandidateRow {
  std::string pair_id;
  SwapCandidate candidate;
  std::optional<SwapVerdict> verdict;
};
void write_candidates(std::ostream& out, std::span<const CandidateRow> rows);

/// Draft diagnostic sets in DTFit form (ratings dropped): the atypical filler
/// replaced by the top adversarial candidate, or the typical filler replaced
/// by its first valid synonym. Pairs without a candidate are left out.
std::vector<ItemPair> adversarial_dataset(std::span<const ItemPair> pairs,
                                          std::span<const CandidateRow> rows);
std::vector<ItemPair> synonym_dataset(std::span<const ItemPair> pairs,
                                      std::span<const CandidateRow> rows);

}  // namespace gek
