#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gek/datasets.hpp"
#include "gek/embeddings.hpp"

namespace gek {

/// One scene of the synthetic world: who typically does what to what, with what.
struct FixtureTopic {
  std::string_view agent;
  std::string_view verb;
  std::string_view patient;
  std::string_view instrument;
};

std::span<const FixtureTopic> fixture_topics();

/// Parsed CoNLL-U sentences "The <agent> <verb>ed the <patient> [with the
/// <instrument>] ." drawn from the topics. Most sentences keep a topic's own
/// agent and patient, so each verb's typical fillers dominate its events.
void write_fixture_corpus(std::ostream& out, std::size_t sentences, std::uint64_t seed);

/// Vectors for every topic word: a one-hot topic axis plus small seeded noise.
EmbeddingStore<double> fixture_vectors(std::uint64_t seed);

/// Ten pairs, one per topic, targeting `role` (agent or patient). The typical
/// filler is the topic's own, the atypical one comes from the next topic.
std::vector<ItemPair> fixture_pairs(Role role);

}  // namespace gek
