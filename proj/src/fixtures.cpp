#include "gek/fixtures.hpp"

#include <array>
#include <ostream>
#include <random>

#include "gek/diagnostics.hpp"

namespace gek {
namespace {

constexpr std::array<FixtureTopic, 10> kTopics{{
    {"tailor", "sew", "dress", "needle"},
    {"mason", "mix", "cement", "trowel"},
    {"chef", "cook", "soup", "pan"},
    {"pilot", "fly", "plane", "radar"},
    {"painter", "paint", "wall", "brush"},
    {"farmer", "plant", "seed", "hoe"},
    {"guard", "open", "door", "key"},
    {"actor", "win", "award", "script"},
    {"boxer", "deliver", "punch", "glove"},
    {"student", "read", "book", "lamp"},
}};

constexpr Eigen::Index kNoiseDims = 2;

// Platform-independent draws; std distributions differ between libraries.
std::size_t draw(std::mt19937_64& rng, std::size_t n) { return rng() % n; }
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct Token {
  std::string form, lemma, upos;
  int head;
  std::string deprel;
};

}  // namespace

std::span<const FixtureTopic> fixture_topics() { return kTopics; }

void write_fixture_corpus(std::ostream& out, std::size_t sentences, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < sentences; ++s) {
    const auto& topic = kTopics[draw(rng, kTopics.size())];
    auto agent = topic.agent;
    auto patient = topic.patient;
    if (unit(rng) < 0.15) agent = kTopics[draw(rng, kTopics.size())].agent;
    if (unit(rng) < 0.15) patient = kTopics[draw(rng, kTopics.size())].patient;
    const bool instrument = unit(rng) < 0.3;

    std::vector<Token> toks{
        {"The", "the", "DET", 2, "det"},
        {std::string(agent), std::string(agent), "NOUN", 3, "nsubj"},
        {past_tense(topic.verb), std::string(topic.verb), "VERB", 0, "root"},
        {"the", "the", "DET", 5, "det"},
        {std::string(patient), std::string(patient), "NOUN", 3, "obj"},
    };
    if (instrument) {
      toks.push_back({"with", "with", "ADP", 8, "case"});
      toks.push_back({"the", "the", "DET", 8, "det"});
      toks.push_back({std::string(topic.instrument), std::string(topic.instrument), "NOUN", 3, "obl"});
    }
    toks.push_back({".", ".", "PUNCT", 3, "punct"});

    out << "# sent_id = fixture-" << s + 1 << '\n';
    for (std::size_t i = 0; i < toks.size(); ++i) {
      const auto& t = toks[i];
      out << i + 1 << '\t' << t.form << '\t' << t.lemma << '\t' << t.upos << "\t_\t_\t" << t.head
          << '\t' << t.deprel << "\t_\t_\n";
    }
    out << '\n';
  }
}

EmbeddingStore<double> fixture_vectors(std::uint64_t seed) {
  const Eigen::Index dim = static_cast<Eigen::Index>(kTopics.size()) + kNoiseDims;
  EmbeddingStore<double> store(dim);
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < kTopics.size(); ++t) {
    const auto& topic = kTopics[t];
    for (auto word : {topic.agent, topic.verb, topic.patient, topic.instrument}) {
      Vector<double> v(dim);
      for (Eigen::Index i = 0; i < dim; ++i) v[i] = 0.15 * unit(rng);
      v[static_cast<Eigen::Index>(t)] += 1.0;
      store.insert(std::string(word), v);
    }
  }
  return store;
}

std::vector<ItemPair> fixture_pairs(Role role) {
  if (role != Role::agent && role != Role::patient) {
    throw Error("datasets", "fixture pairs exist for agent and patient only");
  }
  std::vector<ItemPair> pairs;
  for (std::size_t t = 0; t < kTopics.size(); ++t) {
    const auto& topic = kTopics[t];
    const auto& next = kTopics[(t + 1) % kTopics.size()];
    ItemPair p;
    p.pair_id = std::string(to_string(role)) + "-" + std::string(topic.verb);
    p.base.item_id = p.pair_id;
    p.base.target_role = role;
    const bool agent = role == Role::agent;
    p.base.slots = {{Role::agent, agent ? std::string(kTargetMarker) : std::string(topic.agent)},
                    {Role::verb, std::string(topic.verb)},
                    {Role::patient, agent ? std::string(topic.patient) : std::string(kTargetMarker)}};
    p.typical = {std::string(agent ? topic.agent : topic.patient), 6.5};
    p.atypical = {std::string(agent ? next.agent : next.patient), 1.5};
    pairs.push_back(std::move(p));
  }
  return pairs;
}

}  // namespace gek
