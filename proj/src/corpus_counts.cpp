#include "gek/corpus_counts.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <thread>

#include "gek/error.hpp"
#include "gek/io.hpp"
#include "gek/log.hpp"

namespace gek {
namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

struct Token {
  std::string lemma;
  std::string upos;
  std::string deprel;
  std::size_t head = 0;
};

std::string normalize_lemma(std::string_view lemma, std::string_view form) {
  auto text = lemma == "_" || lemma.empty() ? form : lemma;
  auto out = to_lower(text);
  std::replace(out.begin(), out.end(), ' ', '_');
  return out;
}

// Parses one token line into `tokens`. Returns false when the line is
// malformed; multiword ranges and empty nodes are accepted and ignored.
bool parse_token_line(std::string_view line, std::vector<Token>& tokens) {
  auto cols = split(line, '\t');
  if (cols.size() != 10) return false;
  auto id = cols[0];
  if (id.find('-') != std::string_view::npos || id.find('.') != std::string_view::npos) {
    return true;
  }
  auto index = parse_uint(id);
  auto head = parse_uint(cols[6]);
  if (!index || !head || *index != tokens.size() + 1) return false;
  tokens.push_back({normalize_lemma(cols[2], cols[1]), std::string(cols[3]),
                    std::string(cols[7]), static_cast<std::size_t>(*head)});
  return true;
}

class SentenceCounter {
 public:
  SentenceCounter(const IngestConfig& config, RelationCounts& counts)
      : config_(config), counts_(counts) {}

  void count(const std::vector<Token>& tokens) {
    const auto n = tokens.size();
    std::vector<std::vector<std::size_t>> children(n + 1);
    for (std::size_t i = 0; i < n; ++i) children[tokens[i].head].push_back(i + 1);

    for (const auto& t : tokens) {
      if (!config_.skip_upos.contains(t.upos)) counts_.add_node(t.lemma);
    }

    std::vector<std::vector<RoleFiller>> events(n + 1);
    for (std::size_t d = 1; d <= n; ++d) {
      const auto& dep = tokens[d - 1];
      if (dep.head == 0) continue;
      const auto& head = tokens[dep.head - 1];
      if (config_.skip_upos.contains(dep.upos) || config_.skip_upos.contains(head.upos)) continue;
      auto label = harvested_label(dep.deprel);
      if (label.empty()) continue;
      if (config_.mark_oblique_case && label == "obl") {
        for (auto c : children[d]) {
          const auto& child = tokens[c - 1];
          if (child.deprel == "case" || child.deprel.starts_with("case:")) {
            label = "obl:" + child.lemma;
            break;
          }
        }
      }
      counts_.add_edge({head.lemma, label, dep.lemma});
      if (config_.event_head_upos.contains(head.upos) &&
          events[dep.head].size() < config_.max_event_arity) {
        events[dep.head].emplace_back(std::move(label), dep.lemma);
      }
    }

    for (std::size_t h = 1; h <= n; ++h) {
      auto& roles = events[h];
      if (roles.empty()) continue;
      std::sort(roles.begin(), roles.end());
      roles.erase(std::unique(roles.begin(), roles.end()), roles.end());
      counts_.add_event({tokens[h - 1].lemma, std::move(roles)});
    }
  }

 private:
  std::string harvested_label(const std::string& deprel) const {
    if (config_.relations.contains(deprel)) return deprel;
    auto colon = deprel.find(':');
    if (colon != std::string::npos) {
      auto base = deprel.substr(0, colon);
      if (config_.relations.contains(base)) return base;
    }
    return {};
  }

  const IngestConfig& config_;
  RelationCounts& counts_;
};

}  // namespace

std::size_t EdgeKeyHash::operator()(const EdgeKey& key) const noexcept {
  std::hash<std::string> h;
  return mix(mix(h(key.head), h(key.relation)), h(key.dependent));
}

std::size_t EventKeyHash::operator()(const EventKey& key) const noexcept {
  std::hash<std::string> h;
  auto seed = h(key.verb);
  for (const auto& [rel, lemma] : key.roles) seed = mix(mix(seed, h(rel)), h(lemma));
  return seed;
}

void RelationCounts::add_node(const std::string& lemma, std::uint64_t n) {
  if (n) nodes_[lemma] += n;
}

void RelationCounts::add_edge(const EdgeKey& edge, std::uint64_t n) {
  if (!n) return;
  edges_[edge] += n;
  relation_totals_[edge.relation] += n;
}

void RelationCounts::add_event(const EventKey& event, std::uint64_t n) {
  if (n) events_[event] += n;
}

void RelationCounts::merge(const RelationCounts& other) {
  for (const auto& [k, v] : other.nodes_) nodes_[k] += v;
  for (const auto& [k, v] : other.edges_) edges_[k] += v;
  for (const auto& [k, v] : other.events_) events_[k] += v;
  for (const auto& [k, v] : other.relation_totals_) relation_totals_[k] += v;
}

RelationCounts ingest_conllu(std::istream& in, const IngestConfig& config, IngestStats* stats) {
  RelationCounts counts;
  SentenceCounter counter(config, counts);
  IngestStats local;
  std::vector<Token> tokens;
  bool broken = false;
  std::size_t line_no = 0;
  std::size_t sentence_start = 1;

  auto finish = [&] {
    if (tokens.empty() && !broken) return;
    ++local.sentences;
    bool heads_ok = std::all_of(tokens.begin(), tokens.end(),
                                [&](const Token& t) { return t.head <= tokens.size(); });
    if (broken || !heads_ok) {
      ++local.skipped_sentences;
      warn("skipping malformed CoNLL-U sentence starting at line " +
           std::to_string(sentence_start));
    } else {
      local.tokens += tokens.size();
      counter.count(tokens);
    }
    tokens.clear();
    broken = false;
  };

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      finish();
      sentence_start = line_no + 1;
      continue;
    }
    if (line.front() == '#') continue;
    if (!broken && !parse_token_line(line, tokens)) broken = true;
  }
  finish();
  if (stats) *stats += local;
  return counts;
}

RelationCounts ingest_files(std::span<const std::filesystem::path> shards,
                            const IngestConfig& config, unsigned threads, IngestStats* stats) {
  std::vector<RelationCounts> partial(shards.size());
  std::vector<IngestStats> partial_stats(shards.size());
  std::vector<std::exception_ptr> failures(shards.size());
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (auto i = next++; i < shards.size(); i = next++) {
      try {
        LineReader reader(shards[i]);
        // The reader decompresses; the parser consumes a stream of lines.
        std::stringstream buffer;
        std::string line;
        constexpr std::size_t kChunkLines = 1 << 16;
        std::size_t pending = 0;
        bool in_sentence = false;
        while (reader.getline(line)) {
          buffer << line << '\n';
          ++pending;
          in_sentence = !line.empty();
          if (pending >= kChunkLines && !in_sentence) {
            partial[i].merge(ingest_conllu(buffer, config, &partial_stats[i]));
            buffer = std::stringstream();
            pending = 0;
          }
        }
        partial[i].merge(ingest_conllu(buffer, config, &partial_stats[i]));
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };

  const auto workers = std::max(1u, std::min<unsigned>(threads, shards.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
  }
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  RelationCounts total;
  for (std::size_t i = 0; i < shards.size(); ++i) {
    total.merge(partial[i]);
    if (stats) *stats += partial_stats[i];
  }
  return total;
}

}  // namespace gek
