#include "gek/event_graph.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "gek/error.hpp"
#include "gek/io.hpp"

namespace gek {

// ---------------------------------------------------------------------------
// EventGraph

EventGraph::EventGraph(std::map<std::string, std::uint64_t> nodes, std::vector<Edge> edges,
                       std::vector<Event> events, PruneThresholds thresholds)
    : nodes_(std::move(nodes)),
      edges_(std::move(edges)),
      events_(std::move(events)),
      thresholds_(thresholds) {
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.head, a.relation, a.dependent) < std::tie(b.head, b.relation, b.dependent);
  });
  for (auto& e : events_) std::sort(e.roles.begin(), e.roles.end());
  std::sort(events_.begin(), events_.end(), [](const Event& a, const Event& b) {
    return std::tie(a.verb, a.roles) < std::tie(b.verb, b.roles);
  });
  build_indexes();
}

void EventGraph::build_indexes() {
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    by_head_[edges_[i].head].push_back(i);
    by_dependent_[edges_[i].dependent].push_back(i);
  }
  for (std::size_t i = 0; i < events_.size(); ++i) {
    by_verb_[events_[i].verb].push_back(i);
    for (const auto& [rel, lemma] : events_[i].roles) {
      auto& list = by_role_[rel + '\t' + lemma];
      if (list.empty() || list.back() != i) list.push_back(i);
    }
  }
}

std::span<const std::size_t> EventGraph::lookup(const Index& index, std::string_view key) {
  auto it = index.find(std::string(key));
  if (it == index.end()) return {};
  return it->second;
}

std::optional<std::uint64_t> EventGraph::node_freq(std::string_view lemma) const {
  auto it = nodes_.find(std::string(lemma));
  if (it == nodes_.end()) return std::nullopt;
  return it->second;
}

std::span<const std::size_t> EventGraph::edges_with_head(std::string_view lemma) const {
  return lookup(by_head_, lemma);
}

std::span<const std::size_t> EventGraph::edges_with_dependent(std::string_view lemma) const {
  return lookup(by_dependent_, lemma);
}

std::span<const std::size_t> EventGraph::events_of_verb(std::string_view verb) const {
  return lookup(by_verb_, verb);
}

std::span<const std::size_t> EventGraph::events_with(std::string_view relation,
                                                     std::string_view lemma) const {
  std::string key(relation);
  key += '\t';
  key += lemma;
  return lookup(by_role_, key);
}

// ---------------------------------------------------------------------------
// Association, pruning, queries

EventGraph compute_association(const RelationCounts& counts) {
  // Marginals within each relation: f(h, r) and f(d, r).
  std::unordered_map<std::string, std::uint64_t> head_marginal;
  std::unordered_map<std::string, std::uint64_t> dep_marginal;
  auto key = [](const std::string& rel, const std::string& lemma) { return rel + '\t' + lemma; };
  for (const auto& [edge, n] : counts.edge_freq()) {
    head_marginal[key(edge.relation, edge.head)] += n;
    dep_marginal[key(edge.relation, edge.dependent)] += n;
  }

  std::vector<Edge> edges;
  edges.reserve(counts.edge_freq().size());
  for (const auto& [edge, n] : counts.edge_freq()) {
    auto total = counts.relation_totals().at(edge.relation);
    if (total == 0) continue;
    const double joint = static_cast<double>(n);
    const double fh = static_cast<double>(head_marginal.at(key(edge.relation, edge.head)));
    const double fd = static_cast<double>(dep_marginal.at(key(edge.relation, edge.dependent)));
    // log2( (n/N) / ((fh/N)(fd/N)) ) = log2( n*N / (fh*fd) )
    const double pmi = std::log2(joint * static_cast<double>(total) / (fh * fd));
    edges.push_back({edge.head, edge.relation, edge.dependent, n, pmi, joint * pmi});
  }

  std::vector<Event> events;
  events.reserve(counts.event_freq().size());
  for (const auto& [event, n] : counts.event_freq()) {
    events.push_back({event.verb, event.roles, n});
  }
  std::map<std::string, std::uint64_t> nodes(counts.node_freq().begin(), counts.node_freq().end());
  return EventGraph(std::move(nodes), std::move(edges), std::move(events), {1, 1});
}

EventGraph prune(const EventGraph& graph, PruneThresholds thresholds) {
  if (thresholds.min_node_freq < 1 || thresholds.min_event_freq < 1) {
    throw Error("corpus-graph", "pruning thresholds must be at least 1");
  }
  std::map<std::string, std::uint64_t> nodes;
  for (const auto& [lemma, n] : graph.nodes()) {
    if (n >= thresholds.min_node_freq) nodes.emplace(lemma, n);
  }
  auto kept = [&](const std::string& lemma) { return nodes.contains(lemma); };

  std::vector<Edge> edges;
  for (const auto& e : graph.edges()) {
    if (kept(e.head) && kept(e.dependent)) edges.push_back(e);
  }
  std::vector<Event> events;
  for (const auto& ev : graph.events()) {
    if (ev.count < thresholds.min_event_freq || !kept(ev.verb)) continue;
    if (std::all_of(ev.roles.begin(), ev.roles.end(),
                    [&](const RoleFiller& r) { return kept(r.second); })) {
      events.push_back(ev);
    }
  }
  return EventGraph(std::move(nodes), std::move(edges), std::move(events), thresholds);
}

namespace {

void rank(std::vector<Associate>& list, std::size_t k) {
  std::sort(list.begin(), list.end(), [](const Associate& a, const Associate& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    if (a.count != b.count) return a.count > b.count;
    return a.lemma < b.lemma;
  });
  if (list.size() > k) list.resize(k);
}

bool contains_role(const Event& event, std::string_view relation, std::string_view lemma) {
  return std::binary_search(
      event.roles.begin(), event.roles.end(), std::pair(relation, lemma),
      [](const auto& a, const auto& b) {
        return std::tie(a.first, a.second) < std::tie(b.first, b.second);
      });
}

}  // namespace

std::vector<Associate> top_associates(const EventGraph& graph, std::string_view cue,
                                      std::string_view relation, Direction direction,
                                      std::size_t k) {
  if (k == 0) return {};
  const bool as_head = direction == Direction::as_head;
  auto incident = as_head ? graph.edges_with_head(cue) : graph.edges_with_dependent(cue);
  std::vector<Associate> out;
  for (auto i : incident) {
    const auto& e = graph.edges()[i];
    if (e.relation != relation) continue;
    out.push_back({as_head ? e.dependent : e.head, e.lmi, e.count});
  }
  rank(out, k);
  return out;
}

FillerQuery query_event_fillers(const EventGraph& graph, std::span<const Cue> cues,
                                std::string_view target_relation, std::size_t k) {
  if (cues.empty()) throw Error("corpus-graph", "event query needs at least one cue");
  const Cue* verb_cue = nullptr;
  for (const auto& c : cues) {
    if (c.relation == kVerbRelation) {
      verb_cue = &c;
      break;
    }
  }
  if (verb_cue && cues.size() == 1) {
    return {top_associates(graph, verb_cue->lemma, target_relation, Direction::as_head, k),
            false};
  }

  std::span<const std::size_t> candidates;
  if (verb_cue) {
    candidates = graph.events_of_verb(verb_cue->lemma);
  } else {
    candidates = graph.events_with(cues.front().relation, cues.front().lemma);
  }

  std::map<std::string, std::uint64_t> weights;
  for (auto i : candidates) {
    const auto& ev = graph.events()[i];
    bool match = std::all_of(cues.begin(), cues.end(), [&](const Cue& c) {
      return c.relation == kVerbRelation ? ev.verb == c.lemma
                                         : contains_role(ev, c.relation, c.lemma);
    });
    if (!match) continue;
    for (const auto& [rel, lemma] : ev.roles) {
      if (rel == target_relation) weights[lemma] += ev.count;
    }
  }

  FillerQuery result;
  if (weights.empty()) {
    result.fallback = true;
    if (verb_cue) {
      result.fillers = top_associates(graph, verb_cue->lemma, target_relation,
                                      Direction::as_head, k);
    }
    return result;
  }
  for (const auto& [lemma, w] : weights) {
    result.fillers.push_back({lemma, static_cast<double>(w), w});
  }
  rank(result.fillers, k);
  return result;
}

// ---------------------------------------------------------------------------
// Binary container:
//   "GEKGRAPH" | u32 version | u64 payload size | payload | u32 crc32(payload)
// The payload starts with a sorted string table; records refer to strings by
// u32 index. Integers are little-endian, doubles are IEEE-754 bit patterns.

namespace {

constexpr char kMagic[8] = {'G', 'E', 'K', 'G', 'R', 'A', 'P', 'H'};

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes_.insert(bytes_.end(), s.begin(), s.end());
  }
  const std::string& bytes() const { return bytes_; }

 private:
  std::string bytes_;
};

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::uint32_t u32() { return static_cast<std::uint32_t>(uint(4)); }
  std::uint64_t u64() { return uint(8); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    auto n = u32();
    need(n);
    std::string s(bytes_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::uint64_t uint(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += static_cast<std::size_t>(width);
    return v;
  }
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw GraphFormatError(GraphFormatError::Kind::malformed, "graph payload ends early");
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t crc(std::string_view bytes) {
  uLong c = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in bounded chunks.
  constexpr std::size_t kChunk = 1u << 30;
  for (std::size_t off = 0; off < bytes.size(); off += kChunk) {
    auto n = std::min(kChunk, bytes.size() - off);
    c = crc32(c, reinterpret_cast<const Bytef*>(bytes.data() + off), static_cast<uInt>(n));
  }
  return static_cast<std::uint32_t>(c);
}

}  // namespace

void write_graph(const EventGraph& graph, std::ostream& out) {
  std::vector<std::string_view> strings;
  for (const auto& [lemma, n] : graph.nodes()) strings.push_back(lemma);
  for (const auto& e : graph.edges()) {
    strings.insert(strings.end(), {e.head, e.relation, e.dependent});
  }
  for (const auto& ev : graph.events()) {
    strings.push_back(ev.verb);
    for (const auto& [rel, lemma] : ev.roles) strings.insert(strings.end(), {rel, lemma});
  }
  std::sort(strings.begin(), strings.end());
  strings.erase(std::unique(strings.begin(), strings.end()), strings.end());
  auto id = [&](std::string_view s) {
    return static_cast<std::uint32_t>(std::lower_bound(strings.begin(), strings.end(), s) -
                                      strings.begin());
  };

  Writer w;
  w.u64(graph.thresholds().min_node_freq);
  w.u64(graph.thresholds().min_event_freq);
  w.u64(strings.size());
  for (auto s : strings) w.str(s);
  w.u64(graph.nodes().size());
  for (const auto& [lemma, n] : graph.nodes()) {
    w.u32(id(lemma));
    w.u64(n);
  }
  w.u64(graph.edges().size());
  for (const auto& e : graph.edges()) {
    w.u32(id(e.head));
    w.u32(id(e.relation));
    w.u32(id(e.dependent));
    w.u64(e.count);
    w.f64(e.pmi);
    w.f64(e.lmi);
  }
  w.u64(graph.events().size());
  for (const auto& ev : graph.events()) {
    w.u32(id(ev.verb));
    w.u32(static_cast<std::uint32_t>(ev.roles.size()));
    for (const auto& [rel, lemma] : ev.roles) {
      w.u32(id(rel));
      w.u32(id(lemma));
    }
    w.u64(ev.count);
  }

  Writer header;
  header.u32(kGraphFormatVersion);
  header.u64(w.bytes().size());
  Writer trailer;
  trailer.u32(crc(w.bytes()));

  out.write(kMagic, sizeof(kMagic));
  out.write(header.bytes().data(), static_cast<std::streamsize>(header.bytes().size()));
  out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
  out.write(trailer.bytes().data(), static_cast<std::streamsize>(trailer.bytes().size()));
}

EventGraph read_graph(std::istream& in) {
  using Kind = GraphFormatError::Kind;
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  constexpr std::size_t kHeader = sizeof(kMagic) + 4 + 8;
  if (data.size() < sizeof(kMagic) || !std::equal(kMagic, kMagic + sizeof(kMagic), data.begin())) {
    throw GraphFormatError(Kind::bad_magic, "not a graph file (bad magic)");
  }
  if (data.size() < kHeader) {
    throw GraphFormatError(Kind::checksum, "graph file truncated in header");
  }
  Reader head(std::string_view(data).substr(sizeof(kMagic), 12));
  auto version = head.u32();
  if (version != kGraphFormatVersion) {
    throw GraphFormatError(Kind::version_mismatch,
                           "graph format version " + std::to_string(version) + ", expected " +
                               std::to_string(kGraphFormatVersion));
  }
  auto size = head.u64();
  if (data.size() - kHeader < 4 || data.size() - kHeader - 4 != size) {
    throw GraphFormatError(Kind::checksum, "graph file truncated or padded (checksum failure)");
  }
  std::string_view payload = std::string_view(data).substr(kHeader, size);
  Reader tail(std::string_view(data).substr(kHeader + size));
  if (tail.u32() != crc(payload)) {
    throw GraphFormatError(Kind::checksum, "graph checksum mismatch");
  }

  Reader r(payload);
  PruneThresholds thresholds{r.u64(), r.u64()};
  std::vector<std::string> strings(r.u64());
  for (auto& s : strings) s = r.str();
  auto str = [&](std::uint32_t i) -> const std::string& {
    if (i >= strings.size()) throw GraphFormatError(Kind::malformed, "string index out of range");
    return strings[i];
  };

  std::map<std::string, std::uint64_t> nodes;
  for (auto n = r.u64(); n > 0; --n) {
    const auto& lemma = str(r.u32());
    nodes.emplace(lemma, r.u64());
  }
  std::vector<Edge> edges(r.u64());
  for (auto& e : edges) {
    e.head = str(r.u32());
    e.relation = str(r.u32());
    e.dependent = str(r.u32());
    e.count = r.u64();
    e.pmi = r.f64();
    e.lmi = r.f64();
  }
  std::vector<Event> events(r.u64());
  for (auto& ev : events) {
    ev.verb = str(r.u32());
    ev.roles.resize(r.u32());
    for (auto& [rel, lemma] : ev.roles) {
      rel = str(r.u32());
      lemma = str(r.u32());
    }
    ev.count = r.u64();
  }
  if (!r.done()) throw GraphFormatError(Kind::malformed, "trailing bytes in graph payload");
  return EventGraph(std::move(nodes), std::move(edges), std::move(events), thresholds);
}

void save_graph(const EventGraph& graph, const std::filesystem::path& path) {
  atomic_write(path, [&](std::ostream& out) { write_graph(graph, out); }, true);
}

EventGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw GraphFormatError(GraphFormatError::Kind::io, "cannot open '" + path.string() + "'");
  }
  return read_graph(in);
}

void export_graph_tsv(const EventGraph& graph, const std::filesystem::path& prefix) {
  auto with_suffix = [&](const char* suffix) {
    auto p = prefix;
    p += suffix;
    return p;
  };
  atomic_write(with_suffix(".nodes.tsv"), [&](std::ostream& out) {
    out << "# min_node_freq=" << graph.thresholds().min_node_freq
        << " min_event_freq=" << graph.thresholds().min_event_freq << '\n';
    out << "lemma\tfreq\n";
    for (const auto& [lemma, n] : graph.nodes()) out << lemma << '\t' << n << '\n';
  });
  atomic_write(with_suffix(".edges.tsv"), [&](std::ostream& out) {
    out << "head\trelation\tdependent\tcount\tpmi\tlmi\n";
    for (const auto& e : graph.edges()) {
      out << e.head << '\t' << e.relation << '\t' << e.dependent << '\t' << e.count << '\t'
          << format_double(e.pmi) << '\t' << format_double(e.lmi) << '\n';
    }
  });
  atomic_write(with_suffix(".events.tsv"), [&](std::ostream& out) {
    out << "verb\troles\tcount\n";
    for (const auto& ev : graph.events()) {
      out << ev.verb << '\t';
      for (std::size_t i = 0; i < ev.roles.size(); ++i) {
        out << (i ? "," : "") << ev.roles[i].first << '=' << ev.roles[i].second;
      }
      out << '\t' << ev.count << '\n';
    }
  });
}

void write_frequencies(std::ostream& out, const RelationCounts::NodeMap& freq) {
  std::map<std::string, std::uint64_t> sorted(freq.begin(), freq.end());
  for (const auto& [lemma, n] : sorted) out << lemma << '\t' << n << '\n';
}

std::unordered_map<std::string, std::uint64_t> load_frequencies(const std::filesystem::path& path) {
  LineReader reader(path);
  std::unordered_map<std::string, std::uint64_t> freq;
  std::string line;
  while (reader.getline(line)) {
    if (trim(line).empty() || line.front() == '#') continue;
    auto cells = split(line, '\t');
    std::optional<std::uint64_t> n;
    if (cells.size() == 2) n = parse_uint(trim(cells[1]));
    if (!n) {
      throw Error("corpus-graph", path.string() + " line " + std::to_string(reader.line_number()) +
                                      ": expected 'lemma<TAB>count'");
    }
    freq[std::string(trim(cells[0]))] += *n;
  }
  return freq;
}

}  // namespace gek
