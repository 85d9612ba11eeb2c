#include "gek/sdm.hpp"

#include <ostream>

namespace gek {

void write_traces(std::ostream& out, std::span<const PairTrace> traces) {
  out << "pair_id\tcue_role\tcue\tfallback\tassociates\n";
  for (const auto& t : traces) {
    if (t.cues.empty()) {
      out << t.pair_id << "\t-\t-\t" << (t.used_fallback ? "yes" : "no") << "\t\n";
      continue;
    }
    for (const auto& c : t.cues) {
      out << t.pair_id << '\t' << to_string(c.role) << '\t' << c.cue << '\t'
          << (c.fallback ? "yes" : "no") << '\t';
      for (std::size_t i = 0; i < c.associates.size(); ++i) {
        if (i) out << ',';
        out << c.associates[i];
      }
      out << '\n';
    }
  }
}

}  // namespace gek
