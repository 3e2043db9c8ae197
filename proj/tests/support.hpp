#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "idtkit/corpus.hpp"
#include "idtkit/idt.hpp"

namespace idtkit::testing {

// P (2000) with five citers; p3 cites p1, p4 cites p1 and p2, p5 cites p2 and p3.
inline CitationCorpus five_citer_corpus() {
  std::vector<PaperRecord> papers{{"P", 2000, "V"},  {"p1", 2001, "V"}, {"p2", 2001, "V"},
                                  {"p3", 2002, "V"}, {"p4", 2002, "V"}, {"p5", 2003, "V"}};
  std::vector<CitationEdge> edges{{"p1", "P"}, {"p2", "P"}, {"p3", "P"},  {"p4", "P"},
                                  {"p5", "P"}, {"p3", "p1"}, {"p4", "p1"}, {"p4", "p2"},
                                  {"p5", "p2"}, {"p5", "p3"}};
  return ingest(edges, papers);
}

// Longest path from the root in the DAG of influence edges, computed by
// relaxation until fixed point (no topological order assumed).
inline std::vector<int> longest_root_paths(const InfluenceDispersionGraph& g) {
  std::vector<int> dist(g.size(), 0);
  for (std::size_t v = 1; v < g.size(); ++v) dist[v] = 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t v = 1; v < g.size(); ++v)
      for (auto u : g.cited[v])
        if (dist[u] + 1 > dist[v]) {
          dist[v] = dist[u] + 1;
          changed = true;
        }
  }
  return dist;
}

// Sum of leaf depths straight from a parent vector.
inline std::int64_t naive_idi(const std::vector<std::int32_t>& parent) {
  std::vector<bool> has_child(parent.size(), false);
  for (std::size_t v = 1; v < parent.size(); ++v) has_child[static_cast<std::size_t>(parent[v])] = true;
  std::int64_t total = 0;
  for (std::size_t v = 1; v < parent.size(); ++v) {
    if (has_child[v]) continue;
    std::int64_t d = 0;
    for (std::int32_t x = static_cast<std::int32_t>(v); x != 0; x = parent[static_cast<std::size_t>(x)]) ++d;
    total += d;
  }
  return total;
}

// Kendall distance by checking every pair.
inline double brute_kendall(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < b.size(); ++i) pos[b[i]] = i;
  const std::size_t m = a.size();
  if (m < 2) return 0.0;
  std::uint64_t discordant = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (pos[a[i]] > pos[a[j]]) ++discordant;
  return static_cast<double>(discordant) / (static_cast<double>(m) * (m - 1) / 2.0);
}

}  // namespace idtkit::testing
