#include "idtkit/corpus.hpp"

#include <algorithm>
#include <deque>
#include <iterator>
#include <numeric>
#include <unordered_map>

#include "json.hpp"

namespace idtkit {

namespace {

using Edge = std::pair<PaperIndex, PaperIndex>;  // (citing, cited)

// Marks edges that lie inside a strongly connected component of size > 1.
// Iterative Tarjan over the given edge list (sorted by citing).
std::vector<bool> edges_on_cycles(std::size_t node_count, const std::vector<Edge>& edges) {
  std::vector<std::uint64_t> offsets(node_count + 1, 0);
  for (const auto& [u, v] : edges) ++offsets[u + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  // edges are sorted by citing, so edge i is the (i - offsets[u])-th out-edge

  constexpr std::uint32_t kUnvisited = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> index(node_count, kUnvisited);
  std::vector<std::uint32_t> low(node_count, 0);
  std::vector<std::uint32_t> component(node_count, kUnvisited);
  std::vector<bool> on_stack(node_count, false);
  std::vector<PaperIndex> stack;
  std::vector<std::pair<PaperIndex, std::uint64_t>> frames;  // node, next edge
  std::uint32_t counter = 0;
  std::uint32_t component_count = 0;
  std::vector<std::uint32_t> component_size;

  for (PaperIndex start = 0; start < node_count; ++start) {
    if (index[start] != kUnvisited || offsets[start] == offsets[start + 1]) continue;
    frames.emplace_back(start, offsets[start]);
    index[start] = low[start] = counter++;
    stack.push_back(start);
    on_stack[start] = true;
    while (!frames.empty()) {
      auto& [u, next] = frames.back();
      if (next < offsets[u + 1]) {
        const PaperIndex w = edges[next++].second;
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, offsets[w]);
        } else if (on_stack[w]) {
          low[u] = std::min(low[u], index[w]);
        }
        continue;
      }
      const PaperIndex done = u;
      frames.pop_back();
      if (!frames.empty()) {
        const PaperIndex up = frames.back().first;
        low[up] = std::min(low[up], low[done]);
      }
      if (low[done] == index[done]) {
        std::uint32_t size = 0;
        PaperIndex w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component[w] = component_count;
          ++size;
        } while (w != done);
        component_size.push_back(size);
        ++component_count;
      }
    }
  }

  std::vector<bool> on_cycle(edges.size(), false);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto [u, v] = edges[i];
    const auto cu = component[u];
    on_cycle[i] = cu != kUnvisited && cu == component[v] && component_size[cu] > 1;
  }
  return on_cycle;
}

}  // namespace

std::string IngestReport::to_json() const {
  nlohmann::ordered_json j;
  j["papers_in"] = papers_in;
  j["papers_kept"] = papers_kept;
  j["edges_in"] = edges_in;
  j["edges_kept"] = edges_kept;
  j["dropped_self"] = dropped_self;
  j["dropped_dup"] = dropped_dup;
  j["dropped_forward"] = dropped_forward;
  j["dropped_cycle"] = dropped_cycle;
  j["dropped_isolated"] = dropped_isolated;
  j["dropped_unknown"] = dropped_unknown;
  j["dropped_with_papers"] = dropped_with_papers;
  j["duplicate_papers"] = duplicate_papers;
  j["malformed_edges"] = malformed_edges;
  j["malformed_papers"] = malformed_papers;
  return j.dump(2);
}

CitationCorpus ingest(std::span<const CitationEdge> raw_edges,
                      std::span<const PaperRecord> raw_papers, const IngestOptions& options,
                      IngestReport* report) {
  IngestReport local;
  IngestReport& r = report ? *report : local;

  // Papers: first record per id wins.
  std::vector<PaperRecord> papers;
  papers.reserve(raw_papers.size());
  for (const auto& p : raw_papers) {
    if (p.id.empty()) {
      ++r.malformed_papers;
      continue;
    }
    ++r.papers_in;
    papers.push_back(p);
  }
  std::stable_sort(papers.begin(), papers.end(),
                   [](const PaperRecord& a, const PaperRecord& b) { return a.id < b.id; });
  {
    const auto last = std::unique(papers.begin(), papers.end(),
                                  [](const PaperRecord& a, const PaperRecord& b) { return a.id == b.id; });
    r.duplicate_papers += static_cast<std::uint64_t>(papers.end() - last);
    r.papers_in -= static_cast<std::uint64_t>(papers.end() - last);
    papers.erase(last, papers.end());
  }

  std::unordered_map<std::string_view, PaperIndex> lookup;
  lookup.reserve(papers.size());
  for (PaperIndex i = 0; i < papers.size(); ++i) lookup.emplace(papers[i].id, i);

  std::vector<Edge> edges;
  edges.reserve(raw_edges.size());
  r.edges_in += raw_edges.size();
  for (const auto& e : raw_edges) {
    const auto citing = lookup.find(e.citing);
    const auto cited = lookup.find(e.cited);
    if (citing == lookup.end() || cited == lookup.end()) {
      ++r.dropped_unknown;
      continue;
    }
    if (citing->second == cited->second) {
      ++r.dropped_self;
      continue;
    }
    edges.emplace_back(citing->second, cited->second);
  }

  std::sort(edges.begin(), edges.end());
  {
    const auto last = std::unique(edges.begin(), edges.end());
    r.dropped_dup += static_cast<std::uint64_t>(edges.end() - last);
    edges.erase(last, edges.end());
  }

  std::erase_if(edges, [&](const Edge& e) {
    if (papers[e.first].year < papers[e.second].year) {
      ++r.dropped_forward;
      return true;
    }
    return false;
  });

  // Only same-year edges can close a cycle now.
  {
    std::vector<Edge> same_year;
    for (const auto& e : edges)
      if (papers[e.first].year == papers[e.second].year) same_year.push_back(e);
    if (!same_year.empty()) {
      const auto on_cycle = edges_on_cycles(papers.size(), same_year);
      std::vector<Edge> cyclic;
      for (std::size_t i = 0; i < same_year.size(); ++i)
        if (on_cycle[i]) cyclic.push_back(same_year[i]);
      if (!cyclic.empty()) {
        r.dropped_cycle += cyclic.size();
        std::vector<Edge> kept;
        kept.reserve(edges.size() - cyclic.size());
        std::set_difference(edges.begin(), edges.end(), cyclic.begin(), cyclic.end(),
                            std::back_inserter(kept));
        edges = std::move(kept);
      }
    }
  }

  // Isolation filter to a fixed point.
  const std::size_t n = papers.size();
  std::vector<std::uint64_t> in_degree(n, 0), out_degree(n, 0);
  for (const auto& [u, v] : edges) {
    ++out_degree[u];
    ++in_degree[v];
  }
  const bool either = options.isolation == IsolationRule::kNoCitationsOrNoReferences;
  auto isolated = [&](PaperIndex p) {
    return either ? (in_degree[p] == 0 || out_degree[p] == 0)
                  : (in_degree[p] == 0 && out_degree[p] == 0);
  };
  std::vector<bool> removed(n, false);
  std::deque<PaperIndex> queue;
  for (PaperIndex p = 0; p < n; ++p)
    if (isolated(p)) {
      removed[p] = true;
      queue.push_back(p);
    }
  if (either && !queue.empty()) {
    // Removing a paper strands its edges; neighbors may become isolated.
    std::vector<std::vector<PaperIndex>> out(n), in(n);
    for (const auto& [u, v] : edges) {
      out[u].push_back(v);
      in[v].push_back(u);
    }
    while (!queue.empty()) {
      const PaperIndex p = queue.front();
      queue.pop_front();
      for (PaperIndex v : out[p]) {
        if (removed[v]) continue;
        --in_degree[v];
        if (isolated(v)) {
          removed[v] = true;
          queue.push_back(v);
        }
      }
      for (PaperIndex u : in[p]) {
        if (removed[u]) continue;
        --out_degree[u];
        if (isolated(u)) {
          removed[u] = true;
          queue.push_back(u);
        }
      }
    }
    const auto before = edges.size();
    std::erase_if(edges, [&](const Edge& e) { return removed[e.first] || removed[e.second]; });
    r.dropped_with_papers += before - edges.size();
  }

  std::vector<PaperIndex> remap(n, 0);
  std::vector<PaperRecord> kept;
  kept.reserve(n);
  for (PaperIndex p = 0; p < n; ++p) {
    if (removed[p]) {
      ++r.dropped_isolated;
      continue;
    }
    remap[p] = static_cast<PaperIndex>(kept.size());
    kept.push_back(std::move(papers[p]));
  }
  for (auto& [u, v] : edges) {
    u = remap[u];
    v = remap[v];
  }
  r.papers_kept = kept.size();
  r.edges_kept = edges.size();
  return CitationCorpus::assemble(std::move(kept), std::move(edges));
}

CitationCorpus CitationCorpus::assemble(std::vector<PaperRecord> papers,
                                        std::vector<std::pair<PaperIndex, PaperIndex>> edges) {
  CitationCorpus c;
  const std::size_t n = papers.size();
  c.papers_ = std::move(papers);
  c.years_.resize(n);
  for (std::size_t i = 0; i < n; ++i) c.years_[i] = c.papers_[i].year;
  if (n > 0) {
    const auto [lo, hi] = std::minmax_element(c.years_.begin(), c.years_.end());
    c.min_year_ = *lo;
    c.max_year_ = *hi;
  }

  std::sort(edges.begin(), edges.end());
  c.reference_offsets_.assign(n + 1, 0);
  c.citer_offsets_.assign(n + 1, 0);
  for (const auto& [u, v] : edges) {
    ++c.reference_offsets_[u + 1];
    ++c.citer_offsets_[v + 1];
  }
  std::partial_sum(c.reference_offsets_.begin(), c.reference_offsets_.end(),
                   c.reference_offsets_.begin());
  std::partial_sum(c.citer_offsets_.begin(), c.citer_offsets_.end(), c.citer_offsets_.begin());

  c.reference_list_.resize(edges.size());
  c.citer_list_.resize(edges.size());
  std::vector<std::uint64_t> fill(c.citer_offsets_.begin(), c.citer_offsets_.end() - 1);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto [u, v] = edges[i];
    c.reference_list_[i] = v;  // edges sorted by citing, so slots line up
    c.citer_list_[fill[v]++] = u;
  }
  for (std::size_t p = 0; p < n; ++p) {
    auto* first = c.citer_list_.data() + c.citer_offsets_[p];
    auto* last = c.citer_list_.data() + c.citer_offsets_[p + 1];
    std::sort(first, last, [&](PaperIndex a, PaperIndex b) {
      return std::pair(c.years_[a], a) < std::pair(c.years_[b], b);
    });
  }
  return c;
}

std::optional<PaperIndex> CitationCorpus::find(std::string_view id) const {
  const auto it = std::lower_bound(papers_.begin(), papers_.end(), id,
                                   [](const PaperRecord& p, std::string_view key) { return p.id < key; });
  if (it == papers_.end() || it->id != id) return std::nullopt;
  return static_cast<PaperIndex>(it - papers_.begin());
}

PaperIndex CitationCorpus::index_of(std::string_view id) const {
  if (auto p = find(id)) return *p;
  throw UnknownPaperError(id);
}

bool CitationCorpus::cites(PaperIndex citing, PaperIndex cited) const noexcept {
  if (citing >= papers_.size()) return false;
  const auto refs = references(citing);
  return std::binary_search(refs.begin(), refs.end(), cited);
}

std::vector<std::pair<PaperIndex, PaperIndex>> CitationCorpus::edges() const {
  std::vector<std::pair<PaperIndex, PaperIndex>> out;
  out.reserve(edge_count());
  for (PaperIndex p = 0; p < papers_.size(); ++p)
    for (PaperIndex q : references(p)) out.emplace_back(p, q);
  return out;
}

std::span<const PaperIndex> CorpusView::citations_of(PaperIndex p) const {
  if (!contains(p)) {
    throw UnknownPaperError(p < corpus_->paper_count() ? corpus_->id(p)
                                                        : "#" + std::to_string(p));
  }
  const auto all = corpus_->citers(p);
  if (cutoff_ == kNoCutoff) return all;
  const auto end = std::partition_point(all.begin(), all.end(), [&](PaperIndex q) {
    return corpus_->year(q) <= cutoff_;
  });
  return all.first(static_cast<std::size_t>(end - all.begin()));
}

std::span<const PaperIndex> CorpusView::citations_of(std::string_view id) const {
  const auto p = corpus_->find(id);
  if (!p) throw UnknownPaperError(id);
  return citations_of(*p);
}

std::size_t CorpusView::paper_count() const {
  std::size_t count = 0;
  for (PaperIndex p = 0; p < corpus_->paper_count(); ++p) count += contains(p);
  return count;
}

std::size_t CorpusView::edge_count() const {
  std::size_t count = 0;
  for (PaperIndex p = 0; p < corpus_->paper_count(); ++p)
    if (contains(p)) count += corpus_->references(p).size();
  return count;
}

std::vector<PaperIndex> CorpusView::papers() const {
  std::vector<PaperIndex> out;
  for (PaperIndex p = 0; p < corpus_->paper_count(); ++p)
    if (contains(p)) out.push_back(p);
  return out;
}

bool is_acyclic(const CitationCorpus& corpus) {
  const std::size_t n = corpus.paper_count();
  std::vector<std::size_t> pending(n);
  std::vector<PaperIndex> ready;
  for (PaperIndex p = 0; p < n; ++p) {
    pending[p] = corpus.references(p).size();
    if (pending[p] == 0) ready.push_back(p);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    const PaperIndex p = ready.back();
    ready.pop_back();
    ++visited;
    for (PaperIndex q : corpus.citers(p))
      if (--pending[q] == 0) ready.push_back(q);
  }
  return visited == n;
}

}  // namespace idtkit
