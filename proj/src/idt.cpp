#include "idtkit/idt.hpp"

#include <algorithm>
#include <ostream>
#include <queue>
#include <random>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

namespace idtkit {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

nlohmann::json node_label(PaperIndex key, const CitationCorpus* corpus) {
  if (corpus) return corpus->id(key);
  return key;
}

}  // namespace

std::vector<std::pair<NodeId, NodeId>> InfluenceDispersionGraph::influence_edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (NodeId v = 1; v < size(); ++v) {
    out.emplace_back(kRootNode, v);
    for (NodeId u : cited[v]) out.emplace_back(u, v);
  }
  return out;
}

void InfluenceDispersionGraph::validate() const {
  if (keys.empty()) throw std::invalid_argument("IDG has no root");
  if (years.size() != keys.size() || cited.size() != keys.size())
    throw std::invalid_argument("IDG arrays differ in length");
  if (!cited[kRootNode].empty()) throw std::invalid_argument("IDG root cites in-graph papers");
  for (NodeId v = 1; v < size(); ++v) {
    auto sorted = cited[v];
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("IDG has a duplicate edge");
    for (NodeId u : sorted) {
      if (u == kRootNode) throw std::invalid_argument("root listed among other cited papers");
      if (u == v) throw std::invalid_argument("IDG has a self-loop");
      if (u >= size()) throw std::invalid_argument("IDG edge references a missing node");
    }
  }
  placement_order(*this);  // throws on a cycle
}

InfluenceDispersionGraph build_idg(const CorpusView& view, PaperIndex paper) {
  const auto citers = view.citations_of(paper);
  const auto& corpus = view.corpus();

  InfluenceDispersionGraph g;
  const std::size_t size = citers.size() + 1;
  g.keys.reserve(size);
  g.years.reserve(size);
  g.keys.push_back(paper);
  g.years.push_back(corpus.year(paper));
  for (PaperIndex q : citers) {
    g.keys.push_back(q);
    g.years.push_back(corpus.year(q));
  }
  g.cited.resize(size);

  // (corpus index, local id), sorted for lookup
  std::vector<std::pair<PaperIndex, NodeId>> local;
  local.reserve(citers.size());
  for (NodeId v = 1; v < size; ++v) local.emplace_back(g.keys[v], v);
  std::sort(local.begin(), local.end());

  for (NodeId v = 1; v < size; ++v) {
    for (PaperIndex q : corpus.references(g.keys[v])) {
      if (q == paper) continue;
      const auto it = std::lower_bound(local.begin(), local.end(), std::pair(q, NodeId{0}));
      if (it != local.end() && it->first == q) g.cited[v].push_back(it->second);
    }
    std::sort(g.cited[v].begin(), g.cited[v].end());
  }
  return g;
}

TiePolicy::Kind parse_tie_kind(const std::string& name) {
  if (name == "min-id") return TiePolicy::Kind::kMinId;
  if (name == "max-id") return TiePolicy::Kind::kMaxId;
  if (name == "random") return TiePolicy::Kind::kRandom;
  throw std::invalid_argument("unknown tie policy: " + name);
}

std::string to_string(TiePolicy::Kind kind) {
  switch (kind) {
    case TiePolicy::Kind::kMinId: return "min-id";
    case TiePolicy::Kind::kMaxId: return "max-id";
    case TiePolicy::Kind::kRandom: return "random";
  }
  return "?";
}

std::vector<NodeId> placement_order(const InfluenceDispersionGraph& idg) {
  const std::size_t size = idg.size();
  std::vector<std::size_t> pending(size, 0);
  std::vector<std::vector<NodeId>> dependents(size);
  for (NodeId v = 1; v < size; ++v) {
    pending[v] = idg.cited[v].size();
    for (NodeId u : idg.cited[v]) dependents[u].push_back(v);
  }
  using Entry = std::tuple<int, PaperIndex, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> ready;
  for (NodeId v = 1; v < size; ++v)
    if (pending[v] == 0) ready.emplace(idg.years[v], idg.keys[v], v);

  std::vector<NodeId> order;
  order.reserve(size > 0 ? size - 1 : 0);
  while (!ready.empty()) {
    const NodeId v = std::get<2>(ready.top());
    ready.pop();
    order.push_back(v);
    for (NodeId w : dependents[v])
      if (--pending[w] == 0) ready.emplace(idg.years[w], idg.keys[w], w);
  }
  if (size > 0 && order.size() != size - 1)
    throw std::invalid_argument("IDG contains a citation cycle");
  return order;
}

InfluenceDispersionTree build_idt(const InfluenceDispersionGraph& idg, const TiePolicy& ties) {
  InfluenceDispersionTree t;
  const std::size_t size = idg.size();
  if (size == 0) throw std::invalid_argument("IDG has no root");
  t.keys = idg.keys;
  t.parent.assign(size, kNoParent);
  t.depth.assign(size, 0);

  std::mt19937_64 rng(splitmix64(ties.seed ^ splitmix64(idg.keys[kRootNode])));
  std::vector<NodeId> best;
  for (const NodeId v : placement_order(idg)) {
    const auto& cited = idg.cited[v];
    if (cited.empty()) {
      t.parent[v] = kRootNode;
      t.depth[v] = 1;
      continue;
    }
    std::int32_t deepest = 0;
    best.clear();
    for (NodeId u : cited) {
      if (t.depth[u] > deepest) {
        deepest = t.depth[u];
        best.assign(1, u);
      } else if (t.depth[u] == deepest) {
        best.push_back(u);
      }
    }
    NodeId chosen = best.front();
    if (best.size() > 1) {
      auto by_key = [&](NodeId a, NodeId b) { return idg.keys[a] < idg.keys[b]; };
      switch (ties.kind) {
        case TiePolicy::Kind::kMinId:
          chosen = *std::min_element(best.begin(), best.end(), by_key);
          break;
        case TiePolicy::Kind::kMaxId:
          chosen = *std::max_element(best.begin(), best.end(), by_key);
          break;
        case TiePolicy::Kind::kRandom: {
          std::sort(best.begin(), best.end(), by_key);
          std::uniform_int_distribution<std::size_t> pick(0, best.size() - 1);
          chosen = best[pick(rng)];
          break;
        }
      }
    }
    t.parent[v] = static_cast<std::int32_t>(chosen);
    t.depth[v] = deepest + 1;
  }
  return t;
}

InfluenceDispersionTree InfluenceDispersionTree::from_parents(std::vector<std::int32_t> parent,
                                                              std::vector<PaperIndex> keys) {
  const std::size_t size = parent.size();
  if (size == 0 || parent[0] != kNoParent)
    throw std::invalid_argument("parent vector must start with the root");
  if (keys.empty()) {
    keys.resize(size);
    for (std::size_t i = 0; i < size; ++i) keys[i] = static_cast<PaperIndex>(i);
  } else if (keys.size() != size) {
    throw std::invalid_argument("keys and parents differ in length");
  }
  for (std::size_t v = 1; v < size; ++v)
    if (parent[v] < 0 || static_cast<std::size_t>(parent[v]) >= size || parent[v] == static_cast<std::int32_t>(v))
      throw std::invalid_argument("invalid parent for node " + std::to_string(v));

  std::vector<std::int32_t> depth(size, -1);
  depth[0] = 0;
  std::vector<std::size_t> path;
  for (std::size_t v = 1; v < size; ++v) {
    std::size_t u = v;
    path.clear();
    while (depth[u] < 0) {
      if (path.size() > size) throw std::invalid_argument("parent vector has a cycle");
      path.push_back(u);
      u = static_cast<std::size_t>(parent[u]);
    }
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      depth[*it] = depth[u] + 1;
      u = *it;
    }
  }
  InfluenceDispersionTree t;
  t.keys = std::move(keys);
  t.parent = std::move(parent);
  t.depth = std::move(depth);
  return t;
}

std::size_t TreeStats::unified_branch_count() const {
  return static_cast<std::size_t>(
      std::count_if(branches.begin(), branches.end(), [](const Branch& b) { return b.unified(); }));
}

TreeStats tree_stats(const InfluenceDispersionTree& tree) {
  TreeStats s;
  s.n = tree.citation_count();
  if (s.n == 0) return s;
  const std::size_t size = tree.size();
  std::vector<std::uint32_t> children(size, 0);
  for (std::size_t v = 1; v < size; ++v) {
    ++children[static_cast<std::size_t>(tree.parent[v])];
    s.depth = std::max(s.depth, tree.depth[v]);
  }
  s.level_sizes.assign(static_cast<std::size_t>(s.depth), 0);
  for (std::size_t v = 1; v < size; ++v) ++s.level_sizes[static_cast<std::size_t>(tree.depth[v] - 1)];
  s.breadth = static_cast<std::int32_t>(*std::max_element(s.level_sizes.begin(), s.level_sizes.end()));

  for (NodeId v = 1; v < size; ++v) {
    if (children[v] != 0) continue;
    s.leaves.push_back(v);
    Branch b;
    b.leaf = v;
    b.length = tree.depth[v];
    for (auto u = tree.parent[v]; u != static_cast<std::int32_t>(kRootNode); u = tree.parent[static_cast<std::size_t>(u)])
      if (children[static_cast<std::size_t>(u)] >= 2) b.fragment_points.push_back(static_cast<NodeId>(u));
    std::reverse(b.fragment_points.begin(), b.fragment_points.end());
    s.branches.push_back(std::move(b));
  }
  return s;
}

std::string idt_to_json(const InfluenceDispersionTree& tree, const CitationCorpus* corpus) {
  nlohmann::ordered_json j;
  j["root"] = node_label(tree.keys.at(kRootNode), corpus);
  auto nodes = nlohmann::ordered_json::array();
  for (std::size_t v = 1; v < tree.size(); ++v) {
    nlohmann::ordered_json node;
    node["id"] = node_label(tree.keys[v], corpus);
    node["parent"] = node_label(tree.keys[static_cast<std::size_t>(tree.parent[v])], corpus);
    node["depth"] = tree.depth[v];
    nodes.push_back(std::move(node));
  }
  j["nodes"] = std::move(nodes);
  return j.dump();
}

void write_idt_edges(std::ostream& out, const InfluenceDispersionTree& tree,
                     const CitationCorpus* corpus) {
  auto label = [&](std::size_t v) {
    return corpus ? corpus->id(tree.keys[v]) : std::to_string(tree.keys[v]);
  };
  for (std::size_t v = 1; v < tree.size(); ++v)
    out << label(static_cast<std::size_t>(tree.parent[v])) << '\t' << label(v) << '\n';
}

}  // namespace idtkit
