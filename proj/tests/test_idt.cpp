#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "idtkit/idt.hpp"
#include "idtkit/metrics.hpp"
#include "idtkit/synth.hpp"
#include "support.hpp"

using namespace idtkit;

namespace {

std::map<std::string, std::string> parent_ids(const CitationCorpus& c, const InfluenceDispersionTree& t) {
  std::map<std::string, std::string> out;
  for (std::size_t v = 1; v < t.size(); ++v)
    out[c.id(t.keys[v])] = c.id(t.keys[static_cast<std::size_t>(t.parent[v])]);
  return out;
}

InfluenceDispersionTree tree_of(const CitationCorpus& c, const std::string& id, const TiePolicy& ties) {
  return build_idt(build_idg(CorpusView(c), c.index_of(id)), ties);
}

}  // namespace

TEST_CASE("five-citer example under each tie policy") {
  const auto c = testing::five_citer_corpus();

  const auto lo = tree_of(c, "P", TiePolicy::min_id());
  CHECK(parent_ids(c, lo) == std::map<std::string, std::string>{
                                 {"p1", "P"}, {"p2", "P"}, {"p3", "p1"}, {"p4", "p1"}, {"p5", "p3"}});
  auto s = tree_stats(lo);
  CHECK(s.depth == 3);
  CHECK(s.breadth == 2);
  CHECK(idi(lo) == 6);

  const auto hi = tree_of(c, "P", TiePolicy::max_id());
  CHECK(parent_ids(c, hi) == std::map<std::string, std::string>{
                                 {"p1", "P"}, {"p2", "P"}, {"p3", "p1"}, {"p4", "p2"}, {"p5", "p3"}});
  s = tree_stats(hi);
  CHECK(s.depth == 3);
  CHECK(s.breadth == 2);
  CHECK(idi(hi) == 5);
  CHECK(nid(hi) == 0.0);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = tree_of(c, "P", TiePolicy::random(seed));
    CHECK(tree_stats(r).depth == 3);
    CHECK(r == tree_of(c, "P", TiePolicy::random(seed)));
  }
}

TEST_CASE("IDG is the induced subgraph of the paper and its citers") {
  const auto c = gen_random_corpus({.n_papers = 600, .seed = 21});
  const CorpusView view(c, 2005);
  const auto edges = c.edges();
  for (PaperIndex p : view.papers()) {
    const auto g = build_idg(view, p);
    g.validate();
    std::set<PaperIndex> members{p};
    for (const auto& [u, w] : edges)
      if (w == p && c.year(u) <= 2005) members.insert(u);
    CHECK(std::set<PaperIndex>(g.keys.begin(), g.keys.end()) == members);
    std::set<std::pair<PaperIndex, PaperIndex>> expected, got;
    for (const auto& [u, w] : edges)
      if (u != p && w != p && members.count(u) && members.count(w)) expected.emplace(w, u);
    for (NodeId v = 1; v < g.size(); ++v)
      for (NodeId u : g.cited[v]) got.emplace(g.keys[u], g.keys[v]);
    CHECK(got == expected);
  }
}

TEST_CASE("tree parents are legal and depths equal longest influence paths") {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const std::size_t n = 1 + seed % 60;
    const auto g = gen_random_idg(n, seed);
    const auto t = build_idt(g, TiePolicy::random(seed));
    const auto longest = testing::longest_root_paths(g);
    REQUIRE(t.size() == g.size());
    CHECK(t.parent[0] == kNoParent);
    for (NodeId v = 1; v < g.size(); ++v) {
      const auto p = static_cast<NodeId>(t.parent[v]);
      const bool legal = p == kRootNode || std::find(g.cited[v].begin(), g.cited[v].end(), p) != g.cited[v].end();
      CHECK(legal);
      CHECK(t.depth[v] == t.depth[p] + 1);
      CHECK(t.depth[v] == longest[v]);
      if (!g.cited[v].empty()) {
        int deepest = 0;
        for (NodeId u : g.cited[v]) deepest = std::max(deepest, t.depth[u]);
        CHECK(t.depth[p] == deepest);
      }
    }
  }
}

TEST_CASE("edge order of the input does not change the tree") {
  const auto raw = gen_random_records({.n_papers = 400, .seed = 8});
  const auto c = ingest(raw.edges, raw.papers);
  auto shuffled_edges = raw.edges;
  auto shuffled_papers = raw.papers;
  std::mt19937_64 rng(3);
  std::shuffle(shuffled_edges.begin(), shuffled_edges.end(), rng);
  std::shuffle(shuffled_papers.begin(), shuffled_papers.end(), rng);
  const auto c2 = ingest(shuffled_edges, shuffled_papers);
  REQUIRE(c == c2);
  for (PaperIndex p = 0; p < c.paper_count(); ++p)
    for (const auto& ties : {TiePolicy::min_id(), TiePolicy::max_id(), TiePolicy::random(4)})
      CHECK(build_idt(build_idg(CorpusView(c), p), ties) == build_idt(build_idg(CorpusView(c2), p), ties));
}

TEST_CASE("placement follows citations and year order") {
  const auto g = gen_random_idg(80, 17);
  const auto order = placement_order(g);
  std::vector<std::size_t> pos(g.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  for (NodeId v = 1; v < g.size(); ++v)
    for (NodeId u : g.cited[v]) CHECK(pos[u] < pos[v]);
}

TEST_CASE("cyclic or malformed IDGs are rejected") {
  InfluenceDispersionGraph g;
  g.keys = {0, 1, 2};
  g.years = {2000, 2001, 2001};
  g.cited = {{}, {2}, {1}};
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  CHECK_THROWS_AS(build_idt(g), std::invalid_argument);
  g.cited = {{}, {1}, {}};
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g.cited = {{}, {0}, {}};
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}

TEST_CASE("uncited paper yields a bare root") {
  const auto c = testing::five_citer_corpus();
  const auto t = tree_of(c, "p5", {});
  CHECK(t.size() == 1);
  CHECK(idi(t) == 0);
  CHECK(tree_stats(t).depth == 0);
}

TEST_CASE("star statistics") {
  const auto t = InfluenceDispersionTree::from_parents({-1, 0, 0, 0, 0, 0, 0, 0});
  const auto s = tree_stats(t);
  CHECK(s.n == 7);
  CHECK(s.depth == 1);
  CHECK(s.breadth == 7);
  CHECK(s.leaves.size() == 7);
  CHECK(s.unified_branch_count() == 7);
  CHECK(idi(t) == 7);
}

TEST_CASE("broom has its single fragment point at the end of the handle") {
  // handle 1-2-3, bristles 4,5,6 under node 3
  const auto t = InfluenceDispersionTree::from_parents({-1, 0, 1, 2, 3, 3, 3});
  const auto s = tree_stats(t);
  CHECK(s.depth == 4);
  CHECK(s.breadth == 3);
  CHECK(s.level_sizes == std::vector<std::size_t>{1, 1, 1, 3});
  REQUIRE(s.branches.size() == 3);
  for (const auto& b : s.branches) {
    CHECK(b.length == 4);
    CHECK(b.fragment_points == std::vector<NodeId>{3});
  }
  CHECK(s.unified_branch_count() == 0);
  CHECK(idi(t) == 12);
}

TEST_CASE("from_parents rejects non-trees") {
  CHECK_THROWS_AS(InfluenceDispersionTree::from_parents({0}), std::invalid_argument);
  CHECK_THROWS_AS(InfluenceDispersionTree::from_parents({-1, 2, 1}), std::invalid_argument);
  CHECK_THROWS_AS(InfluenceDispersionTree::from_parents({-1, 5}), std::invalid_argument);
  CHECK_NOTHROW(InfluenceDispersionTree::from_parents({-1}));
}

TEST_CASE("tree json lists every node") {
  const auto c = testing::five_citer_corpus();
  const auto json = idt_to_json(tree_of(c, "P", TiePolicy::max_id()), &c);
  CHECK(json.find("\"root\":\"P\"") != std::string::npos);
  CHECK(json.find("\"id\":\"p4\",\"parent\":\"p2\"") != std::string::npos);
}
