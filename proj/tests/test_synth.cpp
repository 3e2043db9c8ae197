#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "doctest.h"
#include "idtkit/metrics.hpp"
#include "idtkit/synth.hpp"
#include "support.hpp"

using namespace idtkit;

namespace {

// Rooted unlabeled tree counts from the Euler transform recurrence
// a(m+1) = (1/m) sum_{k=1..m} (sum_{d|k} d a(d)) a(m-k+1), a(1) = 1.
std::vector<std::uint64_t> rooted_tree_counts(int up_to) {
  std::vector<std::uint64_t> a(static_cast<std::size_t>(up_to) + 1, 0);
  a[1] = 1;
  for (int m = 1; m < up_to; ++m) {
    std::uint64_t sum = 0;
    for (int k = 1; k <= m; ++k) {
      std::uint64_t s = 0;
      for (int d = 1; d <= k; ++d)
        if (k % d == 0) s += static_cast<std::uint64_t>(d) * a[static_cast<std::size_t>(d)];
      sum += s * a[static_cast<std::size_t>(m - k + 1)];
    }
    a[static_cast<std::size_t>(m + 1)] = sum / static_cast<std::uint64_t>(m);
  }
  return a;
}

// AHU canonical string of the subtree at v.
std::string canonical(const InfluenceDispersionTree& t) {
  std::vector<std::vector<std::size_t>> kids(t.size());
  for (std::size_t v = 1; v < t.size(); ++v) kids[static_cast<std::size_t>(t.parent[v])].push_back(v);
  std::function<std::string(std::size_t)> go = [&](std::size_t v) {
    std::vector<std::string> parts;
    for (auto c : kids[v]) parts.push_back(go(c));
    std::sort(parts.begin(), parts.end());
    std::string s = "(";
    for (const auto& p : parts) s += p;
    return s + ")";
  };
  return go(0);
}

}  // namespace

TEST_CASE("enumeration produces every rooted tree exactly once") {
  const auto counts = rooted_tree_counts(10);
  CHECK(counts[10] == 719);
  for (int n = 0; n <= 9; ++n) {
    const auto trees = enumerate_trees(n);
    CHECK(trees.size() == counts[static_cast<std::size_t>(n + 1)]);
    std::set<std::string> seen;
    for (const auto& t : trees) {
      CHECK(t.citation_count() == static_cast<std::size_t>(n));
      seen.insert(canonical(t));
    }
    CHECK(seen.size() == trees.size());
  }
  CHECK_THROWS_AS(TreeEnumerator(10), std::invalid_argument);
  CHECK(enumerate_trees(10, 10).size() == rooted_tree_counts(11)[11]);
}

TEST_CASE("shape generators") {
  auto stats = [](ShapeSpec s) { return tree_stats(shape_tree(s)); };
  auto s = stats({ShapeKind::kStar, 12});
  CHECK(s.depth == 1);
  CHECK(s.breadth == 12);
  s = stats({ShapeKind::kChain, 12});
  CHECK(s.depth == 12);
  CHECK(s.breadth == 1);
  s = stats({ShapeKind::kBroom, 12, 4});
  CHECK(s.depth == 5);
  CHECK(s.breadth == 8);
  s = stats({ShapeKind::kOptimal, 12, 4, 3});
  CHECK(s.depth == 4);
  CHECK(s.breadth == 3);
  CHECK(s.unified_branch_count() == 3);
  s = stats({ShapeKind::kBalanced, 10});
  CHECK(s.depth == 3);
  CHECK(s.breadth == 4);
  CHECK(s.unified_branch_count() == 4);
  CHECK_THROWS_AS(shape_tree({ShapeKind::kOptimal, 12, 5, 3}), std::invalid_argument);
  CHECK_THROWS_AS(shape_tree({ShapeKind::kBroom, 5, 9}), std::invalid_argument);
}

TEST_CASE("shape corpora rebuild their own tree") {
  for (auto kind : {ShapeKind::kStar, ShapeKind::kChain, ShapeKind::kBroom, ShapeKind::kBalanced,
                    ShapeKind::kRandomAttachment}) {
    for (std::int64_t n : {1, 2, 7, 30, 100}) {
      ShapeSpec spec{kind, n, kind == ShapeKind::kBroom ? std::max<std::int64_t>(1, n / 2) : 0, 0, 42};
      const auto inst = gen_shape(spec);
      const auto c = ingest(inst.edges, inst.papers);
      const auto rebuilt = build_idt(build_idg(CorpusView(c), c.index_of(inst.root_id)));
      CHECK(canonical(rebuilt) == canonical(inst.tree));
      CHECK(idi(rebuilt) == idi(inst.tree));
    }
  }
}

TEST_CASE("random corpus is reproducible and respects time") {
  RandomCorpusParams p;
  p.n_papers = 2000;
  p.seed = 17;
  const auto a = gen_random_records(p);
  const auto b = gen_random_records(p);
  CHECK(a.edges == b.edges);
  CHECK(a.papers == b.papers);
  p.seed = 18;
  CHECK(gen_random_records(p).edges != a.edges);
  const auto c = ingest(a.edges, a.papers);
  for (const auto& [u, v] : c.edges()) CHECK(c.year(u) > c.year(v));
}

TEST_CASE("in-degree is Poisson-like within a year cohort without attachment bias") {
  // Chi-square index sum((k - mean_y)^2 / mean_y) / (N - Y) over papers grouped
  // by publication year; close to 1 for uniform targeting.
  auto dispersion = [](double bias) {
    RandomCorpusParams p;
    p.n_papers = 10000;
    p.attachment_bias = bias;
    p.closure = 0.0;
    p.seed = 3;
    const auto c = gen_random_corpus(p);
    std::map<int, std::pair<double, double>> by_year;  // count, sum
    for (PaperIndex v = 0; v < c.paper_count(); ++v) {
      auto& [count, sum] = by_year[c.year(v)];
      count += 1;
      sum += static_cast<double>(c.citers(v).size());
    }
    double chi = 0;
    std::size_t cells = 0;
    for (PaperIndex v = 0; v < c.paper_count(); ++v) {
      const auto& [count, sum] = by_year[c.year(v)];
      const double mean = sum / count;
      if (mean < 1.0) continue;  // the newest cohorts barely get cited
      const double k = static_cast<double>(c.citers(v).size());
      chi += (k - mean) * (k - mean) / mean;
      ++cells;
    }
    return chi / static_cast<double>(cells - by_year.size());
  };
  const double uniform = dispersion(0.0);
  const double skewed = dispersion(1.0);
  MESSAGE("within-year dispersion: uniform ", uniform, ", biased ", skewed);
  CHECK(uniform < 1.3);
  CHECK(skewed > 3.0 * uniform);
}

TEST_CASE("random IDGs are valid") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto g = gen_random_idg(1 + seed, seed);
    CHECK(g.citation_count() == 1 + seed);
    CHECK_NOTHROW(g.validate());
  }
}
