#include "idtkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace idtkit {

namespace {

std::string padded(std::uint64_t value, int width) {
  std::string digits = std::to_string(value);
  if (static_cast<int>(digits.size()) < width) digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
  return digits;
}

int digits_for(std::uint64_t count) { return static_cast<int>(std::to_string(std::max<std::uint64_t>(count, 1)).size()); }

std::int64_t ceil_sqrt(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r < n) ++r;
  while (r > 0 && (r - 1) * (r - 1) >= n) --r;
  return r;
}

// Adds the citers of a tree under an existing root paper. Citer v cites the
// root and, unless it hangs under the root, its tree parent. Years grow with
// depth, capped at root_year + span.
void append_tree(RawCorpus& out, const InfluenceDispersionTree& tree, const std::string& root_id,
                 int root_year, int span, const std::string& suffix = ".c") {
  const int width = digits_for(tree.size());
  auto name = [&](std::size_t v) { return v == 0 ? root_id : root_id + suffix + padded(v, width); };
  for (std::size_t v = 1; v < tree.size(); ++v) {
    const int year = root_year + std::min(span, std::max(1, tree.depth[v]));
    out.papers.push_back({name(v), year, ""});
    out.edges.push_back({name(v), root_id});
    if (tree.parent[v] != static_cast<std::int32_t>(kRootNode))
      out.edges.push_back({name(v), name(static_cast<std::size_t>(tree.parent[v]))});
  }
}

InfluenceDispersionTree broom(std::int64_t n, std::int64_t k) {
  std::vector<std::int32_t> parent(static_cast<std::size_t>(n) + 1, kNoParent);
  for (std::int64_t v = 1; v <= n; ++v)
    parent[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(v <= k ? v - 1 : k);
  return InfluenceDispersionTree::from_parents(std::move(parent));
}

InfluenceDispersionTree branches(const std::vector<std::int64_t>& lengths) {
  std::vector<std::int32_t> parent{kNoParent};
  for (auto length : lengths) {
    std::int32_t above = 0;
    for (std::int64_t i = 0; i < length; ++i) {
      parent.push_back(above);
      above = static_cast<std::int32_t>(parent.size() - 1);
    }
  }
  return InfluenceDispersionTree::from_parents(std::move(parent));
}

}  // namespace

ShapeKind parse_shape_kind(const std::string& name) {
  if (name == "star") return ShapeKind::kStar;
  if (name == "chain") return ShapeKind::kChain;
  if (name == "broom") return ShapeKind::kBroom;
  if (name == "optimal") return ShapeKind::kOptimal;
  if (name == "balanced") return ShapeKind::kBalanced;
  if (name == "random-attachment") return ShapeKind::kRandomAttachment;
  throw std::invalid_argument("unknown shape kind: " + name);
}

InfluenceDispersionTree shape_tree(const ShapeSpec& spec) {
  const std::int64_t n = spec.n;
  if (n < 0) throw std::invalid_argument("shape needs n >= 0");
  switch (spec.kind) {
    case ShapeKind::kStar:
      return branches(std::vector<std::int64_t>(static_cast<std::size_t>(n), 1));
    case ShapeKind::kChain:
      return broom(n, n);
    case ShapeKind::kBroom:
      if (spec.k < 1 || spec.k > n) throw std::invalid_argument("broom needs 1 <= k <= n");
      return broom(n, spec.k);
    case ShapeKind::kOptimal:
      if (spec.k < 1 || spec.r < 1 || spec.k * spec.r != n)
        throw std::invalid_argument("optimal shape needs k * r == n");
      return branches(std::vector<std::int64_t>(static_cast<std::size_t>(spec.r), spec.k));
    case ShapeKind::kBalanced: {
      if (n == 0) return broom(0, 0);
      const std::int64_t r = ceil_sqrt(n);
      std::vector<std::int64_t> lengths;
      for (std::int64_t j = 0; j < r; ++j) {
        const std::int64_t length = n / r + (j < n % r ? 1 : 0);
        if (length > 0) lengths.push_back(length);
      }
      return branches(lengths);
    }
    case ShapeKind::kRandomAttachment: {
      std::mt19937_64 rng(spec.seed);
      std::vector<std::int32_t> parent(static_cast<std::size_t>(n) + 1, kNoParent);
      for (std::int64_t v = 1; v <= n; ++v) {
        std::uniform_int_distribution<std::int64_t> pick(0, v - 1);
        parent[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(pick(rng));
      }
      return InfluenceDispersionTree::from_parents(std::move(parent));
    }
  }
  throw std::invalid_argument("unknown shape kind");
}

ShapeInstance gen_shape(const ShapeSpec& spec, const std::string& root_id, int root_year,
                        int span_years) {
  if (span_years < 1) throw std::invalid_argument("span_years must be >= 1");
  ShapeInstance s;
  s.tree = shape_tree(spec);
  s.root_id = root_id;
  RawCorpus raw;
  raw.papers.push_back({root_id, root_year, ""});
  append_tree(raw, s.tree, root_id, root_year, span_years);
  s.papers = std::move(raw.papers);
  s.edges = std::move(raw.edges);
  return s;
}

TreeEnumerator::TreeEnumerator(int n, int cap) {
  if (n < 0) throw std::invalid_argument("tree enumeration needs n >= 0");
  if (n > cap)
    throw std::invalid_argument("tree enumeration capped at n = " + std::to_string(cap));
  levels_.resize(static_cast<std::size_t>(n) + 1);
  for (std::size_t i = 0; i < levels_.size(); ++i) levels_[i] = static_cast<int>(i);
}

std::optional<InfluenceDispersionTree> TreeEnumerator::next() {
  if (done_) return std::nullopt;

  const std::size_t size = levels_.size();
  std::vector<std::int32_t> parent(size, kNoParent);
  std::vector<std::int32_t> last_at_level(size, 0);
  for (std::size_t i = 1; i < size; ++i) {
    parent[i] = last_at_level[static_cast<std::size_t>(levels_[i] - 1)];
    last_at_level[static_cast<std::size_t>(levels_[i])] = static_cast<std::int32_t>(i);
  }
  auto tree = InfluenceDispersionTree::from_parents(std::move(parent));

  // Successor of the canonical level sequence: take the last node deeper than
  // level 1, find its parent position, and repeat that subtree pattern to the end.
  std::size_t p = size;
  for (std::size_t i = size; i-- > 1;)
    if (levels_[i] > 1) {
      p = i;
      break;
    }
  if (p == size) {
    done_ = true;
  } else {
    std::size_t q = p;
    while (levels_[--q] != levels_[p] - 1) {
    }
    for (std::size_t i = p; i < size; ++i) levels_[i] = levels_[i - (p - q)];
  }
  return tree;
}

std::vector<InfluenceDispersionTree> enumerate_trees(int n, int cap) {
  TreeEnumerator e(n, cap);
  std::vector<InfluenceDispersionTree> out;
  while (auto t = e.next()) out.push_back(std::move(*t));
  return out;
}

InfluenceDispersionGraph gen_random_idg(std::size_t n, std::uint64_t seed, std::size_t max_cited) {
  std::mt19937_64 rng(seed);
  InfluenceDispersionGraph g;
  g.keys.resize(n + 1);
  g.years.resize(n + 1);
  g.cited.resize(n + 1);
  g.years[0] = 2000;
  for (std::size_t v = 1; v <= n; ++v) {
    g.keys[v] = static_cast<PaperIndex>(v);
    g.years[v] = g.years[v - 1] + (rng() % 3 == 0 ? 1 : 0);
    const std::size_t earlier = v - 1;
    if (earlier == 0) continue;
    const std::size_t count = rng() % (std::min(earlier, max_cited) + 1);
    auto& cited = g.cited[v];
    while (cited.size() < count) {
      NodeId u;
      if (rng() % 2 == 0) {
        u = static_cast<NodeId>(1 + rng() % earlier);
      } else {
        const std::size_t window = std::min<std::size_t>(earlier, 8);
        u = static_cast<NodeId>(v - 1 - rng() % window);
      }
      if (std::find(cited.begin(), cited.end(), u) == cited.end()) cited.push_back(u);
    }
    std::sort(cited.begin(), cited.end());
  }
  return g;
}

RawCorpus gen_random_records(const RandomCorpusParams& params) {
  if (params.last_year < params.first_year) throw std::invalid_argument("empty year range");
  std::mt19937_64 rng(params.seed);
  RawCorpus raw;
  const std::size_t n = params.n_papers;
  const int width = digits_for(n);
  std::uniform_int_distribution<int> year_of(params.first_year, params.last_year);
  std::uniform_int_distribution<std::size_t> venue_of(0, std::max<std::size_t>(params.venues_per_year, 1) - 1);
  raw.papers.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int year = year_of(rng);
    std::string venue;
    if (params.venues_per_year > 0) venue = "V" + padded(venue_of(rng), 3) + "-" + std::to_string(year);
    raw.papers.push_back({"W" + padded(i, width), year, std::move(venue)});
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return raw.papers[a].year < raw.papers[b].year; });

  std::vector<std::uint32_t> pool;       // papers from earlier years
  std::vector<std::uint32_t> endpoints;  // one entry per citation received
  std::vector<std::vector<std::uint32_t>> refs(n);
  std::poisson_distribution<int> ref_count(std::max(params.mean_references, 0.0));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::size_t i = 0;
  while (i < n) {
    const int year = raw.papers[order[i]].year;
    std::size_t j = i;
    while (j < n && raw.papers[order[j]].year == year) ++j;
    for (std::size_t k = i; k < j && !pool.empty(); ++k) {
      const std::uint32_t citing = static_cast<std::uint32_t>(order[k]);
      auto& mine = refs[citing];
      const auto wanted = std::min<std::size_t>(static_cast<std::size_t>(ref_count(rng)), pool.size());
      auto add = [&](std::uint32_t target) {
        if (std::find(mine.begin(), mine.end(), target) != mine.end()) return false;
        mine.push_back(target);
        endpoints.push_back(target);
        return true;
      };
      std::size_t attempts = 0;
      while (mine.size() < wanted && attempts++ < 8 * wanted + 8) {
        const double weight_pa = params.attachment_bias * static_cast<double>(endpoints.size());
        std::uint32_t target;
        if (weight_pa > 0 && unit(rng) < weight_pa / (weight_pa + static_cast<double>(pool.size())))
          target = endpoints[rng() % endpoints.size()];
        else
          target = pool[rng() % pool.size()];
        if (!add(target)) continue;
        if (mine.size() < wanted && !refs[target].empty() && unit(rng) < params.closure)
          add(refs[target][rng() % refs[target].size()]);
      }
    }
    for (std::size_t k = i; k < j; ++k) pool.push_back(static_cast<std::uint32_t>(order[k]));
    i = j;
  }
  for (std::size_t p = 0; p < n; ++p)
    for (auto q : refs[p]) raw.edges.push_back({raw.papers[p].id, raw.papers[q].id});
  return raw;
}

CitationCorpus gen_random_corpus(const RandomCorpusParams& params) {
  const auto raw = gen_random_records(params);
  return ingest(raw.edges, raw.papers);
}

RawCorpus gen_planted_z(const PlantedZParams& params) {
  if (params.t1 >= params.t2) throw std::invalid_argument("planted benchmark needs t1 < t2");
  if (params.min_early < 4 || params.max_early < params.min_early)
    throw std::invalid_argument("planted benchmark needs 4 <= min_early <= max_early");
  std::mt19937_64 rng(params.seed);
  std::uniform_int_distribution<std::int64_t> early(params.min_early, params.max_early);
  std::uniform_real_distribution<double> good_gain(1.0, 2.0);
  std::uniform_real_distribution<double> poor_gain(0.0, 0.8);
  std::uniform_int_distribution<int> late_offset(params.t1 + 1, params.t2);

  RawCorpus raw;
  for (int year = params.first_year; year <= params.last_year; ++year) {
    for (std::size_t v = 0; v < params.venues_per_year; ++v) {
      const std::string venue = "PZ" + padded(v, 2) + "-" + std::to_string(year);
      for (std::size_t i = 0; i < params.papers_per_venue; ++i) {
        const std::string root = venue + "-P" + padded(i, 3);
        const bool dispersed = rng() % 2 == 0;
        const std::int64_t c1 = early(rng);
        ShapeSpec spec;
        spec.n = c1;
        if (dispersed) {
          spec.kind = ShapeKind::kBalanced;
        } else {
          spec.kind = ShapeKind::kBroom;
          std::uniform_int_distribution<std::int64_t> k(std::max<std::int64_t>(1, c1 / 4),
                                                        std::max<std::int64_t>(1, std::min(3 * c1 / 4, c1 - 2)));
          spec.k = k(rng);
        }
        raw.papers.push_back({root, year, venue});
        append_tree(raw, shape_tree(spec), root, year, params.t1, ".e");
        const double gain = dispersed ? good_gain(rng) : poor_gain(rng);
        const auto late = static_cast<std::int64_t>(std::llround(gain * static_cast<double>(c1)));
        for (std::int64_t j = 0; j < late; ++j) {
          const std::string citer = root + ".l" + padded(static_cast<std::uint64_t>(j), 3);
          raw.papers.push_back({citer, year + late_offset(rng), ""});
          raw.edges.push_back({citer, root});
        }
      }
    }
  }
  return raw;
}

RawCorpus gen_planted_tot(const PlantedToTParams& params) {
  if (params.venue_size < 2) throw std::invalid_argument("planted ToT venue needs >= 2 papers");
  std::mt19937_64 rng(params.seed);
  std::uniform_int_distribution<std::int64_t> background(1, 20);
  constexpr std::int64_t kTop = 60;
  constexpr std::int64_t kRunnerUp = 50;
  RawCorpus raw;
  for (std::size_t c = 0; c < params.cite_ranks.size(); ++c) {
    const int cite_rank = params.cite_ranks[c];
    if (cite_rank != 1 && cite_rank != 2) throw std::invalid_argument("planted ToT cite ranks must be 1 or 2");
    const std::string venue = "TOT" + padded(c, 2) + "-" + std::to_string(params.year);
    // awardee sits at index 0 and wins NID; paper 1 is the fragmented rival
    for (std::size_t i = 0; i < params.venue_size; ++i) {
      const std::string root = venue + "-P" + padded(i, 3);
      ShapeSpec spec;
      if (i == 0) {
        spec.kind = ShapeKind::kBalanced;
        spec.n = cite_rank == 1 ? kTop : kRunnerUp;
      } else if (i == 1) {
        spec.kind = ShapeKind::kBroom;
        spec.n = cite_rank == 1 ? kRunnerUp : kTop;
        spec.k = spec.n / 2;
      } else {
        spec.kind = ShapeKind::kRandomAttachment;
        spec.n = background(rng);
        spec.seed = rng();
      }
      raw.papers.push_back({root, params.year, venue});
      append_tree(raw, shape_tree(spec), root, params.year, 10);
      if (i == 0) raw.awardees.push_back({root, venue, params.year});
    }
  }
  return raw;
}

}  // namespace idtkit
