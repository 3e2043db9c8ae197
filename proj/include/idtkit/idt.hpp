#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "idtkit/corpus.hpp"

namespace idtkit {

// Local node handle inside one IDG/IDT. Node 0 is always the root.
using NodeId = std::uint32_t;
inline constexpr NodeId kRootNode = 0;
inline constexpr std::int32_t kNoParent = -1;

// One-hop influence graph of a paper: the root plus every paper citing it.
// An influence edge u -> v exists when v cites u. The root edge root -> v is
// implicit for every non-root v; `cited[v]` lists the other in-graph papers
// v cites.
struct InfluenceDispersionGraph {
  // keys[v] orders nodes for tie-breaking (corpus index, hence id order).
  std::vector<PaperIndex> keys;
  std::vector<int> years;
  std::vector<std::vector<NodeId>> cited;

  std::size_t size() const noexcept { return keys.size(); }
  std::size_t citation_count() const noexcept { return keys.empty() ? 0 : keys.size() - 1; }

  // Every influence edge (u, v), root edges included, ordered by (v, u).
  std::vector<std::pair<NodeId, NodeId>> influence_edges() const;

  // Throws std::invalid_argument on a malformed graph (bad node reference,
  // self-loop, duplicate, root listed as cited, cycle).
  void validate() const;
};

InfluenceDispersionGraph build_idg(const CorpusView& view, PaperIndex paper);

struct TiePolicy {
  enum class Kind { kMinId, kMaxId, kRandom };
  Kind kind = Kind::kMinId;
  std::uint64_t seed = 0;

  static TiePolicy min_id() { return {Kind::kMinId, 0}; }
  static TiePolicy max_id() { return {Kind::kMaxId, 0}; }
  static TiePolicy random(std::uint64_t seed) { return {Kind::kRandom, seed}; }
};

// Parses "min-id", "max-id", "random".
TiePolicy::Kind parse_tie_kind(const std::string& name);
std::string to_string(TiePolicy::Kind kind);

// Spanning tree of an IDG. parent[0] == kNoParent and depth[0] == 0.
struct InfluenceDispersionTree {
  std::vector<PaperIndex> keys;
  std::vector<std::int32_t> parent;
  std::vector<std::int32_t> depth;

  std::size_t size() const noexcept { return parent.size(); }
  std::size_t citation_count() const noexcept { return parent.empty() ? 0 : parent.size() - 1; }

  // Builds a tree from a parent vector (parent[0] must be kNoParent); keys
  // default to 0..n. Throws std::invalid_argument unless the vector encodes
  // a tree rooted at node 0.
  static InfluenceDispersionTree from_parents(std::vector<std::int32_t> parent,
                                              std::vector<PaperIndex> keys = {});

  friend bool operator==(const InfluenceDispersionTree&,
                         const InfluenceDispersionTree&) = default;
};

// Places nodes in topological order of the in-graph citations, taking the
// earliest (year, key) ready node first. Each node hangs under the root when
// it cites no other in-graph paper, otherwise under its deepest cited paper,
// with equal depths resolved by `ties`.
InfluenceDispersionTree build_idt(const InfluenceDispersionGraph& idg,
                                  const TiePolicy& ties = {});

// Order in which build_idt places nodes.
std::vector<NodeId> placement_order(const InfluenceDispersionGraph& idg);

struct Branch {
  NodeId leaf = 0;
  std::int32_t length = 0;
  // Non-root nodes on the path where another branch splits off.
  std::vector<NodeId> fragment_points;
  bool unified() const noexcept { return fragment_points.empty(); }
};

struct TreeStats {
  std::size_t n = 0;
  std::int32_t depth = 0;
  std::int32_t breadth = 0;
  std::vector<std::size_t> level_sizes;  // level_sizes[l - 1] = |N_l|
  std::vector<NodeId> leaves;            // ascending node id
  std::vector<Branch> branches;          // one per leaf, same order

  std::size_t unified_branch_count() const;
};

TreeStats tree_stats(const InfluenceDispersionTree& tree);

// {"root": id, "nodes": [{"id", "parent", "depth"}, ...]}; ids resolved via
// the corpus when given, otherwise keys are printed as numbers.
std::string idt_to_json(const InfluenceDispersionTree& tree,
                        const CitationCorpus* corpus = nullptr);
// One `parent<TAB>child` line per tree edge.
void write_idt_edges(std::ostream& out, const InfluenceDispersionTree& tree,
                     const CitationCorpus* corpus = nullptr);

}  // namespace idtkit
