#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "idtkit/corpus.hpp"
#include "idtkit/eval.hpp"
#include "idtkit/idt.hpp"

namespace idtkit {

enum class ShapeKind {
  kStar,              // every node under the root
  kChain,             // one unified branch of length n
  kBroom,             // chain of k, remaining n - k nodes under the k-th
  kOptimal,           // r unified branches of length k, k * r == n
  kBalanced,          // ceil(sqrt(n)) unified branches, lengths within one
  kRandomAttachment,  // node i under a uniform earlier node or the root
};

struct ShapeSpec {
  ShapeKind kind = ShapeKind::kStar;
  std::int64_t n = 0;
  std::int64_t k = 0;  // broom chain length; optimal branch length
  std::int64_t r = 0;  // optimal branch count
  std::uint64_t seed = 0;
};

ShapeKind parse_shape_kind(const std::string& name);

// Tree plus a corpus that induces it: each citer cites the root and its tree
// parent, with years nondecreasing along every branch.
struct ShapeInstance {
  InfluenceDispersionTree tree;
  std::vector<PaperRecord> papers;
  std::vector<CitationEdge> edges;
  std::string root_id;
};

// Throws std::invalid_argument for an inconsistent spec.
InfluenceDispersionTree shape_tree(const ShapeSpec& spec);

// Realizes the tree under `root_id`, root published in `root_year`, citer
// years in root_year + 1 .. root_year + span_years.
ShapeInstance gen_shape(const ShapeSpec& spec, const std::string& root_id = "P",
                        int root_year = 2000, int span_years = 10);

// Every unlabeled rooted tree with n non-root nodes, once each, as canonical
// level sequences (constant amortized time successor rule).
class TreeEnumerator {
 public:
  static constexpr int kDefaultCap = 9;

  // Throws std::invalid_argument for n < 0 or n > cap.
  explicit TreeEnumerator(int n, int cap = kDefaultCap);

  std::optional<InfluenceDispersionTree> next();

 private:
  std::vector<int> levels_;
  bool done_ = false;
};

std::vector<InfluenceDispersionTree> enumerate_trees(int n, int cap = TreeEnumerator::kDefaultCap);

// Random one-hop graph on n citers for property checks: node i cites up to
// max_cited earlier nodes, drawn with a bias toward recent ones.
InfluenceDispersionGraph gen_random_idg(std::size_t n, std::uint64_t seed,
                                        std::size_t max_cited = 4);

struct RandomCorpusParams {
  std::size_t n_papers = 1000;
  int first_year = 1990;
  int last_year = 2010;
  double mean_references = 5.0;
  double attachment_bias = 1.0;  // 0 = uniform targets
  double closure = 0.5;          // chance of also citing a reference of a target
  std::size_t venues_per_year = 10;
  std::uint64_t seed = 1;
};

struct RawCorpus {
  std::vector<PaperRecord> papers;
  std::vector<CitationEdge> edges;
  std::vector<Awardee> awardees;  // planted ToT only
};

// Years uniform over the range; every edge points to a strictly earlier year.
RawCorpus gen_random_records(const RandomCorpusParams& params);
CitationCorpus gen_random_corpus(const RandomCorpusParams& params);

// Venue papers split into well-dispersed (balanced IDT, NID 0) and
// fragmented (broom IDT, NID > 0) with independent early citation counts.
// The well-dispersed half receive the larger fractional gain over (t1, t2].
struct PlantedZParams {
  int first_year = 1995;
  int last_year = 2000;
  std::size_t venues_per_year = 4;
  std::size_t papers_per_venue = 20;
  int t1 = 5;
  int t2 = 10;
  std::int64_t min_early = 4;
  std::int64_t max_early = 30;
  std::uint64_t seed = 1;
};
RawCorpus gen_planted_z(const PlantedZParams& params);

// One award venue per entry of cite_ranks (each 1 or 2). The awardee is the
// most or second most cited venue paper at year + 10 and has the only
// balanced IDT among the top cited.
struct PlantedToTParams {
  std::vector<int> cite_ranks{1, 1, 2, 2};
  std::size_t venue_size = 40;
  int year = 2000;
  std::uint64_t seed = 1;
};
RawCorpus gen_planted_tot(const PlantedToTParams& params);

}  // namespace idtkit
