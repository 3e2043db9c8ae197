#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace idtkit {

// Dense paper handle. Indices follow lexicographic id order, so comparing
// indices is the same as comparing ids.
using PaperIndex = std::uint32_t;

struct PaperRecord {
  std::string id;
  int year = 0;
  std::string venue;  // empty when unknown

  friend bool operator==(const PaperRecord&, const PaperRecord&) = default;
};

struct CitationEdge {
  std::string citing;
  std::string cited;

  friend bool operator==(const CitationEdge&, const CitationEdge&) = default;
};

class UnknownPaperError : public std::out_of_range {
 public:
  explicit UnknownPaperError(std::string_view id)
      : std::out_of_range("unknown paper id: " + std::string(id)), id_(id) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

// Which papers the isolation filter removes.
enum class IsolationRule {
  kNoCitationsAndNoReferences,  // drop only papers with neither
  kNoCitationsOrNoReferences,   // drop papers missing either (cascades)
};

struct IngestOptions {
  IsolationRule isolation = IsolationRule::kNoCitationsAndNoReferences;
};

// Counters for every record the ingest pipeline saw and where it went.
// edges_in == edges_kept + dropped_unknown + dropped_self + dropped_dup +
//             dropped_forward + dropped_cycle + dropped_with_papers
struct IngestReport {
  std::uint64_t papers_in = 0;
  std::uint64_t papers_kept = 0;
  std::uint64_t edges_in = 0;
  std::uint64_t edges_kept = 0;
  std::uint64_t dropped_self = 0;
  std::uint64_t dropped_dup = 0;
  std::uint64_t dropped_forward = 0;
  std::uint64_t dropped_cycle = 0;
  std::uint64_t dropped_isolated = 0;  // papers
  std::uint64_t dropped_unknown = 0;   // edges naming a paper without metadata
  std::uint64_t dropped_with_papers = 0;  // edges of isolated papers (OR rule)
  std::uint64_t duplicate_papers = 0;     // repeated metadata ids, first kept
  std::uint64_t malformed_edges = 0;
  std::uint64_t malformed_papers = 0;

  std::string to_json() const;
};

class CitationCorpus;

// Builds a corpus from raw streams. Preprocessing order: unknown ids,
// self-loops, duplicates, forward citations, same-year cycles, isolated
// papers (to a fixed point).
CitationCorpus ingest(std::span<const CitationEdge> edges,
                      std::span<const PaperRecord> papers,
                      const IngestOptions& options = {},
                      IngestReport* report = nullptr);

// Immutable citation DAG. Safe for concurrent readers.
class CitationCorpus {
 public:
  CitationCorpus() = default;

  std::size_t paper_count() const noexcept { return papers_.size(); }
  std::size_t edge_count() const noexcept { return citer_list_.size(); }

  const PaperRecord& paper(PaperIndex p) const { return papers_.at(p); }
  const std::string& id(PaperIndex p) const { return papers_.at(p).id; }
  int year(PaperIndex p) const noexcept { return years_[p]; }
  std::span<const PaperRecord> papers() const noexcept { return papers_; }

  std::optional<PaperIndex> find(std::string_view id) const;
  // Throws UnknownPaperError.
  PaperIndex index_of(std::string_view id) const;

  // Papers citing p, ordered by (year, id).
  std::span<const PaperIndex> citers(PaperIndex p) const noexcept {
    return {citer_list_.data() + citer_offsets_[p],
            citer_list_.data() + citer_offsets_[p + 1]};
  }
  // Papers p cites, ordered by id.
  std::span<const PaperIndex> references(PaperIndex p) const noexcept {
    return {reference_list_.data() + reference_offsets_[p],
            reference_list_.data() + reference_offsets_[p + 1]};
  }
  bool cites(PaperIndex citing, PaperIndex cited) const noexcept;

  int min_year() const noexcept { return min_year_; }
  int max_year() const noexcept { return max_year_; }

  // All (citing, cited) pairs ordered by (citing, cited).
  std::vector<std::pair<PaperIndex, PaperIndex>> edges() const;

  friend bool operator==(const CitationCorpus&, const CitationCorpus&) = default;

 private:
  friend CitationCorpus ingest(std::span<const CitationEdge>,
                               std::span<const PaperRecord>,
                               const IngestOptions&, IngestReport*);
  friend class CorpusCodec;

  // papers sorted by id; edges as (citing, cited) index pairs
  static CitationCorpus assemble(std::vector<PaperRecord> papers,
                                 std::vector<std::pair<PaperIndex, PaperIndex>> edges);

  std::vector<PaperRecord> papers_;
  std::vector<int> years_;
  std::vector<std::uint64_t> citer_offsets_{0};
  std::vector<PaperIndex> citer_list_;
  std::vector<std::uint64_t> reference_offsets_{0};
  std::vector<PaperIndex> reference_list_;
  int min_year_ = 0;
  int max_year_ = 0;
};

// Time-sliced view: papers with year <= cutoff and the edges among them.
// Since every edge points backward in time, an edge is visible exactly
// when its citing paper is.
class CorpusView {
 public:
  static constexpr int kNoCutoff = std::numeric_limits<int>::max();

  explicit CorpusView(const CitationCorpus& corpus, int cutoff_year = kNoCutoff)
      : corpus_(&corpus), cutoff_(cutoff_year) {}

  const CitationCorpus& corpus() const noexcept { return *corpus_; }
  int cutoff_year() const noexcept { return cutoff_; }

  bool contains(PaperIndex p) const noexcept {
    return p < corpus_->paper_count() && corpus_->year(p) <= cutoff_;
  }
  // Throws UnknownPaperError when p is outside the view.
  std::span<const PaperIndex> citations_of(PaperIndex p) const;
  std::span<const PaperIndex> citations_of(std::string_view id) const;
  std::size_t citation_count(PaperIndex p) const { return citations_of(p).size(); }

  std::size_t paper_count() const;
  std::size_t edge_count() const;
  // Visible papers in index order.
  std::vector<PaperIndex> papers() const;

 private:
  const CitationCorpus* corpus_;
  int cutoff_;
};

inline CorpusView snapshot(const CitationCorpus& corpus, int cutoff_year) {
  return CorpusView(corpus, cutoff_year);
}

// True when the edge relation admits a topological order.
bool is_acyclic(const CitationCorpus& corpus);

}  // namespace idtkit
