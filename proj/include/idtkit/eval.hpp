#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "idtkit/corpus.hpp"
#include "idtkit/idt.hpp"
#include "idtkit/metrics.hpp"

namespace idtkit {

enum class RankDirection { kAscending, kDescending };

struct RankedEntry {
  std::string id;
  double score = 0.0;
};

// Papers ordered best first. Ties in score are broken by id, so the order is
// a strict total order.
class RankedList {
 public:
  RankedList() = default;
  RankedList(std::vector<RankedEntry> entries, RankDirection direction);

  RankDirection direction() const noexcept { return direction_; }
  std::span<const RankedEntry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const RankedEntry& operator[](std::size_t i) const { return entries_[i]; }
  std::vector<std::string> ids() const;
  // 1-based rank of `id`; throws UnknownPaperError.
  std::size_t rank_of(const std::string& id) const;

 private:
  std::vector<RankedEntry> entries_;
  RankDirection direction_ = RankDirection::kDescending;
};

// Fraction of unordered pairs the two lists order differently. Throws
// std::invalid_argument when the element sets differ. O(m log m).
double kendall_tau_distance(const RankedList& a, const RankedList& b);

// Tie-discarding variant: pairs with equal scores in either list are left out
// of both the count and the normalizer. 0 when no pair survives.
double kendall_tau_distance_untied(const RankedList& a, const RankedList& b);

enum class TieHandling { kResolveById, kDiscardTies };

enum class Measure { kCitations, kNid };
std::string to_string(Measure m);

struct RankingResult {
  RankedList list;
  std::vector<std::string> excluded;  // papers without citations in the view
};

// Citations rank descending, NID ascending.
RankingResult rank_by_measure(std::span<const PaperIndex> papers, Measure measure,
                              const CorpusView& view, const TiePolicy& ties = {},
                              unsigned jobs = 1);

enum class GainMode { kFractional, kAbsolute };

// Score = (c(t2) - c(t1)) / c(t1) with c(t) the citation count at
// pub_year + t, descending. Papers with c(t1) == 0 are excluded.
RankingResult fractional_gain_list(std::span<const PaperIndex> papers,
                                   const CitationCorpus& corpus, int pub_year, int t1,
                                   int t2, GainMode mode = GainMode::kFractional);

struct VenueExperiment {
  std::string venue;
  int year = 0;
  std::vector<std::string> members;  // eligible papers, id order
  double z_nid = 0.0;
  double z_cite = 0.0;
  double z_diff() const noexcept { return z_cite - z_nid; }
};

struct SkippedItem {
  std::string key;
  std::string reason;
};

struct ZExperimentOptions {
  int first_year = 1995;
  int last_year = 2000;
  int t1 = 5;
  int t2 = 10;
  TiePolicy ties{};
  TieHandling tie_handling = TieHandling::kResolveById;
  GainMode gain = GainMode::kFractional;
  unsigned jobs = 1;
};

struct ZExperimentResult {
  std::vector<VenueExperiment> venues;  // sorted by (venue, year)
  std::vector<SkippedItem> skipped;
  double mean_z_nid = 0.0;
  double mean_z_cite = 0.0;
  std::size_t papers = 0;
};

// Groups papers by (venue, year) for years in the option range and compares
// influence rankings at year + t1 against citation gain over (t1, t2].
ZExperimentResult z_experiment(const CitationCorpus& corpus, const ZExperimentOptions& options);

struct Awardee {
  std::string paper_id;
  std::string venue;
  int year = 0;
};

struct ToTCase {
  std::string paper_id;
  std::string venue;
  int year = 0;
  std::size_t venue_size = 0;           // |P_v|
  std::vector<std::string> competitors; // cohort, citation order
  std::size_t rank_cite = 0;
  std::size_t rank_nid = 0;
};

struct ToTOptions {
  double pct = 0.05;
  int horizon = 10;
  TiePolicy ties{};
  unsigned jobs = 1;
};

struct ToTResult {
  std::vector<ToTCase> cases;
  std::vector<SkippedItem> skipped;
  double mrr_cite = 0.0;
  double mrr_nid = 0.0;
};

// Top ceil(pct * |P_v|) papers of the award venue by citations at
// year + horizon, with the awardee forced in; ranks the awardee in that
// cohort by citations and by NID.
ToTResult tot_experiment(const CitationCorpus& corpus, std::span<const Awardee> awardees,
                         const ToTOptions& options = {});

// Mean of 1/rank. 0 for an empty list.
double mean_reciprocal_rank(std::span<const std::size_t> ranks);

// Pearson correlation; NaN when either series has zero variance or fewer than
// two points.
double pearson(std::span<const double> x, std::span<const double> y);

struct PaperShapeRow {
  std::string id;
  std::int64_t n = 0;
  std::int32_t depth = 0;
  std::int32_t breadth = 0;
  std::int64_t idi = 0;
  double nid = 0.0;
};

struct CorpusStats {
  std::vector<PaperShapeRow> rows;  // cited papers, id order
  std::map<std::int32_t, std::size_t> depth_histogram;
  std::map<std::int32_t, std::size_t> breadth_histogram;
  double rho_breadth_citations = 0.0;
  double rho_depth_citations = 0.0;
  double rho_depth_breadth = 0.0;
  double rho_idi_citations = 0.0;
  double rho_nid_citations = 0.0;
  std::int32_t max_depth = 0;
  std::int32_t max_breadth = 0;

  std::string correlations_json() const;
};

CorpusStats corpus_stats(const CorpusView& view, const TiePolicy& ties = {}, unsigned jobs = 1);

// Output writers.
void write_histogram_csv(std::ostream& out, const char* key,
                         const std::map<std::int32_t, std::size_t>& histogram);
void write_scatter_csv(std::ostream& out, const CorpusStats& stats);
void write_venue_csv(std::ostream& out, const ZExperimentResult& result);
void write_tot_csv(std::ostream& out, const ToTResult& result);
std::string eval_summary_json(const ZExperimentResult* z, const ToTResult* tot);

// Awardee list, CSV `paper_id,venue,year` with optional header.
std::vector<Awardee> read_awardees(std::istream& in);

}  // namespace idtkit
