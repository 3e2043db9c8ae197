#include "idtkit/eval.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "idtkit/batch.hpp"
#include "idtkit/io.hpp"
#include "idtkit/parallel.hpp"
#include "json.hpp"

namespace idtkit {

namespace {

// Inversions of `seq` by merge sort.
std::uint64_t count_inversions(std::vector<std::size_t>& seq) {
  std::vector<std::size_t> scratch(seq.size());
  std::uint64_t inversions = 0;
  for (std::size_t width = 1; width < seq.size(); width *= 2) {
    for (std::size_t lo = 0; lo < seq.size(); lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, seq.size());
      const std::size_t hi = std::min(lo + 2 * width, seq.size());
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (seq[j] < seq[i]) {
          inversions += mid - i;
          scratch[k++] = seq[j++];
        } else {
          scratch[k++] = seq[i++];
        }
      }
      while (i < mid) scratch[k++] = seq[i++];
      while (j < hi) scratch[k++] = seq[j++];
    }
    seq.swap(scratch);
  }
  return inversions;
}

// Position in b of each element of a, in a's order.
std::vector<std::size_t> positions_in(const RankedList& a, const RankedList& b) {
  if (a.size() != b.size()) throw std::invalid_argument("ranked lists differ in length");
  std::unordered_map<std::string_view, std::size_t> where;
  where.reserve(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) where.emplace(b[i].id, i);
  std::vector<std::size_t> seq;
  seq.reserve(a.size());
  for (const auto& e : a.entries()) {
    const auto it = where.find(e.id);
    if (it == where.end()) throw std::invalid_argument("ranked lists differ in elements: " + e.id);
    seq.push_back(it->second);
  }
  return seq;
}

nlohmann::ordered_json real_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

double mean_of(const std::vector<double>& values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  long double sum = 0;
  for (double v : values) sum += v;
  return static_cast<double>(sum / static_cast<long double>(values.size()));
}

std::size_t competitor_count(double pct, std::size_t venue_size) {
  // guard against 0.05 * 60 landing a hair above 3
  const double raw = pct * static_cast<double>(venue_size);
  const auto count = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  return std::clamp<std::size_t>(count, 1, std::max<std::size_t>(venue_size, 1));
}

}  // namespace

RankedList::RankedList(std::vector<RankedEntry> entries, RankDirection direction)
    : entries_(std::move(entries)), direction_(direction) {
  std::sort(entries_.begin(), entries_.end(), [&](const RankedEntry& x, const RankedEntry& y) {
    if (x.score != y.score)
      return direction_ == RankDirection::kAscending ? x.score < y.score : x.score > y.score;
    return x.id < y.id;
  });
  std::vector<std::string_view> ids;
  ids.reserve(entries_.size());
  for (const auto& e : entries_) ids.push_back(e.id);
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw std::invalid_argument("duplicate id in ranked list");
}

std::vector<std::string> RankedList::ids() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.id);
  return out;
}

std::size_t RankedList::rank_of(const std::string& id) const {
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].id == id) return i + 1;
  throw UnknownPaperError(id);
}

double kendall_tau_distance(const RankedList& a, const RankedList& b) {
  auto seq = positions_in(a, b);
  const std::size_t m = seq.size();
  if (m < 2) return 0.0;
  const auto discordant = count_inversions(seq);
  const auto pairs = static_cast<std::uint64_t>(m) * (m - 1) / 2;
  return static_cast<double>(discordant) / static_cast<double>(pairs);
}

double kendall_tau_distance_untied(const RankedList& a, const RankedList& b) {
  const auto seq = positions_in(a, b);
  const std::size_t m = seq.size();
  std::uint64_t discordant = 0;
  std::uint64_t counted = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (a[i].score == a[j].score || b[seq[i]].score == b[seq[j]].score) continue;
      ++counted;
      if (seq[i] > seq[j]) ++discordant;
    }
  }
  return counted == 0 ? 0.0 : static_cast<double>(discordant) / static_cast<double>(counted);
}

std::string to_string(Measure m) { return m == Measure::kNid ? "nid" : "citations"; }

RankingResult rank_by_measure(std::span<const PaperIndex> papers, Measure measure,
                              const CorpusView& view, const TiePolicy& ties, unsigned jobs) {
  const auto& corpus = view.corpus();
  RankingResult result;
  std::vector<RankedEntry> entries;
  if (measure == Measure::kCitations) {
    for (PaperIndex p : papers) {
      const auto n = view.citation_count(p);
      if (n == 0)
        result.excluded.push_back(corpus.id(p));
      else
        entries.push_back({corpus.id(p), static_cast<double>(n)});
    }
    result.list = RankedList(std::move(entries), RankDirection::kDescending);
  } else {
    const auto reports = batch_metrics(view, papers, ties, jobs);
    for (std::size_t i = 0; i < papers.size(); ++i) {
      if (!reports[i])
        result.excluded.push_back(corpus.id(papers[i]));
      else
        entries.push_back({reports[i]->paper_id, reports[i]->nid});
    }
    result.list = RankedList(std::move(entries), RankDirection::kAscending);
  }
  return result;
}

RankingResult fractional_gain_list(std::span<const PaperIndex> papers,
                                   const CitationCorpus& corpus, int pub_year, int t1, int t2,
                                   GainMode mode) {
  if (t1 >= t2) throw std::invalid_argument("gain window needs t1 < t2");
  const CorpusView early(corpus, pub_year + t1);
  const CorpusView late(corpus, pub_year + t2);
  RankingResult result;
  std::vector<RankedEntry> entries;
  for (PaperIndex p : papers) {
    const auto c1 = early.citation_count(p);
    if (c1 == 0) {
      result.excluded.push_back(corpus.id(p));
      continue;
    }
    const auto c2 = late.citation_count(p);
    const double gain = static_cast<double>(c2) - static_cast<double>(c1);
    entries.push_back({corpus.id(p), mode == GainMode::kFractional ? gain / static_cast<double>(c1) : gain});
  }
  result.list = RankedList(std::move(entries), RankDirection::kDescending);
  return result;
}

ZExperimentResult z_experiment(const CitationCorpus& corpus, const ZExperimentOptions& options) {
  if (options.t1 >= options.t2) throw std::invalid_argument("z experiment needs t1 < t2");
  std::map<std::pair<std::string, int>, std::vector<PaperIndex>> groups;
  for (PaperIndex p = 0; p < corpus.paper_count(); ++p) {
    const auto& rec = corpus.paper(p);
    if (rec.venue.empty() || rec.year < options.first_year || rec.year > options.last_year) continue;
    groups[{rec.venue, rec.year}].push_back(p);
  }
  std::vector<std::pair<const std::pair<std::string, int>*, const std::vector<PaperIndex>*>> work;
  for (const auto& [key, members] : groups) work.emplace_back(&key, &members);

  struct Slot {
    std::optional<VenueExperiment> venue;
    std::optional<SkippedItem> skipped;
  };
  std::vector<Slot> slots(work.size());
  auto distance = [&](const RankedList& a, const RankedList& b) {
    return options.tie_handling == TieHandling::kDiscardTies ? kendall_tau_distance_untied(a, b)
                                                            : kendall_tau_distance(a, b);
  };
  parallel_for(work.size(), options.jobs, [&](std::size_t i) {
    const auto& [venue, year] = *work[i].first;
    const auto& members = *work[i].second;
    const std::string key = venue + "@" + std::to_string(year);
    if (corpus.max_year() < year + options.t2) {
      slots[i].skipped = SkippedItem{key, "corpus ends before year + t2"};
      return;
    }
    const CorpusView at_t1(corpus, year + options.t1);
    std::vector<PaperIndex> eligible;
    for (PaperIndex p : members)
      if (at_t1.citation_count(p) > 0) eligible.push_back(p);
    if (eligible.size() < 2) {
      slots[i].skipped = SkippedItem{key, "fewer than 2 papers cited by year + t1"};
      return;
    }
    const auto gain = fractional_gain_list(eligible, corpus, year, options.t1, options.t2, options.gain);
    const auto by_nid = rank_by_measure(eligible, Measure::kNid, at_t1, options.ties);
    const auto by_cite = rank_by_measure(eligible, Measure::kCitations, at_t1, options.ties);
    VenueExperiment v;
    v.venue = venue;
    v.year = year;
    for (PaperIndex p : eligible) v.members.push_back(corpus.id(p));
    v.z_nid = distance(by_nid.list, gain.list);
    v.z_cite = distance(by_cite.list, gain.list);
    slots[i].venue = std::move(v);
  });

  ZExperimentResult result;
  std::vector<double> z_nid, z_cite;
  for (auto& slot : slots) {
    if (slot.skipped) result.skipped.push_back(std::move(*slot.skipped));
    if (slot.venue) {
      z_nid.push_back(slot.venue->z_nid);
      z_cite.push_back(slot.venue->z_cite);
      result.papers += slot.venue->members.size();
      result.venues.push_back(std::move(*slot.venue));
    }
  }
  result.mean_z_nid = mean_of(z_nid);
  result.mean_z_cite = mean_of(z_cite);
  return result;
}

double mean_reciprocal_rank(std::span<const std::size_t> ranks) {
  if (ranks.empty()) return 0.0;
  long double sum = 0;
  for (auto r : ranks) {
    if (r == 0) throw std::invalid_argument("ranks are 1-based");
    sum += 1.0L / static_cast<long double>(r);
  }
  return static_cast<double>(sum / static_cast<long double>(ranks.size()));
}

ToTResult tot_experiment(const CitationCorpus& corpus, std::span<const Awardee> awardees,
                         const ToTOptions& options) {
  if (!(options.pct > 0.0 && options.pct <= 1.0)) throw std::invalid_argument("pct must be in (0, 1]");
  struct Slot {
    std::optional<ToTCase> result;
    std::optional<SkippedItem> skipped;
  };
  std::vector<Slot> slots(awardees.size());
  parallel_for(awardees.size(), options.jobs, [&](std::size_t i) {
    const Awardee& award = awardees[i];
    auto skip = [&](std::string reason) { slots[i].skipped = SkippedItem{award.paper_id, std::move(reason)}; };
    const auto paper = corpus.find(award.paper_id);
    if (!paper) return skip("awardee not in corpus");
    const auto& rec = corpus.paper(*paper);
    if (rec.venue != award.venue || rec.year != award.year)
      return skip("awardee venue/year differ from corpus metadata");
    const int horizon_year = award.year + options.horizon;
    if (corpus.max_year() < horizon_year) return skip("corpus ends before year + horizon");

    const CorpusView view(corpus, horizon_year);
    std::vector<RankedEntry> cohort;
    for (PaperIndex p = 0; p < corpus.paper_count(); ++p) {
      const auto& r = corpus.paper(p);
      if (r.venue == award.venue && r.year == award.year)
        cohort.push_back({r.id, static_cast<double>(view.citation_count(p))});
    }
    const RankedList by_cite_all(std::move(cohort), RankDirection::kDescending);
    const std::size_t keep = competitor_count(options.pct, by_cite_all.size());

    ToTCase c;
    c.paper_id = award.paper_id;
    c.venue = award.venue;
    c.year = award.year;
    c.venue_size = by_cite_all.size();
    std::vector<RankedEntry> competitors(by_cite_all.entries().begin(),
                                         by_cite_all.entries().begin() + static_cast<std::ptrdiff_t>(keep));
    if (std::none_of(competitors.begin(), competitors.end(),
                     [&](const RankedEntry& e) { return e.id == award.paper_id; }))
      competitors.push_back(by_cite_all[by_cite_all.rank_of(award.paper_id) - 1]);
    for (const auto& e : competitors) c.competitors.push_back(e.id);

    std::vector<PaperIndex> indices;
    for (const auto& e : competitors) indices.push_back(corpus.index_of(e.id));
    const auto by_nid = rank_by_measure(indices, Measure::kNid, view, options.ties);
    if (std::find(by_nid.excluded.begin(), by_nid.excluded.end(), award.paper_id) != by_nid.excluded.end())
      return skip("awardee uncited at year + horizon");
    c.rank_cite = RankedList(std::move(competitors), RankDirection::kDescending).rank_of(award.paper_id);
    c.rank_nid = by_nid.list.rank_of(award.paper_id);
    slots[i].result = std::move(c);
  });

  ToTResult result;
  std::vector<std::size_t> cite_ranks, nid_ranks;
  for (auto& slot : slots) {
    if (slot.skipped) result.skipped.push_back(std::move(*slot.skipped));
    if (slot.result) {
      cite_ranks.push_back(slot.result->rank_cite);
      nid_ranks.push_back(slot.result->rank_nid);
      result.cases.push_back(std::move(*slot.result));
    }
  }
  result.mrr_cite = mean_reciprocal_rank(cite_ranks);
  result.mrr_nid = mean_reciprocal_rank(nid_ranks);
  return result;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson needs equal-length series");
  const std::size_t n = x.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<long double>(n);
  my /= static_cast<long double>(n);
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long double dx = x[i] - mx;
    const long double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

std::string CorpusStats::correlations_json() const {
  nlohmann::ordered_json j;
  j["papers"] = rows.size();
  j["max_depth"] = max_depth;
  j["max_breadth"] = max_breadth;
  j["rho_breadth_citations"] = real_or_null(rho_breadth_citations);
  j["rho_depth_citations"] = real_or_null(rho_depth_citations);
  j["rho_depth_breadth"] = real_or_null(rho_depth_breadth);
  j["rho_idi_citations"] = real_or_null(rho_idi_citations);
  j["rho_nid_citations"] = real_or_null(rho_nid_citations);
  return j.dump(2);
}

CorpusStats corpus_stats(const CorpusView& view, const TiePolicy& ties, unsigned jobs) {
  const auto papers = view.papers();
  const auto reports = batch_metrics(view, papers, ties, jobs);
  CorpusStats s;
  std::vector<double> n, d, b, idi_values, nid_values;
  for (const auto& r : reports) {
    if (!r) continue;
    s.rows.push_back({r->paper_id, r->n, r->depth, r->breadth, r->idi, r->nid});
    ++s.depth_histogram[r->depth];
    ++s.breadth_histogram[r->breadth];
    s.max_depth = std::max(s.max_depth, r->depth);
    s.max_breadth = std::max(s.max_breadth, r->breadth);
    n.push_back(static_cast<double>(r->n));
    d.push_back(r->depth);
    b.push_back(r->breadth);
    idi_values.push_back(static_cast<double>(r->idi));
    nid_values.push_back(r->nid);
  }
  s.rho_breadth_citations = pearson(b, n);
  s.rho_depth_citations = pearson(d, n);
  s.rho_depth_breadth = pearson(d, b);
  s.rho_idi_citations = pearson(idi_values, n);
  s.rho_nid_citations = pearson(nid_values, n);
  return s;
}

void write_histogram_csv(std::ostream& out, const char* key,
                         const std::map<std::int32_t, std::size_t>& histogram) {
  out << key << ",count\n";
  for (const auto& [value, count] : histogram) out << value << ',' << count << '\n';
}

void write_scatter_csv(std::ostream& out, const CorpusStats& stats) {
  out << "paper_id,n,d,b,idi,nid\n";
  for (const auto& r : stats.rows)
    out << r.id << ',' << r.n << ',' << r.depth << ',' << r.breadth << ',' << r.idi << ','
        << format_real(r.nid) << '\n';
}

void write_venue_csv(std::ostream& out, const ZExperimentResult& result) {
  out << "venue,year,n_papers,z_nid,z_cite,z_diff\n";
  for (const auto& v : result.venues)
    out << v.venue << ',' << v.year << ',' << v.members.size() << ',' << format_real(v.z_nid) << ','
        << format_real(v.z_cite) << ',' << format_real(v.z_diff()) << '\n';
}

void write_tot_csv(std::ostream& out, const ToTResult& result) {
  out << "paper_id,venue,year,cohort_size,rank_cite,rank_nid\n";
  for (const auto& c : result.cases)
    out << c.paper_id << ',' << c.venue << ',' << c.year << ',' << c.competitors.size() << ','
        << c.rank_cite << ',' << c.rank_nid << '\n';
}

std::string eval_summary_json(const ZExperimentResult* z, const ToTResult* tot) {
  nlohmann::ordered_json j;
  auto skipped_json = [](const std::vector<SkippedItem>& items) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& s : items) arr.push_back({{"key", s.key}, {"reason", s.reason}});
    return arr;
  };
  if (z) {
    nlohmann::ordered_json zj;
    zj["venues"] = z->venues.size();
    zj["papers"] = z->papers;
    zj["mean_z_nid"] = real_or_null(z->mean_z_nid);
    zj["mean_z_cite"] = real_or_null(z->mean_z_cite);
    zj["skipped"] = skipped_json(z->skipped);
    j["z"] = std::move(zj);
  }
  if (tot) {
    nlohmann::ordered_json tj;
    tj["cases"] = tot->cases.size();
    tj["mrr_nid"] = tot->mrr_nid;
    tj["mrr_cite"] = tot->mrr_cite;
    tj["rank1_nid"] = std::count_if(tot->cases.begin(), tot->cases.end(),
                                    [](const ToTCase& c) { return c.rank_nid == 1; });
    tj["rank1_cite"] = std::count_if(tot->cases.begin(), tot->cases.end(),
                                     [](const ToTCase& c) { return c.rank_cite == 1; });
    tj["skipped"] = skipped_json(tot->skipped);
    j["tot"] = std::move(tj);
  }
  return j.dump(2);
}

std::vector<Awardee> read_awardees(std::istream& in) {
  std::vector<Awardee> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (line_no == 1 && !fields.empty() && fields[0] == "paper_id") continue;
    if (fields.size() != 3) throw DataError("awardee line " + std::to_string(line_no) + ": expected 3 fields");
    Awardee a{fields[0], fields[1], 0};
    try {
      std::size_t used = 0;
      a.year = std::stoi(fields[2], &used);
      if (used != fields[2].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw DataError("awardee line " + std::to_string(line_no) + ": bad year");
    }
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace idtkit
