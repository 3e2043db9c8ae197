#include "idtkit/batch.hpp"

#include <ostream>

#include "idtkit/parallel.hpp"

namespace idtkit {

std::optional<MetricsReport> paper_metrics(const CorpusView& view, PaperIndex paper,
                                           const TiePolicy& ties) {
  if (view.citation_count(paper) == 0) return std::nullopt;
  const auto tree = build_idt(build_idg(view, paper), ties);
  return compute_metrics(view.corpus().id(paper), tree);
}

std::vector<std::optional<MetricsReport>> batch_metrics(const CorpusView& view,
                                                        std::span<const PaperIndex> papers,
                                                        const TiePolicy& ties, unsigned jobs) {
  std::vector<std::optional<MetricsReport>> out(papers.size());
  parallel_for(papers.size(), jobs,
               [&](std::size_t i) { out[i] = paper_metrics(view, papers[i], ties); });
  return out;
}

void write_metrics_csv(std::ostream& out,
                       std::span<const std::optional<MetricsReport>> reports) {
  out << MetricsReport::csv_header() << '\n';
  for (const auto& r : reports)
    if (r) out << r->to_csv_row() << '\n';
}

}  // namespace idtkit
