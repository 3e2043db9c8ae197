#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "idtkit/corpus.hpp"
#include "idtkit/idt.hpp"
#include "idtkit/metrics.hpp"

namespace idtkit {

// Builds IDG -> IDT -> metrics for one paper under a view. nullopt when the
// paper has no citations in the view.
std::optional<MetricsReport> paper_metrics(const CorpusView& view, PaperIndex paper,
                                           const TiePolicy& ties);

// Per-paper metrics over a list of papers, evaluated on `jobs` threads.
// Result i belongs to papers[i].
std::vector<std::optional<MetricsReport>> batch_metrics(const CorpusView& view,
                                                        std::span<const PaperIndex> papers,
                                                        const TiePolicy& ties,
                                                        unsigned jobs = 1);

// Header plus one row per cited paper, in input order.
void write_metrics_csv(std::ostream& out,
                       std::span<const std::optional<MetricsReport>> reports);

}  // namespace idtkit
