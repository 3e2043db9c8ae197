#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "idtkit/idt.hpp"

namespace idtkit {

// Sum of root-to-leaf path lengths. 0 for a tree without citations.
std::int64_t idi(const InfluenceDispersionTree& tree);

// Largest IDI any rooted tree on n non-root nodes can reach:
// (1 + k)(n - k) with k = round((n - 1) / 2). Throws std::domain_error for
// n < 1.
std::int64_t idi_max(std::int64_t n);
// Smallest reachable IDI, n. Throws std::domain_error for n < 1.
std::int64_t idi_min(std::int64_t n);
// IDI of the ideal (all unified branches) tree, n.
std::int64_t ideal_idi(std::int64_t n);

struct Shape {
  std::int64_t depth = 0;
  std::int64_t breadth = 0;
  friend bool operator==(const Shape&, const Shape&) = default;
};
// Ideal depth and breadth: both ceil(sqrt(n)).
Shape optimal_shape(std::int64_t n);

// IDI minus the ideal IDI; 0 for a tree without citations.
std::int64_t influence_divergence(const InfluenceDispersionTree& tree);

// (IDI - ideal) / (idi_max - idi_min), 0 when the span is empty (n <= 2).
// Throws std::domain_error for n == 0.
double nid(const InfluenceDispersionTree& tree);

struct MetricsReport {
  std::string paper_id;
  std::int64_t n = 0;
  std::int32_t depth = 0;
  std::int32_t breadth = 0;
  std::int64_t idi = 0;
  std::int64_t idi_min = 0;
  std::int64_t idi_max = 0;
  std::int64_t ideal_idi = 0;
  std::int64_t influence_divergence = 0;
  double nid = 0.0;

  static const char* csv_header();  // paper_id,n,d,b,idi,idi_min,idi_max,id,nid
  std::string to_csv_row() const;
  std::string to_json() const;
};

// nullopt for an uncited paper.
std::optional<MetricsReport> compute_metrics(std::string paper_id,
                                             const InfluenceDispersionTree& tree);

// Shortest round-trip decimal form used in every CSV/JSON writer.
std::string format_real(double value);

}  // namespace idtkit
