#include "idtkit/metrics.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace idtkit {

namespace {

void require_positive(std::int64_t n, const char* what) {
  if (n < 1) throw std::domain_error(std::string(what) + " needs n >= 1, got " + std::to_string(n));
}

struct Summary {
  std::int32_t depth = 0;
  std::int32_t breadth = 0;
  std::int64_t idi = 0;
};

Summary summarize(const InfluenceDispersionTree& tree) {
  Summary s;
  const std::size_t size = tree.size();
  if (size < 2) return s;
  std::vector<bool> internal(size, false);
  std::vector<std::int32_t> level(size, 0);
  for (std::size_t v = 1; v < size; ++v) {
    internal[static_cast<std::size_t>(tree.parent[v])] = true;
    s.depth = std::max(s.depth, tree.depth[v]);
  }
  for (std::size_t v = 1; v < size; ++v) {
    ++level[static_cast<std::size_t>(tree.depth[v])];
    if (!internal[v]) s.idi += tree.depth[v];
  }
  for (auto count : level) s.breadth = std::max(s.breadth, count);
  return s;
}

}  // namespace

std::int64_t idi(const InfluenceDispersionTree& tree) { return summarize(tree).idi; }

std::int64_t idi_max(std::int64_t n) {
  require_positive(n, "idi_max");
  // (1 + k)(n - k) is symmetric about k = (n - 1) / 2, so both roundings of a
  // half-integer give the same value.
  const std::int64_t k_floor = (n - 1) / 2;
  const std::int64_t k_ceil = n / 2;
  const std::int64_t low = (1 + k_floor) * (n - k_floor);
  const std::int64_t high = (1 + k_ceil) * (n - k_ceil);
  if (low != high) throw std::logic_error("idi_max roundings disagree");
  return low;
}

std::int64_t idi_min(std::int64_t n) {
  require_positive(n, "idi_min");
  return n;
}

std::int64_t ideal_idi(std::int64_t n) {
  require_positive(n, "ideal_idi");
  return n;
}

Shape optimal_shape(std::int64_t n) {
  require_positive(n, "optimal_shape");
  auto root = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  // division keeps the comparisons clear of overflow near INT64_MAX
  while (root > n / root) --root;
  while (root + 1 <= n / (root + 1)) ++root;
  const std::int64_t side = root * root == n ? root : root + 1;
  return {side, side};
}

std::int64_t influence_divergence(const InfluenceDispersionTree& tree) {
  const auto n = static_cast<std::int64_t>(tree.citation_count());
  if (n == 0) return 0;
  return idi(tree) - ideal_idi(n);
}

double nid(const InfluenceDispersionTree& tree) {
  const auto n = static_cast<std::int64_t>(tree.citation_count());
  if (n == 0) throw std::domain_error("NID is undefined for an uncited paper");
  const std::int64_t span = idi_max(n) - idi_min(n);
  if (span == 0) return 0.0;
  return static_cast<double>(influence_divergence(tree)) / static_cast<double>(span);
}

const char* MetricsReport::csv_header() { return "paper_id,n,d,b,idi,idi_min,idi_max,id,nid"; }

std::string MetricsReport::to_csv_row() const {
  std::string row = paper_id;
  for (std::int64_t v : {n, static_cast<std::int64_t>(depth), static_cast<std::int64_t>(breadth),
                         idi, idi_min, idi_max, influence_divergence}) {
    row += ',';
    row += std::to_string(v);
  }
  row += ',';
  row += format_real(nid);
  return row;
}

std::string MetricsReport::to_json() const {
  nlohmann::ordered_json j;
  j["paper_id"] = paper_id;
  j["n"] = n;
  j["d"] = depth;
  j["b"] = breadth;
  j["idi"] = idi;
  j["idi_min"] = idi_min;
  j["idi_max"] = idi_max;
  j["ideal_idi"] = ideal_idi;
  j["id"] = influence_divergence;
  j["nid"] = nid;
  return j.dump();
}

std::optional<MetricsReport> compute_metrics(std::string paper_id,
                                             const InfluenceDispersionTree& tree) {
  const auto n = static_cast<std::int64_t>(tree.citation_count());
  if (n == 0) return std::nullopt;
  const Summary s = summarize(tree);
  MetricsReport r;
  r.paper_id = std::move(paper_id);
  r.n = n;
  r.depth = s.depth;
  r.breadth = s.breadth;
  r.idi = s.idi;
  r.idi_min = idi_min(n);
  r.idi_max = idi_max(n);
  r.ideal_idi = ideal_idi(n);
  r.influence_divergence = s.idi - r.ideal_idi;
  const std::int64_t span = r.idi_max - r.idi_min;
  r.nid = span == 0 ? 0.0 : static_cast<double>(r.influence_divergence) / static_cast<double>(span);
  return r;
}

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  std::array<char, 64> buf;
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), result.ptr);
}

}  // namespace idtkit
