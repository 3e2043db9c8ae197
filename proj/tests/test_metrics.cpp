#include <cmath>
#include <random>

#include "doctest.h"
#include "idtkit/metrics.hpp"
#include "idtkit/synth.hpp"
#include "support.hpp"

using namespace idtkit;

TEST_CASE("idi bounds for small n") {
  CHECK(idi_max(1) == 1);
  CHECK(idi_max(2) == 2);
  CHECK(idi_max(3) == 4);
  CHECK(idi_max(4) == 6);
  CHECK(idi_max(5) == 9);
  CHECK(idi_min(5) == 5);
  CHECK(ideal_idi(5) == 5);
  CHECK_THROWS_AS(idi_max(0), std::domain_error);
  CHECK_THROWS_AS(idi_min(0), std::domain_error);
}

TEST_CASE("idi_max equals the best leaf count split") {
  // A tree with L leaves has IDI at most L * (n - L + 1).
  for (std::int64_t n = 1; n <= 2000; ++n) {
    std::int64_t best = 0;
    for (std::int64_t leaves = 1; leaves <= n; ++leaves) best = std::max(best, leaves * (n - leaves + 1));
    CHECK(idi_max(n) == best);
  }
}

TEST_CASE("optimal shape") {
  CHECK(optimal_shape(1) == Shape{1, 1});
  CHECK(optimal_shape(4) == Shape{2, 2});
  CHECK(optimal_shape(5) == Shape{3, 3});
  CHECK(optimal_shape(10) == Shape{4, 4});
  for (std::int64_t k = 1; k < 3000; ++k) {
    CHECK(optimal_shape(k * k) == Shape{k, k});
    CHECK(optimal_shape(k * k + 1) == Shape{k + 1, k + 1});
  }
  const std::int64_t big = 3037000499LL;
  CHECK(optimal_shape(big * big) == Shape{big, big});
}

TEST_CASE("NID of the two extremes") {
  // handle of 2, three bristles: the maximal tree for n = 5
  const auto broom = InfluenceDispersionTree::from_parents({-1, 0, 1, 2, 2, 2});
  CHECK(idi(broom) == 9);
  CHECK(influence_divergence(broom) == 4);
  CHECK(nid(broom) == doctest::Approx(1.0));
  const auto chain = InfluenceDispersionTree::from_parents({-1, 0, 1, 2, 3, 4});
  CHECK(nid(chain) == 0.0);
}

TEST_CASE("NID is zero when the span is empty and undefined without citations") {
  CHECK(nid(InfluenceDispersionTree::from_parents({-1, 0})) == 0.0);
  CHECK(nid(InfluenceDispersionTree::from_parents({-1, 0, 0})) == 0.0);
  CHECK(nid(InfluenceDispersionTree::from_parents({-1, 0, 1})) == 0.0);
  CHECK_THROWS_AS(nid(InfluenceDispersionTree::from_parents({-1})), std::domain_error);
  CHECK_FALSE(compute_metrics("x", InfluenceDispersionTree::from_parents({-1})).has_value());
}

TEST_CASE("idi matches a direct leaf walk on random trees") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 200);
    std::vector<std::int32_t> parent{-1};
    for (int v = 1; v <= n; ++v) parent.push_back(static_cast<std::int32_t>(rng() % v));
    const auto t = InfluenceDispersionTree::from_parents(parent);
    const auto value = idi(t);
    CHECK(value == testing::naive_idi(parent));
    CHECK(value >= idi_min(n));
    CHECK(value <= idi_max(n));
    const double v = nid(t);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("metrics report formats") {
  const auto t = InfluenceDispersionTree::from_parents({-1, 0, 1, 2, 2, 2});
  const auto r = compute_metrics("paper", t);
  REQUIRE(r);
  CHECK(std::string(MetricsReport::csv_header()) == "paper_id,n,d,b,idi,idi_min,idi_max,id,nid");
  CHECK(r->to_csv_row() == "paper,5,3,3,9,5,9,4,1");
  CHECK(format_real(0.25) == "0.25");
  CHECK(format_real(1.0 / 3.0) == "0.3333333333333333");
  CHECK(format_real(std::nan("")) == "nan");
}
