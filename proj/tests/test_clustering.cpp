#include "ttp/clustering.hpp"

#include <random>

#include "doctest.h"
#include "support/test_oracles.hpp"
#include "ttp/oracles.hpp"
#include "ttp/shift.hpp"

using namespace ttp;
using namespace ttp::testing;

namespace {

struct ThinFixture {
  TreePosition pos;
  ThinResult result;
};

ThinFixture thin_identity_caterpillar(WeightedGraph graph) {
  auto g = share(std::move(graph));
  TreePosition pos = TreePosition::caterpillar(
      g, LinearOrdering::identity(g->vertex_count()));
  ThinConfig cfg;
  ThinResult result = thin(pos, cfg);
  return ThinFixture{std::move(pos), std::move(result)};
}

}  // namespace

TEST_CASE("the thin barbell position has exactly the bridge minimum") {
  auto fx = thin_identity_caterpillar(barbell());
  REQUIRE(fx.result.certified_thin);
  const auto minima = local_minima(fx.pos);
  REQUIRE(minima.size() == 1);
  CHECK(fx.pos.width(minima[0].edge) == doctest::Approx(1.0));
  // Witnesses are strictly wider and end at interior nodes.
  for (EdgeId w : {minima[0].witness_a, minima[0].witness_b}) {
    CHECK(fx.pos.width(w) > 1.0 + kDefaultEpsilon);
  }
}

TEST_CASE("no local minima on the star or any K4 position") {
  auto star = TreePosition::caterpillar(share(triangle()),
                                        LinearOrdering::identity(3));
  CHECK(local_minima(star).empty());

  oracles::for_each_position(share(k4()), [](TreePosition& pos) {
    CHECK(local_minima(pos).empty());
  });
}

TEST_CASE("clusters from the barbell minimum") {
  auto fx = thin_identity_caterpillar(barbell());
  const auto minima = local_minima(fx.pos);
  REQUIRE(minima.size() == 1);
  const auto pair =
      clusters_from_minimum(fx.pos, minima[0], fx.result.certified_thin);
  CHECK(pair.boundary == fx.pos.width(minima[0].edge));
  auto a = pair.cluster_a;
  auto b = pair.cluster_b;
  if (a.front() != 0) std::swap(a, b);
  CHECK(a == std::vector<VertexId>{0, 1, 2});
  CHECK(b == std::vector<VertexId>{3, 4, 5});

  CHECK_THROWS_AS(clusters_from_minimum(fx.pos, minima[0], false), Error);
  LocalMinEdge not_minimum;
  not_minimum.edge = minima[0].edge == 0 ? 1 : 0;
  CHECK_THROWS_AS(clusters_from_minimum(fx.pos, not_minimum, true), Error);
}

TEST_CASE("pinch check accepts the barbell triangles") {
  const auto g = barbell();
  const std::vector<VertexId> a{0, 1, 2};
  CHECK(!verify_pinch_cluster(g, a, 3));
}

TEST_CASE("pinch check on unit path prefixes") {
  const auto g = path4();
  // {a}: removals would empty the set and are skipped; additions never dip.
  CHECK(!verify_pinch_cluster(g, std::vector<VertexId>{0}, 3));
  CHECK(!verify_pinch_cluster(g, std::vector<VertexId>{0, 1}, 3));
  CHECK_THROWS_AS(verify_pinch_cluster(g, std::vector<VertexId>{}, 3), Error);
  CHECK_THROWS_AS(
      verify_pinch_cluster(g, std::vector<VertexId>{0, 1, 2, 3}, 3), Error);
}

TEST_CASE("pinch check finds a two-step monotone descent") {
  // a-x1 (1), x1-x2 (1), x2-t (0.5): adding x1 to {a} keeps the boundary at
  // 1, adding x2 then drops it to 0.5 with no raise in between.
  const auto g = make_graph(
      4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 0.5}});
  const auto cex = verify_pinch_cluster(g, std::vector<VertexId>{0}, 3);
  REQUIRE(cex.has_value());
  CHECK(cex->adding);
  CHECK(cex->sequence == std::vector<VertexId>{1, 2});
  CHECK(cex->final_boundary == doctest::Approx(0.5));
}

TEST_CASE("enumeration budget errors are explicit") {
  const auto g = barbell();
  CHECK_THROWS_AS(
      verify_pinch_cluster(g, std::vector<VertexId>{0, 1, 2}, 3, 1e-9, 2),
      BudgetError);
}

TEST_CASE("cluster report aggregates minima") {
  auto fx = thin_identity_caterpillar(barbell());
  const auto report = extract_all_clusters(fx.pos, fx.result.certified_thin);
  CHECK(report.certified_thin);
  REQUIRE(report.pairs.size() == 1);
  CHECK(report.pairs[0].boundary == doctest::Approx(1.0));
  CHECK(report.profile.widths() == fx.pos.width_profile().widths());

  auto k4fx = thin_identity_caterpillar(k4());
  const auto empty_report =
      extract_all_clusters(k4fx.pos, k4fx.result.certified_thin);
  CHECK(empty_report.pairs.empty());

  CHECK_THROWS_AS(extract_all_clusters(fx.pos, false), Error);
}

TEST_CASE("report boundaries are sorted nondecreasing") {
  std::mt19937_64 rng(23);
  for (int round = 0; round < 10; ++round) {
    auto g = share(oracles::random_graph(7, rng(), 0.4));
    auto pos = TreePosition::random(g, rng());
    ThinConfig cfg;
    const auto result = thin(pos, cfg);
    const auto report = extract_all_clusters(pos, result.certified_thin);
    for (std::size_t i = 1; i < report.pairs.size(); ++i) {
      CHECK(report.pairs[i - 1].boundary <= report.pairs[i].boundary);
    }
  }
}

TEST_CASE("desk-scale pinch property check on small random graphs") {
  std::mt19937_64 rng(29);
  for (int round = 0; round < 8; ++round) {
    const std::size_t n = 4 + rng() % 3;  // up to 6
    auto g = share(oracles::random_graph(n, rng()));
    auto pos = TreePosition::random(g, rng());
    ThinConfig cfg;
    const auto result = thin(pos, cfg);
    for (const LocalMinEdge& m : local_minima(pos)) {
      const auto pair = clusters_from_minimum(pos, m, result.certified_thin);
      CHECK(!verify_pinch_cluster(*g, pair.cluster_a, n - 1));
    }
  }
}
