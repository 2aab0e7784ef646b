#include "ttp/io.hpp"

#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "support/test_oracles.hpp"
#include "ttp/oracles.hpp"

using namespace ttp;
using namespace ttp::testing;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("thintree_test_" + name);
}

bool same_labeled_graph(const io::LabeledGraph& a, const io::LabeledGraph& b) {
  if (a.graph.vertex_count() != b.graph.vertex_count()) return false;
  for (const WeightedEdge& e : a.graph.edges()) {
    const auto u = b.vertex_by_label(a.labels[e.u]);
    const auto v = b.vertex_by_label(a.labels[e.v]);
    if (!u || !v) return false;
    if (b.graph.pair_weight(*u, *v) != e.weight) return false;
  }
  return a.graph.edge_count() == b.graph.edge_count();
}

}  // namespace

TEST_CASE("edge list parsing") {
  const auto g = io::parse_edge_list("a\tb\t1.5\n# comment\nb\tc\t2\n");
  CHECK(g.graph.vertex_count() == 3);
  CHECK(g.labels == std::vector<std::string>{"a", "b", "c"});
  CHECK(g.graph.pair_weight(0, 1) == 1.5);
  CHECK(g.graph.pair_weight(1, 2) == 2.0);
}

TEST_CASE("edge list rejections carry line numbers") {
  CHECK_THROWS_WITH_AS(io::parse_edge_list(""), "<memory>: no edges",
                       ParseError);
  CHECK_THROWS_AS(io::parse_edge_list("a\tb\n"), ParseError);
  CHECK_THROWS_AS(io::parse_edge_list("a\tb\t-1\n"), ParseError);
  CHECK_THROWS_AS(io::parse_edge_list("a\ta\t1\n"), ParseError);
  try {
    io::parse_edge_list("a\tb\t1\na\tb\tzz\n", "f.tsv");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("f.tsv:2") != std::string::npos);
  }
}

TEST_CASE("duplicate pairs merge") {
  const auto g = io::parse_edge_list("a\tb\t1\nb\ta\t0.25\n");
  CHECK(g.graph.edge_count() == 1);
  CHECK(g.graph.pair_weight(0, 1) == 1.25);
}

TEST_CASE("edge list round trip preserves the merged graph") {
  const auto fixture = io::barbell_fixture();
  const std::string text = io::to_edge_list_string(fixture);
  const auto reloaded = io::parse_edge_list(text);
  CHECK(same_labeled_graph(fixture, reloaded));
  // Canonical form is idempotent byte for byte.
  CHECK(io::to_edge_list_string(reloaded) == text);

  const auto path = temp_file("roundtrip.tsv");
  io::save_edge_list(fixture, path);
  const auto from_disk = io::load_edge_list(path);
  CHECK(same_labeled_graph(fixture, from_disk));
  std::filesystem::remove(path);
}

TEST_CASE("barbell file fixture loads") {
  const auto g = io::parse_edge_list(io::to_edge_list_string(io::barbell_fixture()));
  CHECK(g.graph.vertex_count() == 6);
  CHECK(g.graph.edge_count() == 7);
}

TEST_CASE("matrix market symmetric real") {
  const std::string text =
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "% unit triangle\n"
      "3 3 3\n"
      "2 1 1.0\n"
      "3 1 1.0\n"
      "3 2 1.0\n";
  const auto g = io::parse_matrix_market(text);
  CHECK(g.graph.vertex_count() == 3);
  CHECK(g.graph.edge_count() == 3);
  CHECK(g.graph.pair_weight(0, 1) == 1.0);
}

TEST_CASE("matrix market pattern, zeros, and diagonal entries") {
  const std::string text =
      "%%MatrixMarket matrix coordinate pattern symmetric\n"
      "3 3 2\n"
      "2 1\n"
      "3 2\n";
  const auto g = io::parse_matrix_market(text);
  CHECK(g.graph.edge_count() == 2);
  CHECK(g.graph.pair_weight(0, 1) == 1.0);

  const std::string with_zero =
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "3 3 3\n"
      "2 1 0.0\n"
      "3 3 5.0\n"
      "3 1 2.0\n";
  const auto gz = io::parse_matrix_market(with_zero);
  CHECK(gz.graph.edge_count() == 1);  // zero and diagonal entries skipped
  CHECK(gz.graph.pair_weight(0, 2) == 2.0);
}

TEST_CASE("matrix market rejects unsupported headers") {
  CHECK_THROWS_AS(io::parse_matrix_market(
                      "%%MatrixMarket matrix coordinate real general\n2 2 1\n"
                      "2 1 1.0\n"),
                  ParseError);
  CHECK_THROWS_AS(io::parse_matrix_market(
                      "%%MatrixMarket matrix array real symmetric\n"),
                  ParseError);
  CHECK_THROWS_AS(io::parse_matrix_market(
                      "%%MatrixMarket matrix coordinate complex symmetric\n"
                      "2 2 1\n2 1 1.0 0.0\n"),
                  ParseError);
  // Upper-triangle entry in a symmetric file.
  CHECK_THROWS_AS(io::parse_matrix_market(
                      "%%MatrixMarket matrix coordinate real symmetric\n"
                      "3 3 1\n1 2 1.0\n"),
                  ParseError);
}

TEST_CASE("dot export is deterministic and labels widths") {
  const auto fixture = io::barbell_fixture();
  auto g = share(fixture.graph);
  auto pos = TreePosition::caterpillar(g, LinearOrdering::identity(6));
  const std::string dot = io::to_dot_string(pos, fixture.labels);
  CHECK(dot == io::to_dot_string(pos, fixture.labels));
  CHECK(dot.find("graph tree_position {") == 0);
  CHECK(dot.find("label=\"1\"") != std::string::npos);   // the bridge width
  CHECK(dot.find("label=\"3\"") != std::string::npos);   // a degree-3 leaf edge
  CHECK(dot.find("shape=circle") != std::string::npos);  // interior nodes

  auto star = TreePosition::caterpillar(share(triangle()),
                                        LinearOrdering::identity(3));
  const std::string star_dot = io::to_dot_string(star, {"a", "b", "c"});
  CHECK(star_dot.find("n3") != std::string::npos);  // 4 nodes: 3 leaves + hub
  const std::vector<EdgeId> highlight{0};
  const std::string bold =
      io::to_dot_string(star, {"a", "b", "c"}, highlight);
  CHECK(bold.find("style=bold") != std::string::npos);
}

TEST_CASE("planted generator determinism and extremes") {
  const std::vector<std::size_t> blocks{3, 3};
  const auto a = io::gen_planted(9, blocks, 0.7, 0.2, 1.0);
  const auto b = io::gen_planted(9, blocks, 0.7, 0.2, 1.0);
  CHECK(a.edges().size() == b.edges().size());
  for (std::size_t i = 0; i < a.edges().size(); ++i) {
    CHECK(a.edges()[i].u == b.edges()[i].u);
    CHECK(a.edges()[i].v == b.edges()[i].v);
  }

  // p_in = p_out = 1: the complete graph.
  const auto complete = io::gen_planted(1, blocks, 1.0, 1.0, 2.0);
  CHECK(complete.edge_count() == 15);
  CHECK(complete.total_weight() == 30.0);

  // p_out = 0: no cross edges, hence disconnected blocks.
  const auto split = io::gen_planted(1, blocks, 1.0, 0.0, 1.0);
  CHECK(split.edge_count() == 6);
  CHECK(split.pair_weight(2, 3) == 0.0);
}

TEST_CASE("a planted seed reproduces the barbell fixture exactly") {
  // Frozen by scanning seeds for blocks=[3,3], p_in=1, p_out=1/9: the draw
  // pattern that keeps exactly the (2,3) bridge.
  const std::vector<std::size_t> blocks{3, 3};
  bool found = false;
  std::uint64_t found_seed = 0;
  for (std::uint64_t seed = 0; seed < 4000 && !found; ++seed) {
    const auto g = io::gen_planted(seed, blocks, 1.0, 1.0 / 9.0, 1.0);
    if (g.edge_count() == 7 && g.pair_weight(2, 3) == 1.0) {
      found = true;
      found_seed = seed;
    }
  }
  REQUIRE(found);
  const auto g = io::gen_planted(found_seed, blocks, 1.0, 1.0 / 9.0, 1.0);
  const auto fixture = io::barbell_fixture();
  CHECK(g.edges().size() == fixture.graph.edges().size());
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    CHECK(g.edges()[i].u == fixture.graph.edges()[i].u);
    CHECK(g.edges()[i].v == fixture.graph.edges()[i].v);
  }
}

TEST_CASE("run reports are byte deterministic") {
  const auto fixture = io::barbell_fixture();
  auto g = share(fixture.graph);

  const auto build = [&](bool parallel, unsigned workers) {
    TreePosition pos = TreePosition::caterpillar(
        g, LinearOrdering({0, 3, 1, 4, 2, 5}));
    ThinConfig cfg;
    cfg.seed = 7;
    cfg.parallel_scan = parallel;
    cfg.workers = workers;
    const ThinResult result = thin(pos, cfg);
    io::RunReportRequest req;
    req.command = "thin";
    req.input_path = "barbell.tsv";
    req.input_digest = io::digest_hex(io::to_edge_list_string(fixture));
    req.graph = &fixture;
    req.config = &cfg;
    req.result = &result;
    req.position = &pos;
    return io::build_run_report(req);
  };

  const std::string first = build(false, 0);
  CHECK(first == build(false, 0));
  // Identical bytes across worker counts under the parallel scan.
  const std::string par1 = build(true, 1);
  CHECK(par1 == build(true, 2));
  CHECK(par1 == build(true, 8));
  CHECK(first.find("\"digest\"") != std::string::npos);
}

TEST_CASE("digest is stable") {
  CHECK(io::digest_hex("") == "fnv1a64:cbf29ce484222325");
  CHECK(io::digest_hex("abc") == io::digest_hex("abc"));
  CHECK(io::digest_hex("abc") != io::digest_hex("abd"));
}
