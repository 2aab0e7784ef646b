// Command-line driver: thin positions, cluster extraction, oracle runs and
// synthetic fixtures.
//
// Exit codes: 0 success, 1 usage, 2 parse error, 3 oracle failure,
// 4 iteration cap.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ttp/clustering.hpp"
#include "ttp/io.hpp"
#include "ttp/oracles.hpp"
#include "ttp/shift.hpp"
#include "ttp/tilo.hpp"

namespace {

using namespace ttp;

struct RunOptions {
  std::string input;
  std::string format = "edgelist";
  std::string init = "caterpillar";
  std::string order;
  std::string scan = "first";
  std::uint64_t seed = 0;
  double epsilon = kDefaultEpsilon;
  std::size_t max_iters = 100000;
  bool parallel = false;
  unsigned workers = 0;
  std::string dot_out;
  std::string json_out;
};

void add_run_options(CLI::App* cmd, RunOptions& opt) {
  cmd->add_option("--input", opt.input, "input graph file")->required();
  cmd->add_option("--format", opt.format, "input format")
      ->check(CLI::IsMember({"edgelist", "mtx"}));
  cmd->add_option("--init", opt.init, "initial position")
      ->check(CLI::IsMember({"caterpillar", "random"}));
  cmd->add_option("--order", opt.order,
                  "comma-separated vertex labels for the caterpillar spine");
  cmd->add_option("--seed", opt.seed, "seed for random initialization");
  cmd->add_option("--epsilon", opt.epsilon, "width comparison tolerance");
  cmd->add_option("--scan", opt.scan, "scan strategy")
      ->check(CLI::IsMember({"first", "best"}));
  cmd->add_option("--max-iters", opt.max_iters, "iteration cap");
  cmd->add_flag("--parallel", opt.parallel, "evaluate candidates concurrently");
  cmd->add_option("--workers", opt.workers, "worker count for --parallel");
  cmd->add_option("--dot-out", opt.dot_out, "write the final tree as DOT");
  cmd->add_option("--json-out", opt.json_out, "write the run report ('-' = stdout)");
}

io::LabeledGraph load_input(const RunOptions& opt) {
  if (opt.format == "mtx") return io::load_matrix_market(opt.input);
  return io::load_edge_list(opt.input);
}

LinearOrdering parse_order(const std::string& spec, const io::LabeledGraph& g) {
  std::vector<VertexId> seq;
  std::stringstream in(spec);
  std::string token;
  while (std::getline(in, token, ',')) {
    const auto v = g.vertex_by_label(token);
    if (!v) throw Error("unknown vertex label in --order: '" + token + "'");
    seq.push_back(*v);
  }
  if (seq.size() != g.graph.vertex_count()) {
    throw Error("--order must list every vertex exactly once");
  }
  return LinearOrdering(std::move(seq));
}

ThinConfig make_config(const RunOptions& opt) {
  ThinConfig cfg;
  cfg.epsilon = opt.epsilon;
  cfg.scan = opt.scan == "best" ? ScanStrategy::BestImprovement
                                : ScanStrategy::FirstImprovement;
  cfg.init = opt.init == "random" ? InitKind::Random : InitKind::Caterpillar;
  cfg.seed = opt.seed;
  cfg.max_iterations = opt.max_iters;
  cfg.parallel_scan = opt.parallel;
  cfg.workers = opt.workers;
  cfg.validate();
  return cfg;
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

int run_pipeline(const RunOptions& opt, bool with_clusters) {
  const auto started = std::chrono::steady_clock::now();
  io::LabeledGraph input = load_input(opt);
  auto graph = std::make_shared<const WeightedGraph>(input.graph);
  const ThinConfig cfg = make_config(opt);

  TreePosition pos = [&] {
    if (cfg.init == InitKind::Random) {
      if (!opt.order.empty()) {
        throw Error("--order conflicts with --init random");
      }
      return TreePosition::random(graph, cfg.seed);
    }
    const LinearOrdering order =
        opt.order.empty() ? LinearOrdering::identity(graph->vertex_count())
                          : parse_order(opt.order, input);
    return TreePosition::caterpillar(graph, order);
  }();

  const ThinResult result = thin(pos, cfg);
  std::optional<ClusterReport> clusters;
  if (with_clusters) {
    clusters = extract_all_clusters(pos, result.certified_thin, cfg.epsilon);
  }

  io::RunReportRequest req;
  req.command = with_clusters ? "cluster" : "thin";
  req.input_path = opt.input;
  req.input_digest = io::digest_hex(io::to_edge_list_string(input));
  req.graph = &input;
  req.config = &cfg;
  req.result = &result;
  req.position = &pos;
  req.clusters = clusters ? &*clusters : nullptr;
  const std::string report = io::build_run_report(req);

  if (!opt.json_out.empty()) write_text(opt.json_out, report);
  if (!opt.dot_out.empty()) {
    std::vector<EdgeId> highlight;
    if (clusters) {
      for (const LocalMinEdge& m : clusters->local_minima) {
        highlight.push_back(m.edge);
      }
    }
    io::export_dot(pos, input.labels, opt.dot_out, highlight);
  }

  const WidthProfile profile = pos.width_profile();
  std::cout << "vertices: " << graph->vertex_count()
            << "  tree edges: " << pos.edge_count() << "\n";
  for (const TraceStep& step : result.trace) {
    std::cout << "step=" << step.index << " shift=" << step.shift.x << "->"
              << step.shift.y << " head=" << io::format_weight(step.head_before)
              << "->" << io::format_weight(step.head_after)
              << (step.via_exhaustive ? " exhaustive" : "") << "\n";
  }
  std::cout << "iterations: " << result.iterations
            << (result.certified_thin ? "  (certified thin)" : "") << "\n";
  std::cout << "final profile head: " << io::format_weight(profile.head())
            << "\n";
  if (clusters) {
    std::cout << "clusters: " << clusters->pairs.size() << "\n";
    for (const PinchClusterPair& p : clusters->pairs) {
      std::cout << "  edge " << p.edge << " boundary "
                << io::format_weight(p.boundary) << " |A|=" << p.cluster_a.size()
                << " |B|=" << p.cluster_b.size() << "\n";
    }
  }
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - started);
  std::cerr << "elapsed: " << elapsed.count() << " ms\n";
  return 0;
}

struct VerifyOptions {
  std::size_t oracle_n = 6;
  std::size_t graphs_per_size = 5;
  std::size_t triples = 100;
  std::size_t pinch_graphs = 15;
  std::uint64_t seed = 12345;
  double epsilon = kDefaultEpsilon;
};

int run_verify(const VerifyOptions& opt) {
  using oracles::SuiteResult;
  const std::size_t exhaustive_n = std::min<std::size_t>(opt.oracle_n, 6);
  std::vector<SuiteResult> suites;
  suites.push_back(oracles::run_equivalence_suite(exhaustive_n,
                                                  opt.graphs_per_size, opt.seed,
                                                  opt.epsilon));
  suites.push_back(oracles::run_random_triple_suite(opt.triples, 12, opt.seed,
                                                    opt.epsilon));
  suites.push_back(oracles::run_scan_soundness_suite(
      exhaustive_n, opt.graphs_per_size, opt.triples, 12, opt.seed, opt.epsilon));
  suites.push_back(oracles::run_identity_suite(exhaustive_n,
                                               opt.graphs_per_size, opt.triples,
                                               12, opt.seed, opt.epsilon));
  suites.push_back(oracles::run_pinch_property_suite(
      opt.pinch_graphs, std::min<std::size_t>(opt.oracle_n, 7), opt.seed,
      opt.epsilon));

  bool all_ok = true;
  for (const SuiteResult& s : suites) {
    std::cout << (s.ok() ? "PASS" : "FAIL") << "  " << s.name
              << "  instances=" << s.instances << "  seed=" << opt.seed << "\n";
    if (!s.ok()) {
      all_ok = false;
      for (const std::string& msg : s.messages) {
        std::cout << "      " << msg << "\n";
      }
    }
  }
  return all_ok ? 0 : 3;
}

struct GenOptions {
  std::string out;
  std::vector<std::size_t> blocks{3, 3};
  double p_in = 1.0;
  double p_out = 0.1;
  double weight = 1.0;
  std::uint64_t seed = 0;
  std::string preset;
};

int run_gen(const GenOptions& opt) {
  io::LabeledGraph out;
  if (opt.preset == "barbell") {
    out = io::barbell_fixture();
  } else {
    out.graph = io::gen_planted(opt.seed, opt.blocks, opt.p_in, opt.p_out,
                                opt.weight);
    for (std::size_t v = 0; v < out.graph.vertex_count(); ++v) {
      out.labels.push_back(std::to_string(v));
    }
  }
  if (out.graph.edge_count() == 0) {
    throw Error("generated graph has no edges; raise p_in/p_out");
  }
  io::save_edge_list(out, opt.out);
  std::cout << "wrote " << opt.out << " (" << out.graph.vertex_count()
            << " vertices, " << out.graph.edge_count() << " edges)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thin tree positions of weighted graphs"};
  app.require_subcommand(1);

  RunOptions thin_opt;
  CLI::App* thin_cmd = app.add_subcommand("thin", "thin a tree position");
  add_run_options(thin_cmd, thin_opt);

  RunOptions cluster_opt;
  CLI::App* cluster_cmd =
      app.add_subcommand("cluster", "thin, then extract pinch clusters");
  add_run_options(cluster_cmd, cluster_opt);

  VerifyOptions verify_opt;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run the cross-check oracle suites");
  verify_cmd->add_option("--oracle-n", verify_opt.oracle_n,
                         "largest exhaustive instance size");
  verify_cmd->add_option("--graphs-per-size", verify_opt.graphs_per_size,
                         "random graphs per size");
  verify_cmd->add_option("--triples", verify_opt.triples,
                         "random (graph, position, pair) instances");
  verify_cmd->add_option("--pinch-graphs", verify_opt.pinch_graphs,
                         "graphs for the pinch-cluster check");
  verify_cmd->add_option("--seed", verify_opt.seed, "suite seed");
  verify_cmd->add_option("--epsilon", verify_opt.epsilon, "tolerance");

  GenOptions gen_opt;
  CLI::App* gen_cmd = app.add_subcommand("gen", "write a synthetic fixture");
  gen_cmd->add_option("--out", gen_opt.out, "output path")->required();
  gen_cmd->add_option("--blocks", gen_opt.blocks, "planted block sizes")
      ->delimiter(',');
  gen_cmd->add_option("--p-in", gen_opt.p_in, "intra-block edge probability");
  gen_cmd->add_option("--p-out", gen_opt.p_out, "cross-block edge probability");
  gen_cmd->add_option("--weight", gen_opt.weight, "edge weight");
  gen_cmd->add_option("--seed", gen_opt.seed, "generator seed");
  gen_cmd->add_option("--preset", gen_opt.preset, "named fixture")
      ->check(CLI::IsMember({"barbell"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*thin_cmd) return run_pipeline(thin_opt, false);
    if (*cluster_cmd) return run_pipeline(cluster_opt, true);
    if (*verify_cmd) return run_verify(verify_opt);
    if (*gen_cmd) return run_gen(gen_opt);
  } catch (const ttp::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ttp::IterationCapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
