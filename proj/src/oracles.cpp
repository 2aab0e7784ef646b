#include "ttp/oracles.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "ttp/clustering.hpp"
#include "ttp/shift.hpp"
#include "ttp/tilo.hpp"

namespace ttp::oracles {

std::uint64_t count_shapes(std::size_t n) {
  if (n < 2) return 0;
  if (n <= 3) return 1;
  std::uint64_t total = 1;
  for (std::size_t k = 3; k < n; ++k) {
    total *= 2 * k - 3;  // edges available when attaching leaf k
  }
  return total;
}

namespace {

struct ShapeEnumerator {
  std::shared_ptr<const WeightedGraph> graph;
  const std::function<void(TreePosition&)>& visit;
  std::size_t n;
  std::size_t node_count;
  std::vector<TreeEdgeRec> edges;

  void emit() {
    RawTree raw;
    raw.node_count = node_count;
    raw.edges = edges;
    raw.leaf_of_vertex.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
      raw.leaf_of_vertex[v] = static_cast<NodeId>(v);
    }
    TreePosition pos = TreePosition::from_raw(graph, raw);
    visit(pos);
  }

  void extend(std::size_t next_leaf) {
    if (next_leaf == n) {
      emit();
      return;
    }
    const std::size_t edge_count = edges.size();
    for (std::size_t host = 0; host < edge_count; ++host) {
      const NodeId split = static_cast<NodeId>(node_count);
      const NodeId old_b = edges[host].b;
      edges[host].b = split;
      edges.push_back(TreeEdgeRec{split, old_b});
      edges.push_back(TreeEdgeRec{static_cast<NodeId>(next_leaf), split});
      ++node_count;
      extend(next_leaf + 1);
      --node_count;
      edges.pop_back();
      edges.pop_back();
      edges[host].b = old_b;
    }
  }
};

}  // namespace

void for_each_position(std::shared_ptr<const WeightedGraph> graph,
                       const std::function<void(TreePosition&)>& visit) {
  const std::size_t n = graph->vertex_count();
  if (n < 2) throw Error("shape enumeration requires at least two vertices");
  if (n == 2) {
    RawTree raw;
    raw.node_count = 2;
    raw.edges = {TreeEdgeRec{0, 1}};
    raw.leaf_of_vertex = {0, 1};
    TreePosition pos = TreePosition::from_raw(std::move(graph), raw);
    visit(pos);
    return;
  }
  ShapeEnumerator en{graph, visit, n, n + 1, {}};
  const NodeId hub = static_cast<NodeId>(n);
  en.edges = {TreeEdgeRec{0, hub}, TreeEdgeRec{1, hub}, TreeEdgeRec{2, hub}};
  en.extend(3);
}

std::vector<std::uint64_t> shape_key(const TreePosition& pos) {
  const std::size_t n = pos.leaf_count();
  if (n > 64) throw Error("shape keys support at most 64 leaves");
  std::vector<std::uint64_t> key;
  key.reserve(pos.edge_count());
  for (EdgeId e = 0; e < pos.edge_count(); ++e) {
    const auto mask = pos.side_leaf_mask(e, pos.edge(e).a);
    std::uint64_t bits = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (mask[v]) bits |= std::uint64_t(1) << v;
    }
    if (bits & 1) bits = ~bits & ((std::uint64_t(1) << n) - 1);
    key.push_back(bits);
  }
  std::sort(key.begin(), key.end());
  return key;
}

WidthProfile brute_force_min_profile(std::shared_ptr<const WeightedGraph> graph,
                                     double eps) {
  WidthProfile best;
  bool first = true;
  for_each_position(std::move(graph), [&](TreePosition& pos) {
    WidthProfile profile = pos.width_profile();
    if (first || profile.thinner_than(best, eps)) {
      best = std::move(profile);
      first = false;
    }
  });
  return best;
}

WeightedGraph random_graph(std::size_t n, std::uint64_t seed,
                           double edge_probability) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> weight(0.5, 2.0);
  std::vector<WeightedEdge> edges;
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) {
      if (unit(rng) < edge_probability) {
        edges.push_back(WeightedEdge{u, v, weight(rng)});
      }
    }
  }
  if (edges.empty()) edges.push_back(WeightedEdge{0, 1, 1.0});
  return WeightedGraph::from_edge_list(n, edges);
}

void SuiteResult::merge_failure(const std::string& msg) {
  ++failures;
  if (messages.size() < 10) messages.push_back(msg);
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = seed ^ (a * 0x9e3779b97f4a7c15ull) ^ (b * 0xbf58476d1ce4e5b9ull);
  h ^= h >> 31;
  h *= 0x94d049bb133111ebull;
  h ^= h >> 29;
  return h;
}

void run_correspondence_checks(const TreePosition& pos, const BranchShift& m,
                               double eps, const std::string& tag,
                               SuiteResult& result) {
  ++result.instances;
  const CheckResult width_check = check_width_equivalence(pos, m.x, m.y, eps);
  if (!width_check.ok) {
    result.merge_failure(tag + " width: " + width_check.mismatches.front());
  }
  const CheckResult quotient_check = check_quotient_invariance(pos, m.x, m.y, eps);
  if (!quotient_check.ok) {
    result.merge_failure(tag + " quotient: " + quotient_check.mismatches.front());
  }
  const CheckResult cyclic_check = check_cyclic_correspondence(pos, m.x, m.y);
  if (!cyclic_check.ok) {
    result.merge_failure(tag + " ordering: " + cyclic_check.mismatches.front());
  }
  const CheckResult slope_check = check_slope_translation(pos, m.x, m.y, eps);
  if (!slope_check.ok) {
    result.merge_failure(tag + " slope: " + slope_check.mismatches.front());
  }
}

template <typename PerInstance>
void over_exhaustive_family(std::size_t max_exhaustive_n,
                            std::size_t graphs_per_size, std::uint64_t seed,
                            const PerInstance& fn) {
  for (std::size_t n = 4; n <= max_exhaustive_n; ++n) {
    for (std::size_t gi = 0; gi < graphs_per_size; ++gi) {
      auto graph = std::make_shared<const WeightedGraph>(
          random_graph(n, mix_seed(seed, n, gi)));
      std::ostringstream tag;
      tag << "n=" << n << " graph=" << gi;
      for_each_position(graph, [&](TreePosition& pos) { fn(pos, tag.str()); });
    }
  }
}

struct RandomTriple {
  TreePosition pos;
  BranchShift shift;
};

template <typename Fn>
void over_random_triples(std::size_t triples, std::size_t max_n,
                         std::uint64_t seed, const Fn& fn) {
  std::mt19937_64 rng(seed);
  std::size_t produced = 0;
  while (produced < triples) {
    std::uniform_int_distribution<std::size_t> size_dist(4, max_n);
    const std::size_t n = size_dist(rng);
    auto graph = std::make_shared<const WeightedGraph>(
        random_graph(n, rng(), 0.3 + 0.5 * std::uniform_real_distribution<double>()(rng)));
    TreePosition pos = TreePosition::random(graph, rng());
    const auto candidates = candidate_shifts(pos);
    if (candidates.empty()) continue;
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    const BranchShift shift = candidates[pick(rng)];
    std::ostringstream tag;
    tag << "triple=" << produced << " n=" << n;
    fn(pos, shift, tag.str());
    ++produced;
  }
}

}  // namespace

SuiteResult run_equivalence_suite(std::size_t max_exhaustive_n,
                                  std::size_t graphs_per_size,
                                  std::uint64_t seed, double eps) {
  SuiteResult result;
  result.name = "quotient-correspondence-exhaustive";
  over_exhaustive_family(
      max_exhaustive_n, graphs_per_size, seed,
      [&](const TreePosition& pos, const std::string& tag) {
        for (const BranchShift& m : candidate_shifts(pos)) {
          run_correspondence_checks(pos, m, eps, tag, result);
        }
      });
  return result;
}

SuiteResult run_random_triple_suite(std::size_t triples, std::size_t max_n,
                                    std::uint64_t seed, double eps) {
  SuiteResult result;
  result.name = "quotient-correspondence-random";
  over_random_triples(triples, max_n, seed,
                      [&](const TreePosition& pos, const BranchShift& m,
                          const std::string& tag) {
                        run_correspondence_checks(pos, m, eps, tag, result);
                      });
  return result;
}

namespace {

void check_shift_consistency(const TreePosition& pos, const BranchShift& m,
                             double eps, const std::string& tag,
                             SuiteResult& result) {
  ++result.instances;
  const auto predicted = predicted_path_widths(pos, m);
  const std::vector<double> before = pos.width_cache();

  TreePosition copy = pos;
  apply_branch_shift(copy, m, eps);

  std::vector<std::uint8_t> on_path(pos.edge_count(), 0);
  for (const auto& [edge, w] : predicted) {
    on_path[edge] = 1;
    if (std::abs(copy.width(edge) - w) > eps) {
      std::ostringstream msg;
      msg << tag << " predicted width " << w << " vs actual "
          << copy.width(edge) << " at edge " << edge;
      result.merge_failure(msg.str());
    }
  }
  for (EdgeId e = 0; e < copy.edge_count(); ++e) {
    const double fresh = copy.recompute_width(e);
    if (std::abs(copy.width(e) - fresh) > eps) {
      std::ostringstream msg;
      msg << tag << " cache " << copy.width(e) << " vs recompute " << fresh
          << " at edge " << e;
      result.merge_failure(msg.str());
    }
    if (!on_path[e] && copy.width(e) != before[e]) {
      std::ostringstream msg;
      msg << tag << " off-path width changed at edge " << e;
      result.merge_failure(msg.str());
    }
  }
}

void check_scan_soundness(TreePosition& pos, double eps, const std::string& tag,
                          SuiteResult& result) {
  ++result.instances;
  ThinConfig cfg;
  cfg.epsilon = eps;
  const auto hit = scan_reducing_shift(pos, cfg);
  if (!hit) return;
  if (!find_improving_shift_exhaustive(pos, eps)) {
    result.merge_failure(tag + " scan hit but exhaustive check found nothing");
  }
  TreePosition copy = pos;
  const ShiftOutcome outcome = apply_branch_shift(copy, *hit, eps);
  if (!outcome.accepted) {
    std::ostringstream msg;
    msg << tag << " scan hit (" << hit->x << "->" << hit->y
        << ") did not strictly lower the profile";
    result.merge_failure(msg.str());
  }
}

}  // namespace

SuiteResult run_scan_soundness_suite(std::size_t max_exhaustive_n,
                                     std::size_t graphs_per_size,
                                     std::size_t triples, std::size_t max_n,
                                     std::uint64_t seed, double eps) {
  SuiteResult result;
  result.name = "scan-soundness-and-predictions";
  over_exhaustive_family(
      max_exhaustive_n, graphs_per_size, seed,
      [&](TreePosition& pos, const std::string& tag) {
        check_scan_soundness(pos, eps, tag, result);
        for (const BranchShift& m : candidate_shifts(pos)) {
          check_shift_consistency(pos, m, eps, tag, result);
        }
      });
  over_random_triples(triples, max_n, seed + 1,
                      [&](TreePosition& pos, const BranchShift& m,
                          const std::string& tag) {
                        check_scan_soundness(pos, eps, tag, result);
                        check_shift_consistency(pos, m, eps, tag, result);
                      });
  return result;
}

namespace {

double definitional_slope(const TreePosition& pos, EdgeId e, EdgeId g) {
  const auto r_e = pos.passes_through(e);
  const auto r_g = pos.passes_through(g);
  std::set<std::pair<VertexId, VertexId>> in_e;
  for (const WeightedEdge& edge : r_e) in_e.insert({edge.u, edge.v});
  double only_g = 0.0;
  double both = 0.0;
  for (const WeightedEdge& edge : r_g) {
    if (in_e.count({edge.u, edge.v})) {
      both += edge.weight;
    } else {
      only_g += edge.weight;
    }
  }
  return only_g - both;
}

void check_identities(const TreePosition& pos, double eps,
                      const std::string& tag, SuiteResult& result) {
  ++result.instances;
  // Slope against its set-difference definition, all ordered pairs.
  for (EdgeId e = 0; e < pos.edge_count(); ++e) {
    for (EdgeId g = 0; g < pos.edge_count(); ++g) {
      if (e == g) continue;
      const double via_adjacency = pos.slope(e, g);
      const double via_sets = definitional_slope(pos, e, g);
      if (std::abs(via_adjacency - via_sets) > eps) {
        std::ostringstream msg;
        msg << tag << " slope routes disagree at (" << e << "," << g
            << "): " << via_adjacency << " vs " << via_sets;
        result.merge_failure(msg.str());
      }
    }
  }
  // Width/adjacency/slope relations at every interior vertex.
  for (NodeId node = 0; node < pos.node_count(); ++node) {
    if (!pos.is_interior(node)) continue;
    const TreeNode& rec = pos.node(node);
    const std::array<EdgeId, 3> inc{rec.edges[0], rec.edges[1], rec.edges[2]};
    for (int a = 0; a < 3; ++a) {
      const EdgeId e = inc[a];
      const EdgeId f = inc[(a + 1) % 3];
      const EdgeId g = inc[(a + 2) % 3];
      const double lhs1 = pos.width(e);
      const double rhs1 = pos.adjacency_weight(e, f) + pos.adjacency_weight(e, g);
      const double rhs2 =
          pos.width(f) + pos.width(g) - 2.0 * pos.adjacency_weight(f, g);
      const double s_fg = pos.slope(f, g);
      const double alt1 = pos.adjacency_weight(g, e) - pos.adjacency_weight(f, g);
      const double alt2 = pos.width(e) - pos.width(f);
      if (std::abs(lhs1 - rhs1) > eps || std::abs(lhs1 - rhs2) > eps ||
          std::abs(s_fg - alt1) > eps || std::abs(s_fg - alt2) > eps) {
        std::ostringstream msg;
        msg << tag << " interior-vertex identity failed at node " << node;
        result.merge_failure(msg.str());
      }
    }
  }
}

}  // namespace

SuiteResult run_identity_suite(std::size_t max_exhaustive_n,
                               std::size_t graphs_per_size, std::size_t triples,
                               std::size_t max_n, std::uint64_t seed,
                               double eps) {
  SuiteResult result;
  result.name = "slope-and-interior-identities";
  over_exhaustive_family(max_exhaustive_n, graphs_per_size, seed,
                         [&](const TreePosition& pos, const std::string& tag) {
                           check_identities(pos, eps, tag, result);
                         });
  over_random_triples(triples, max_n, seed + 1,
                      [&](const TreePosition& pos, const BranchShift&,
                          const std::string& tag) {
                        check_identities(pos, eps, tag, result);
                      });
  return result;
}

namespace {

// Two planted blocks with a sparse crossing: reliably develops the
// local-minimum edges the pinch property concerns, unlike uniform random graphs.
WeightedGraph planted_pair(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> weight(0.8, 1.2);
  const std::size_t half = n / 2;
  std::vector<WeightedEdge> edges;
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) {
      const bool same = (u < half) == (v < half);
      const double p = same ? 0.95 : 0.2;
      if (unit(rng) < p) edges.push_back(WeightedEdge{u, v, weight(rng)});
    }
  }
  if (edges.empty()) edges.push_back(WeightedEdge{0, 1, 1.0});
  return WeightedGraph::from_edge_list(n, edges);
}

}  // namespace

SuiteResult run_pinch_property_suite(std::size_t graphs, std::size_t max_n,
                                    std::uint64_t seed, double eps) {
  SuiteResult result;
  result.name = "pinch-cluster-property";
  std::mt19937_64 rng(seed);
  // A local-minimum edge needs interior nodes beyond both endpoints, which
  // first happens at six leaves; smaller sizes are structurally vacuous.
  const std::size_t min_n = std::min<std::size_t>(6, max_n);
  for (std::size_t gi = 0; gi < graphs; ++gi) {
    std::uniform_int_distribution<std::size_t> size_dist(min_n, max_n);
    const std::size_t n = size_dist(rng);
    const std::uint64_t graph_seed = rng();
    const double density = 0.3 + 0.5 * std::uniform_real_distribution<double>()(rng);
    auto graph = std::make_shared<const WeightedGraph>(
        gi % 2 == 0 ? planted_pair(n, graph_seed)
                    : random_graph(n, graph_seed, density));
    TreePosition pos = TreePosition::random(graph, rng());
    ThinConfig cfg;
    cfg.epsilon = eps;
    const ThinResult thin_result = thin(pos, cfg);
    const auto minima = local_minima(pos, eps);
    for (const LocalMinEdge& m : minima) {
      ++result.instances;
      const PinchClusterPair pair =
          clusters_from_minimum(pos, m, thin_result.certified_thin, eps);
      const auto cex =
          verify_pinch_cluster(*graph, pair.cluster_a, n - 1, eps);
      if (cex) {
        std::ostringstream msg;
        msg << "graph=" << gi << " n=" << n << " edge=" << m.edge
            << " violating sequence of length " << cex->sequence.size();
        result.merge_failure(msg.str());
      }
    }
  }
  return result;
}

}  // namespace ttp::oracles
