#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ttp/graph.hpp"
#include "ttp/tree_position.hpp"

namespace ttp::oracles {

// (2n-5)!!: the number of leaf-labeled 3-Cayley tree shapes on n leaves.
std::uint64_t count_shapes(std::size_t n);

// Visits every leaf-labeled shape exactly once (n >= 2).  Positions are built
// by sequential edge subdivision with widths recomputed from scratch, fully
// independent of the shift machinery.
void for_each_position(std::shared_ptr<const WeightedGraph> graph,
                       const std::function<void(TreePosition&)>& visit);

// Canonical key of a leaf-labeled shape: the sorted leaf-set bitmasks of the
// side of each edge not containing leaf 0.
std::vector<std::uint64_t> shape_key(const TreePosition& pos);

// Thinnest profile over every shape (brute force).
WidthProfile brute_force_min_profile(std::shared_ptr<const WeightedGraph> graph,
                                     double eps = kDefaultEpsilon);

// Deterministic test graph: edge probability and weights drawn from the seed;
// guaranteed at least one edge.
WeightedGraph random_graph(std::size_t n, std::uint64_t seed,
                           double edge_probability = 0.6);

struct SuiteResult {
  std::string name;
  std::size_t instances = 0;
  std::size_t failures = 0;
  std::vector<std::string> messages;  // first few failure details

  bool ok() const { return failures == 0; }
  void merge_failure(const std::string& msg);
};

// Quotient/ordering correspondence checks (widths, invariance, cyclic shift,
// slopes) over every shape and every ordered nonadjacent edge pair for each
// n in [4, max_exhaustive_n], on `graphs_per_size` seeded random graphs.
SuiteResult run_equivalence_suite(std::size_t max_exhaustive_n,
                                  std::size_t graphs_per_size,
                                  std::uint64_t seed, double eps);

// Same checks on random (graph, position, pair) triples with N <= max_n.
SuiteResult run_random_triple_suite(std::size_t triples, std::size_t max_n,
                                    std::uint64_t seed, double eps);

// Criteria-scan soundness and width-prediction consistency: for each instance
// every candidate move is applied on a copy; predictions must match the
// refreshed cache, the cache must match a from-scratch recomputation, and
// off-path widths must be bit-identical.  Scan hits must strictly lower the
// profile.
SuiteResult run_scan_soundness_suite(std::size_t max_exhaustive_n,
                                     std::size_t graphs_per_size,
                                     std::size_t triples, std::size_t max_n,
                                     std::uint64_t seed, double eps);

// Slope/adjacency identities: s(e,g) = b(g) - 2a(e,g) for all pairs, plus the
// width/adjacency/slope relations at every interior vertex.
SuiteResult run_identity_suite(std::size_t max_exhaustive_n,
                               std::size_t graphs_per_size, std::size_t triples,
                               std::size_t max_n, std::uint64_t seed, double eps);

// Pinch property at desk scale: thin random graphs (N <= max_n) to
// certified strong irreducibility and brute-force check every local-minimum
// cut with sequences up to N-1.
SuiteResult run_pinch_property_suite(std::size_t graphs, std::size_t max_n,
                                    std::uint64_t seed, double eps);

}  // namespace ttp::oracles
