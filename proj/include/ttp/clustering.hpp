#pragma once

#include <optional>
#include <vector>

#include "ttp/tree_position.hpp"

namespace ttp {

// Tree edge both of whose endpoints meet a strictly wider edge whose far
// endpoint is interior; the witnesses record one such edge per endpoint.
struct LocalMinEdge {
  EdgeId edge = kNoEdge;
  double width = 0.0;
  EdgeId witness_a = kNoEdge;  // at endpoint a of the edge
  EdgeId witness_b = kNoEdge;  // at endpoint b
};

struct PinchClusterPair {
  EdgeId edge = kNoEdge;
  std::vector<VertexId> cluster_a;
  std::vector<VertexId> cluster_b;
  double boundary = 0.0;
};

struct ClusterReport {
  bool certified_thin = false;
  std::vector<LocalMinEdge> local_minima;
  // One pair per local minimum, boundaries nondecreasing (ties by edge id).
  std::vector<PinchClusterPair> pairs;
  WidthProfile profile;
};

// All local-minimum edges, ascending by edge id.  Width-zero edges qualify
// whenever their neighbors do; callers may flag them downstream.
std::vector<LocalMinEdge> local_minima(const TreePosition& pos,
                                       double eps = kDefaultEpsilon);

// The two leaf sets cut off by a local-minimum edge of a certified thin
// position.  Rejects uncertified positions and edges that are not local
// minima.
PinchClusterPair clusters_from_minimum(const TreePosition& pos,
                                       const LocalMinEdge& e, bool certified,
                                       double eps = kDefaultEpsilon);

struct PinchCounterexample {
  bool adding = false;  // sequence added to A (else removed from A)
  std::vector<VertexId> sequence;
  double final_boundary = 0.0;
};

// Brute-force check of the pinch-cluster property: every sequence of distinct
// vertices (all added to A, or all removed from A, length <= max_len) that
// strictly lowers the boundary must pass through a strictly larger boundary
// first.  Sequences that would empty A or fill V are invalid moves and are
// not explored.  Additions are enumerated before removals, each family in
// lexicographic vertex order, and the first violation found is returned.
// Throws BudgetError once `budget` sequence prefixes have been explored.
std::optional<PinchCounterexample> verify_pinch_cluster(
    const WeightedGraph& g, std::span<const VertexId> a, std::size_t max_len,
    double eps = kDefaultEpsilon, std::size_t budget = 50'000'000);

// One cluster pair per local minimum plus the profile; requires a certified
// thin position.
ClusterReport extract_all_clusters(const TreePosition& pos, bool certified,
                                   double eps = kDefaultEpsilon);

}  // namespace ttp
