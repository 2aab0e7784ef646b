#pragma once

// Test-side oracles: independent accumulation routes used to freeze and
// cross-check expected values.  These deliberately avoid the library's
// kernel/cached paths.

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "ttp/graph.hpp"
#include "ttp/tree_position.hpp"

namespace ttp::testing {

inline WeightedGraph make_graph(std::size_t n,
                                std::vector<WeightedEdge> edges) {
  return WeightedGraph::from_edge_list(n, edges);
}

inline std::shared_ptr<const WeightedGraph> share(WeightedGraph g) {
  return std::make_shared<const WeightedGraph>(std::move(g));
}

inline WeightedGraph triangle() {
  return make_graph(3, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}});
}

inline WeightedGraph path4() {  // a-b-c-d with unit weights
  return make_graph(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}});
}

inline WeightedGraph k4() {
  return make_graph(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0},
                        {1, 2, 1.0}, {1, 3, 1.0}, {2, 3, 1.0}});
}

inline WeightedGraph barbell() {
  return make_graph(6, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0},
                        {3, 4, 1.0}, {3, 5, 1.0}, {4, 5, 1.0},
                        {2, 3, 1.0}});
}

// Boundary by brute force over all vertex pairs via pair_weight.
inline double direct_boundary(const WeightedGraph& g,
                              const std::vector<std::uint8_t>& mask) {
  double acc = 0.0;
  for (VertexId u = 0; u < g.vertex_count(); ++u) {
    for (VertexId v = u + 1; v < g.vertex_count(); ++v) {
      if (mask[u] != mask[v]) acc += g.pair_weight(u, v);
    }
  }
  return acc;
}

// Width by brute force: leaf side from the tree structure, boundary over all
// pairs; independent of the width cache and of the kernel path.
inline double direct_width(const TreePosition& pos, EdgeId f) {
  const auto mask = pos.side_leaf_mask(f, pos.edge(f).a);
  return direct_boundary(pos.graph(), mask);
}

// Weight of graph edges passing through both e and g, by explicit set
// intersection of the two crossing-edge sets.
inline double direct_adjacency_weight(const TreePosition& pos, EdgeId e,
                                      EdgeId g) {
  std::map<std::pair<VertexId, VertexId>, double> in_e;
  for (const WeightedEdge& edge : pos.passes_through(e)) {
    in_e[{edge.u, edge.v}] = edge.weight;
  }
  double acc = 0.0;
  for (const WeightedEdge& edge : pos.passes_through(g)) {
    auto it = in_e.find({edge.u, edge.v});
    if (it != in_e.end()) acc += it->second;
  }
  return acc;
}

// Slope via its set-difference definition.
inline double direct_slope(const TreePosition& pos, EdgeId e, EdgeId g) {
  std::map<std::pair<VertexId, VertexId>, double> in_e;
  for (const WeightedEdge& edge : pos.passes_through(e)) {
    in_e[{edge.u, edge.v}] = edge.weight;
  }
  double only_g = 0.0;
  double both = 0.0;
  for (const WeightedEdge& edge : pos.passes_through(g)) {
    if (in_e.count({edge.u, edge.v})) {
      both += edge.weight;
    } else {
      only_g += edge.weight;
    }
  }
  return only_g - both;
}

inline std::vector<double> sorted_desc(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<double>());
  return v;
}

}  // namespace ttp::testing
