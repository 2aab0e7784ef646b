#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ttp/graph.hpp"

namespace ttp {

enum class NodeKind : std::uint8_t { Boundary, Interior };

// Which accumulation route computes widths and adjacency weights: summing
// crossing graph edges (sparse) or masked reductions over the dense adjacency
// matrix (dense).  Auto picks dense whenever the matrix is materialized.
enum class AccumulationMode : std::uint8_t { Auto, Sparse, Dense };

struct TreeNode {
  NodeKind kind = NodeKind::Boundary;
  std::array<EdgeId, 3> edges{kNoEdge, kNoEdge, kNoEdge};
  int degree = 0;
};

struct TreeEdgeRec {
  NodeId a = kNoNode;
  NodeId b = kNoNode;
};

// One side of cutting a tree edge: membership mask over tree node ids.
struct Subtree {
  std::vector<std::uint8_t> node_mask;
};

struct CutPair {
  Subtree containing;  // side that holds the reference edge g
  Subtree opposite;    // side away from g
};

// The unique simple path between two nonadjacent edges x and y, together with
// the stationary branches hanging off it.  path[t-1] is the t-th path edge
// (1-based, x side first); vertices[t-1] is the t-th path vertex, so
// vertices.front() joins x and path.front(), vertices.back() joins y and
// path.back().  start_side / end_side are the third edges at those two
// vertices, and mid_sides[t-2] is the branch at the vertex between path edges
// t-1 and t.
struct BranchShiftPath {
  EdgeId x = kNoEdge;
  EdgeId y = kNoEdge;
  std::vector<EdgeId> path;
  std::vector<NodeId> vertices;
  EdgeId start_side = kNoEdge;
  EdgeId end_side = kNoEdge;
  std::vector<EdgeId> mid_sides;

  std::size_t length() const { return path.size(); }
};

// Multiset of tree-edge widths sorted nonincreasing; profiles are compared
// lexicographically with an absolute tolerance for ties.
class WidthProfile {
public:
  WidthProfile() = default;
  explicit WidthProfile(std::vector<double> widths);

  const std::vector<double>& widths() const { return widths_; }
  double head() const { return widths_.empty() ? 0.0 : widths_.front(); }

  // -1 if a is thinner than b beyond eps, +1 if wider, 0 if tied throughout.
  static int compare(const WidthProfile& a, const WidthProfile& b, double eps);
  bool thinner_than(const WidthProfile& other, double eps) const {
    return compare(*this, other, eps) < 0;
  }

private:
  std::vector<double> widths_;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Unchecked construction input for validate() tests and debugging.
struct RawTree {
  std::size_t node_count = 0;
  std::vector<TreeEdgeRec> edges;
  // leaf_of_vertex[v] = tree node carrying graph vertex v.
  std::vector<NodeId> leaf_of_vertex;
};

// A 3-Cayley tree together with the bijection between graph vertices and its
// leaves, plus a per-edge width cache.  Graph vertex v is mapped to tree node
// v; interior nodes use ids starting at vertex_count.  Edge ids are stable
// under branch shifts: a shift only reconnects endpoints.
class TreePosition {
public:
  // Interior nodes form a path ("caterpillar"); the leaf at order position t
  // is attached along that path in sequence, the first two and last two
  // positions sharing the end interior nodes.  N == 2 gives the single-edge
  // tree, N == 3 the star.
  static TreePosition caterpillar(std::shared_ptr<const WeightedGraph> graph,
                                  const LinearOrdering& order);

  // Uniformly random leaf-labeled shape via sequential random edge
  // subdivision; deterministic for a given seed.
  static TreePosition random(std::shared_ptr<const WeightedGraph> graph,
                             std::uint64_t seed);

  // No invariant checks; width cache recomputed unless supplied.
  static TreePosition from_raw(std::shared_ptr<const WeightedGraph> graph,
                               const RawTree& raw,
                               std::optional<std::vector<double>> width_cache = {});

  const WeightedGraph& graph() const { return *graph_; }
  const std::shared_ptr<const WeightedGraph>& graph_ptr() const { return graph_; }

  std::size_t leaf_count() const { return graph_->vertex_count(); }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  NodeId leaf_of_vertex(VertexId v) const { return leaf_of_vertex_.at(v); }
  VertexId vertex_of_leaf(NodeId n) const;
  bool is_interior(NodeId n) const { return nodes_.at(n).kind == NodeKind::Interior; }
  const TreeNode& node(NodeId n) const { return nodes_.at(n); }
  const TreeEdgeRec& edge(EdgeId e) const { return edges_.at(e); }
  NodeId other_endpoint(EdgeId e, NodeId n) const;
  bool edges_adjacent(EdgeId e, EdgeId f) const;
  std::optional<NodeId> shared_endpoint(EdgeId e, EdgeId f) const;

  AccumulationMode accumulation_mode() const { return accumulation_; }
  void set_accumulation_mode(AccumulationMode m) { accumulation_ = m; }
  bool uses_dense_route() const;

  // Cached width b(f).
  double width(EdgeId f) const { return width_cache_.at(f); }
  const std::vector<double>& width_cache() const { return width_cache_; }
  // From-scratch width via the configured accumulation route.
  double recompute_width(EdgeId f) const;

  WidthProfile width_profile() const;

  // Both subtrees obtained by deleting f; `containing` holds g.
  CutPair cut(EdgeId f, EdgeId g) const;
  std::vector<VertexId> leaf_set(const Subtree& side) const;

  // R(f): graph edges whose leaf-to-leaf tree path crosses f.
  std::vector<WeightedEdge> passes_through(EdgeId f) const;

  // a(e, g): total weight of graph edges crossing both e and g.
  double adjacency_weight(EdgeId e, EdgeId g) const;

  // s(e, g) = b(g) - 2 a(e, g): the width change of e if the branch g were
  // reattached on the far side of e.
  double slope(EdgeId e, EdgeId g) const;

  BranchShiftPath path_between_edges(EdgeId x, EdgeId y) const;

  // Structure, bijection and width-cache checks; reports, never throws.
  ValidationReport validate(double eps = kDefaultEpsilon) const;

  // Byte mask over graph vertices whose leaves lie on the `from` side of f.
  std::vector<std::uint8_t> side_leaf_mask(EdgeId f, NodeId from) const;
  // Node mask of the component of `from` once f is deleted.
  std::vector<std::uint8_t> side_node_mask(EdgeId f, NodeId from) const;
  // Leaf mask of the side of e away from edge g.
  std::vector<std::uint8_t> far_side_leaf_mask(EdgeId e, EdgeId g) const;

  // Total weight between two disjoint vertex sets via the configured route.
  double cross_weight(const std::vector<std::uint8_t>& mask_a,
                      const std::vector<std::uint8_t>& mask_b) const;

private:
  friend struct ShiftAccess;

  std::shared_ptr<const WeightedGraph> graph_;
  std::vector<TreeNode> nodes_;
  std::vector<TreeEdgeRec> edges_;
  std::vector<NodeId> leaf_of_vertex_;
  std::vector<double> width_cache_;
  AccumulationMode accumulation_ = AccumulationMode::Auto;

  void attach_edge(NodeId n, EdgeId e);
  void detach_edge(NodeId n, EdgeId e);
  void replace_endpoint(EdgeId e, NodeId from, NodeId to);
  // One branch-shift edit: the stationary branch at u moves to v, the first
  // path edge re-anchors from v to s, and the branch at s moves to u.  All
  // detaches run before any attach so no node transiently exceeds degree 3.
  void shift_reconnect(EdgeId start_side, EdgeId first_path_edge,
                       EdgeId end_side, NodeId u, NodeId v, NodeId s);
  void recompute_all_widths();
  static TreePosition bare(std::shared_ptr<const WeightedGraph> graph);
};

// Internal hook for the shift engine; keeps tree mutation out of the public
// surface.
struct ShiftAccess {
  static void shift_reconnect(TreePosition& pos, EdgeId start_side,
                              EdgeId first_path_edge, EdgeId end_side, NodeId u,
                              NodeId v, NodeId s) {
    pos.shift_reconnect(start_side, first_path_edge, end_side, u, v, s);
  }
  static void set_cached_width(TreePosition& pos, EdgeId e, double w) {
    pos.width_cache_.at(e) = w;
  }
};

}  // namespace ttp
