#include "ttp/tree_position.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

#include "ttp/kernels.hpp"

namespace ttp {

WidthProfile::WidthProfile(std::vector<double> widths)
    : widths_(std::move(widths)) {
  std::sort(widths_.begin(), widths_.end(), std::greater<double>());
}

int WidthProfile::compare(const WidthProfile& a, const WidthProfile& b,
                          double eps) {
  const std::size_t common = std::min(a.widths_.size(), b.widths_.size());
  for (std::size_t i = 0; i < common; ++i) {
    const double d = a.widths_[i] - b.widths_[i];
    if (d < -eps) return -1;
    if (d > eps) return 1;
  }
  if (a.widths_.size() != b.widths_.size()) {
    return a.widths_.size() < b.widths_.size() ? -1 : 1;
  }
  return 0;
}

TreePosition TreePosition::bare(std::shared_ptr<const WeightedGraph> graph) {
  TreePosition pos;
  pos.graph_ = std::move(graph);
  pos.leaf_of_vertex_.resize(pos.graph_->vertex_count());
  return pos;
}

void TreePosition::attach_edge(NodeId n, EdgeId e) {
  TreeNode& node = nodes_.at(n);
  if (node.degree >= 3) throw Error("tree node already has three edges");
  node.edges[node.degree++] = e;
}

void TreePosition::detach_edge(NodeId n, EdgeId e) {
  TreeNode& node = nodes_.at(n);
  for (int i = 0; i < node.degree; ++i) {
    if (node.edges[i] == e) {
      node.edges[i] = node.edges[node.degree - 1];
      node.edges[--node.degree] = kNoEdge;
      return;
    }
  }
  throw Error("edge not incident to node");
}

void TreePosition::replace_endpoint(EdgeId e, NodeId from, NodeId to) {
  if (from == to) return;
  TreeEdgeRec& rec = edges_.at(e);
  if (rec.a == from) {
    rec.a = to;
  } else if (rec.b == from) {
    rec.b = to;
  } else {
    throw Error("edge endpoint mismatch in replace_endpoint");
  }
  detach_edge(from, e);
  attach_edge(to, e);
}

void TreePosition::shift_reconnect(EdgeId start_side, EdgeId first_path_edge,
                                   EdgeId end_side, NodeId u, NodeId v,
                                   NodeId s) {
  auto repoint = [&](EdgeId e, NodeId from, NodeId to) {
    TreeEdgeRec& rec = edges_.at(e);
    if (rec.a == from) {
      rec.a = to;
    } else if (rec.b == from) {
      rec.b = to;
    } else {
      throw Error("edge endpoint mismatch in shift_reconnect");
    }
  };
  detach_edge(u, start_side);
  if (v != s) detach_edge(v, first_path_edge);
  detach_edge(s, end_side);
  repoint(start_side, u, v);
  if (v != s) repoint(first_path_edge, v, s);
  repoint(end_side, s, u);
  attach_edge(v, start_side);
  if (v != s) attach_edge(s, first_path_edge);
  attach_edge(u, end_side);
}

TreePosition TreePosition::caterpillar(std::shared_ptr<const WeightedGraph> graph,
                                       const LinearOrdering& order) {
  const std::size_t n = graph->vertex_count();
  if (n < 2) throw Error("tree positions require at least two vertices");
  if (order.size() != n) throw Error("ordering size mismatch");

  TreePosition pos = bare(std::move(graph));
  for (std::size_t v = 0; v < n; ++v) {
    pos.nodes_.push_back(TreeNode{NodeKind::Boundary, {}, 0});
    pos.leaf_of_vertex_[v] = static_cast<NodeId>(v);
  }

  if (n == 2) {
    pos.edges_.push_back(TreeEdgeRec{0, 1});
    pos.attach_edge(0, 0);
    pos.attach_edge(1, 0);
    pos.recompute_all_widths();
    return pos;
  }

  const std::size_t interior_count = n - 2;
  for (std::size_t i = 0; i < interior_count; ++i) {
    pos.nodes_.push_back(TreeNode{NodeKind::Interior, {}, 0});
  }
  const auto interior = [&](std::size_t i) {  // i in [1, n-2]
    return static_cast<NodeId>(n + i - 1);
  };
  const auto spine_of_position = [&](std::size_t t) {
    if (t <= 1) return interior(1);
    if (t >= n - 2) return interior(n - 2);
    return interior(t);
  };

  // Leaf edges first (edge id = order position), then the spine.
  for (std::size_t t = 0; t < n; ++t) {
    const NodeId leaf = pos.leaf_of_vertex_[order.vertex_at(t)];
    const NodeId host = spine_of_position(t);
    const EdgeId id = static_cast<EdgeId>(pos.edges_.size());
    pos.edges_.push_back(TreeEdgeRec{leaf, host});
    pos.attach_edge(leaf, id);
    pos.attach_edge(host, id);
  }
  for (std::size_t i = 1; i + 1 <= n - 2; ++i) {
    const EdgeId id = static_cast<EdgeId>(pos.edges_.size());
    pos.edges_.push_back(TreeEdgeRec{interior(i), interior(i + 1)});
    pos.attach_edge(interior(i), id);
    pos.attach_edge(interior(i + 1), id);
  }
  pos.recompute_all_widths();
  return pos;
}

TreePosition TreePosition::random(std::shared_ptr<const WeightedGraph> graph,
                                  std::uint64_t seed) {
  const std::size_t n = graph->vertex_count();
  if (n < 2) throw Error("tree positions require at least two vertices");

  TreePosition pos = bare(std::move(graph));
  for (std::size_t v = 0; v < n; ++v) {
    pos.nodes_.push_back(TreeNode{NodeKind::Boundary, {}, 0});
    pos.leaf_of_vertex_[v] = static_cast<NodeId>(v);
  }
  if (n == 2) {
    pos.edges_.push_back(TreeEdgeRec{0, 1});
    pos.attach_edge(0, 0);
    pos.attach_edge(1, 0);
    pos.recompute_all_widths();
    return pos;
  }

  std::mt19937_64 rng(seed);
  // Start from the star on leaves {0, 1, 2}, then subdivide a uniformly
  // random edge for each further leaf; every labeled shape is equally likely.
  const NodeId hub = static_cast<NodeId>(n);
  pos.nodes_.push_back(TreeNode{NodeKind::Interior, {}, 0});
  for (NodeId leaf = 0; leaf < 3; ++leaf) {
    const EdgeId id = static_cast<EdgeId>(pos.edges_.size());
    pos.edges_.push_back(TreeEdgeRec{leaf, hub});
    pos.attach_edge(leaf, id);
    pos.attach_edge(hub, id);
  }
  for (std::size_t next = 3; next < n; ++next) {
    std::uniform_int_distribution<std::size_t> pick(0, pos.edges_.size() - 1);
    const EdgeId host = static_cast<EdgeId>(pick(rng));
    const NodeId split = static_cast<NodeId>(pos.nodes_.size());
    pos.nodes_.push_back(TreeNode{NodeKind::Interior, {}, 0});
    const NodeId old_b = pos.edges_[host].b;
    pos.replace_endpoint(host, old_b, split);
    const EdgeId tail = static_cast<EdgeId>(pos.edges_.size());
    pos.edges_.push_back(TreeEdgeRec{split, old_b});
    pos.attach_edge(split, tail);
    pos.attach_edge(old_b, tail);
    const EdgeId leaf_edge = static_cast<EdgeId>(pos.edges_.size());
    pos.edges_.push_back(TreeEdgeRec{static_cast<NodeId>(next), split});
    pos.attach_edge(static_cast<NodeId>(next), leaf_edge);
    pos.attach_edge(split, leaf_edge);
  }
  pos.recompute_all_widths();
  return pos;
}

TreePosition TreePosition::from_raw(std::shared_ptr<const WeightedGraph> graph,
                                    const RawTree& raw,
                                    std::optional<std::vector<double>> width_cache) {
  TreePosition pos = bare(std::move(graph));
  pos.nodes_.assign(raw.node_count, TreeNode{NodeKind::Interior, {}, 0});
  pos.leaf_of_vertex_ = raw.leaf_of_vertex;
  for (NodeId leaf : raw.leaf_of_vertex) {
    if (leaf < raw.node_count) pos.nodes_[leaf].kind = NodeKind::Boundary;
  }
  for (const TreeEdgeRec& e : raw.edges) {
    const EdgeId id = static_cast<EdgeId>(pos.edges_.size());
    pos.edges_.push_back(e);
    pos.attach_edge(e.a, id);
    pos.attach_edge(e.b, id);
  }
  if (width_cache) {
    if (width_cache->size() != pos.edges_.size()) {
      throw Error("width cache size mismatch");
    }
    pos.width_cache_ = std::move(*width_cache);
  } else {
    pos.recompute_all_widths();
  }
  return pos;
}

VertexId TreePosition::vertex_of_leaf(NodeId n) const {
  for (std::size_t v = 0; v < leaf_of_vertex_.size(); ++v) {
    if (leaf_of_vertex_[v] == n) return static_cast<VertexId>(v);
  }
  throw Error("node carries no graph vertex");
}

NodeId TreePosition::other_endpoint(EdgeId e, NodeId n) const {
  const TreeEdgeRec& rec = edges_.at(e);
  if (rec.a == n) return rec.b;
  if (rec.b == n) return rec.a;
  throw Error("node is not an endpoint of edge");
}

std::optional<NodeId> TreePosition::shared_endpoint(EdgeId e, EdgeId f) const {
  const TreeEdgeRec& re = edges_.at(e);
  const TreeEdgeRec& rf = edges_.at(f);
  if (re.a == rf.a || re.a == rf.b) return re.a;
  if (re.b == rf.a || re.b == rf.b) return re.b;
  return std::nullopt;
}

bool TreePosition::edges_adjacent(EdgeId e, EdgeId f) const {
  return shared_endpoint(e, f).has_value();
}

std::vector<std::uint8_t> TreePosition::side_node_mask(EdgeId f,
                                                       NodeId from) const {
  std::vector<std::uint8_t> mask(nodes_.size(), 0);
  std::vector<NodeId> stack{from};
  mask[from] = 1;
  while (!stack.empty()) {
    const NodeId n = stack.back();
    stack.pop_back();
    const TreeNode& node = nodes_[n];
    for (int i = 0; i < node.degree; ++i) {
      const EdgeId e = node.edges[i];
      if (e == f) continue;
      const NodeId next = other_endpoint(e, n);
      if (!mask[next]) {
        mask[next] = 1;
        stack.push_back(next);
      }
    }
  }
  return mask;
}

std::vector<std::uint8_t> TreePosition::side_leaf_mask(EdgeId f,
                                                       NodeId from) const {
  const auto nodes = side_node_mask(f, from);
  std::vector<std::uint8_t> mask(leaf_of_vertex_.size(), 0);
  for (std::size_t v = 0; v < leaf_of_vertex_.size(); ++v) {
    mask[v] = nodes[leaf_of_vertex_[v]];
  }
  return mask;
}

std::vector<std::uint8_t> TreePosition::far_side_leaf_mask(EdgeId e,
                                                           EdgeId g) const {
  if (e == g) throw Error("distinct edges required");
  const TreeEdgeRec& rec = edges_.at(e);
  const auto side_a = side_node_mask(e, rec.a);
  const TreeEdgeRec& rg = edges_.at(g);
  const bool g_in_a = side_a[rg.a] || side_a[rg.b];
  std::vector<std::uint8_t> mask(leaf_of_vertex_.size(), 0);
  for (std::size_t v = 0; v < leaf_of_vertex_.size(); ++v) {
    const bool in_a = side_a[leaf_of_vertex_[v]] != 0;
    mask[v] = (in_a != g_in_a) ? 1 : 0;
  }
  return mask;
}

bool TreePosition::uses_dense_route() const {
  switch (accumulation_) {
    case AccumulationMode::Sparse: return false;
    case AccumulationMode::Dense:
      if (!graph_->has_dense_matrix()) {
        throw Error("dense accumulation requested but matrix unavailable");
      }
      return true;
    case AccumulationMode::Auto: return graph_->has_dense_matrix();
  }
  return false;
}

double TreePosition::cross_weight(const std::vector<std::uint8_t>& mask_a,
                                  const std::vector<std::uint8_t>& mask_b) const {
  if (uses_dense_route()) {
    return kernels::pair_masked_sum(graph_->dense_matrix().data(),
                                    graph_->vertex_count(), mask_a.data(),
                                    mask_b.data());
  }
  double acc = 0.0;
  for (const WeightedEdge& e : graph_->edges()) {
    if ((mask_a[e.u] && mask_b[e.v]) || (mask_a[e.v] && mask_b[e.u])) {
      acc += e.weight;
    }
  }
  return acc;
}

double TreePosition::recompute_width(EdgeId f) const {
  const TreeEdgeRec& rec = edges_.at(f);
  const auto side = side_leaf_mask(f, rec.a);
  std::vector<std::uint8_t> other(side.size());
  for (std::size_t i = 0; i < side.size(); ++i) other[i] = side[i] ? 0 : 1;
  return cross_weight(side, other);
}

void TreePosition::recompute_all_widths() {
  width_cache_.resize(edges_.size());
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    width_cache_[e] = recompute_width(e);
  }
}

WidthProfile TreePosition::width_profile() const {
  return WidthProfile(width_cache_);
}

CutPair TreePosition::cut(EdgeId f, EdgeId g) const {
  if (f == g) throw Error("cut requires two distinct edges");
  const TreeEdgeRec& rec = edges_.at(f);
  auto side_a = side_node_mask(f, rec.a);
  const TreeEdgeRec& rg = edges_.at(g);
  const bool g_in_a = side_a[rg.a] || side_a[rg.b];
  std::vector<std::uint8_t> side_b(side_a.size());
  for (std::size_t i = 0; i < side_a.size(); ++i) side_b[i] = side_a[i] ? 0 : 1;
  CutPair out;
  if (g_in_a) {
    out.containing.node_mask = std::move(side_a);
    out.opposite.node_mask = std::move(side_b);
  } else {
    out.containing.node_mask = std::move(side_b);
    out.opposite.node_mask = std::move(side_a);
  }
  return out;
}

std::vector<VertexId> TreePosition::leaf_set(const Subtree& side) const {
  std::vector<VertexId> out;
  for (std::size_t v = 0; v < leaf_of_vertex_.size(); ++v) {
    if (side.node_mask.at(leaf_of_vertex_[v])) {
      out.push_back(static_cast<VertexId>(v));
    }
  }
  return out;
}

std::vector<WeightedEdge> TreePosition::passes_through(EdgeId f) const {
  const TreeEdgeRec& rec = edges_.at(f);
  const auto side = side_leaf_mask(f, rec.a);
  std::vector<WeightedEdge> out;
  for (const WeightedEdge& e : graph_->edges()) {
    if (side[e.u] != side[e.v]) out.push_back(e);
  }
  return out;
}

double TreePosition::adjacency_weight(EdgeId e, EdgeId g) const {
  if (e == g) throw Error("adjacency weight requires two distinct edges");
  const auto mask_e = far_side_leaf_mask(e, g);
  const auto mask_g = far_side_leaf_mask(g, e);
  return cross_weight(mask_e, mask_g);
}

double TreePosition::slope(EdgeId e, EdgeId g) const {
  return width(g) - 2.0 * adjacency_weight(e, g);
}

BranchShiftPath TreePosition::path_between_edges(EdgeId x, EdgeId y) const {
  if (x == y) throw Error("path requires two distinct edges");
  if (edges_adjacent(x, y)) throw Error("edges are adjacent; no shift path");

  // Walk from x toward y: parents over nodes, not crossing x or y.
  const TreeEdgeRec& rx = edges_.at(x);
  const TreeEdgeRec& ry = edges_.at(y);
  std::vector<EdgeId> via(nodes_.size(), kNoEdge);
  std::vector<NodeId> parent(nodes_.size(), kNoNode);
  std::vector<std::uint8_t> seen(nodes_.size(), 0);
  std::vector<NodeId> queue;
  for (NodeId start : {rx.a, rx.b}) {
    seen[start] = 1;
    queue.push_back(start);
  }
  NodeId goal = kNoNode;
  for (std::size_t qi = 0; qi < queue.size() && goal == kNoNode; ++qi) {
    const NodeId n = queue[qi];
    const TreeNode& node = nodes_[n];
    for (int i = 0; i < node.degree && goal == kNoNode; ++i) {
      const EdgeId e = node.edges[i];
      if (e == x) continue;
      const NodeId next = other_endpoint(e, n);
      if (seen[next]) continue;
      seen[next] = 1;
      via[next] = e;
      parent[next] = n;
      if (e == y) continue;  // do not walk past y
      if (next == ry.a || next == ry.b) {
        goal = next;
        break;
      }
      queue.push_back(next);
    }
  }
  if (goal == kNoNode) throw Error("no path between edges; tree disconnected");

  BranchShiftPath out;
  out.x = x;
  out.y = y;
  std::vector<EdgeId> rev_edges;
  std::vector<NodeId> rev_nodes;
  for (NodeId n = goal; n != kNoNode; n = parent[n]) {
    rev_nodes.push_back(n);
    if (via[n] != kNoEdge) rev_edges.push_back(via[n]);
  }
  out.path.assign(rev_edges.rbegin(), rev_edges.rend());
  out.vertices.assign(rev_nodes.rbegin(), rev_nodes.rend());

  const auto third_edge = [&](NodeId n, EdgeId skip1, EdgeId skip2) {
    const TreeNode& node = nodes_.at(n);
    for (int i = 0; i < node.degree; ++i) {
      const EdgeId e = node.edges[i];
      if (e != skip1 && e != skip2) return e;
    }
    throw Error("interior node lacks a third edge");
  };
  out.start_side = third_edge(out.vertices.front(), x, out.path.front());
  out.end_side = third_edge(out.vertices.back(), y, out.path.back());
  out.mid_sides.clear();
  for (std::size_t t = 1; t + 1 <= out.path.size(); ++t) {
    out.mid_sides.push_back(
        third_edge(out.vertices[t], out.path[t - 1], out.path[t]));
  }
  return out;
}

ValidationReport TreePosition::validate(double eps) const {
  ValidationReport report;
  auto fail = [&](std::string msg) { report.violations.push_back(std::move(msg)); };

  const std::size_t n = leaf_of_vertex_.size();
  std::size_t boundary = 0;
  std::size_t interior = 0;
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    const TreeNode& node = nodes_[id];
    if (node.kind == NodeKind::Boundary) {
      ++boundary;
      if (node.degree != 1) {
        fail("boundary node " + std::to_string(id) + " has degree " +
             std::to_string(node.degree));
      }
    } else {
      ++interior;
      if (node.degree != 3) {
        fail("interior degree != 3 at node " + std::to_string(id));
      }
    }
  }
  if (boundary != n) {
    fail("boundary node count " + std::to_string(boundary) +
         " != vertex count " + std::to_string(n));
  }
  if (n >= 3 && interior + 2 != boundary) {
    fail("interior node count " + std::to_string(interior) +
         " != boundary count - 2");
  }
  if (edges_.size() + 1 != nodes_.size()) {
    fail("edge count " + std::to_string(edges_.size()) + " != node count - 1");
  }

  // Bijectivity of the leaf map.
  std::vector<std::uint8_t> hit(nodes_.size(), 0);
  for (std::size_t v = 0; v < n; ++v) {
    const NodeId leaf = leaf_of_vertex_[v];
    if (leaf >= nodes_.size()) {
      fail("leaf map out of range for vertex " + std::to_string(v));
      continue;
    }
    if (nodes_[leaf].kind != NodeKind::Boundary) {
      fail("vertex " + std::to_string(v) + " mapped to interior node");
    }
    if (hit[leaf]) fail("leaf map not injective at node " + std::to_string(leaf));
    hit[leaf] = 1;
  }

  // Connectivity (acyclicity follows with the edge count check above).
  if (!nodes_.empty()) {
    std::vector<std::uint8_t> seen(nodes_.size(), 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      const NodeId cur = stack.back();
      stack.pop_back();
      const TreeNode& node = nodes_[cur];
      for (int i = 0; i < node.degree; ++i) {
        const NodeId next = other_endpoint(node.edges[i], cur);
        if (!seen[next]) {
          seen[next] = 1;
          ++reached;
          stack.push_back(next);
        }
      }
    }
    if (reached != nodes_.size()) fail("tree is not connected");
  }

  if (width_cache_.size() != edges_.size()) {
    fail("width cache size mismatch");
  } else if (report.ok()) {
    try {
      for (EdgeId e = 0; e < edges_.size(); ++e) {
        const double fresh = recompute_width(e);
        if (std::abs(fresh - width_cache_[e]) > eps) {
          std::ostringstream msg;
          msg << "cache mismatch at edge " << e << ": cached "
              << width_cache_[e] << " recomputed " << fresh;
          fail(msg.str());
        }
      }
    } catch (const std::exception& e) {
      fail(std::string("width recomputation failed: ") + e.what());
    }
  }
  return report;
}

}  // namespace ttp
