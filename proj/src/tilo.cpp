#include "ttp/tilo.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "ttp/shift.hpp"

namespace ttp {

TiloWidths tilo_widths(const WeightedGraph& g, const LinearOrdering& o) {
  const std::size_t n = g.vertex_count();
  if (o.size() != n) throw Error("ordering size mismatch");
  TiloWidths out;
  if (n < 2) return out;
  out.widths.assign(n - 1, 0.0);
  // Edge (u, v) crosses exactly the prefix cuts between its two positions.
  for (const WeightedEdge& e : g.edges()) {
    const std::size_t pu = o.position_of(e.u);
    const std::size_t pv = o.position_of(e.v);
    const std::size_t lo = std::min(pu, pv);
    const std::size_t hi = std::max(pu, pv);
    for (std::size_t i = lo; i < hi; ++i) out.widths[i] += e.weight;
  }
  return out;
}

double tilo_slope(const WeightedGraph& g, const LinearOrdering& o,
                  std::size_t i, std::size_t k) {
  const std::size_t n = g.vertex_count();
  if (o.size() != n) throw Error("ordering size mismatch");
  if (n < 2 || i > n - 2) throw Error("prefix index out of range");
  if (k > n - 1) throw Error("position out of range");
  const VertexId v = o.vertex_at(k);
  double far = 0.0;
  double near = 0.0;
  for (const auto& [to, w] : g.neighbors(v)) {
    if (o.position_of(to) <= i) {
      near += w;
    } else {
      far += w;
    }
  }
  return far - near;
}

LinearOrdering tilo_shift(const LinearOrdering& o, std::size_t a,
                          std::size_t b) {
  const std::size_t n = o.size();
  if (a >= n || b >= n) throw Error("shift position out of range");
  if (a == b) throw Error("shift requires two distinct positions");
  std::vector<VertexId> seq = o.sequence();
  const VertexId moved = seq[a];
  if (a < b) {
    for (std::size_t p = a; p < b; ++p) seq[p] = seq[p + 1];
  } else {
    for (std::size_t p = a; p > b; --p) seq[p] = seq[p - 1];
  }
  seq[b] = moved;
  return LinearOrdering(std::move(seq));
}

std::optional<std::pair<std::size_t, std::size_t>> tilo_reducible(
    const WeightedGraph& g, const LinearOrdering& o, double epsilon) {
  const std::size_t n = g.vertex_count();
  if (n < 3) return std::nullopt;
  const TiloWidths widths = tilo_widths(g, o);
  for (std::size_t k = 0; k + 1 <= n - 2; ++k) {
    for (std::size_t i = k + 1; i <= n - 2; ++i) {
      bool monotone = true;
      for (std::size_t t = k + 1; t <= i && monotone; ++t) {
        if (widths.widths[t - 1] > widths.widths[t] + epsilon) monotone = false;
      }
      if (!monotone) continue;
      const double s_ik = tilo_slope(g, o, i, k);
      if (!(s_ik > epsilon)) continue;
      const double s_inext = tilo_slope(g, o, i, i + 1);
      const double adj = g.pair_weight(o.vertex_at(k), o.vertex_at(i + 1));
      if (s_ik - s_inext - 2.0 * adj > epsilon) {
        return std::make_pair(k, i);
      }
    }
  }
  return std::nullopt;
}

int compare_tilo_widths(const TiloWidths& a, const TiloWidths& b, double eps) {
  std::vector<double> sa = a.widths;
  std::vector<double> sb = b.widths;
  std::sort(sa.begin(), sa.end(), std::greater<double>());
  std::sort(sb.begin(), sb.end(), std::greater<double>());
  const std::size_t common = std::min(sa.size(), sb.size());
  for (std::size_t i = 0; i < common; ++i) {
    const double d = sa[i] - sb[i];
    if (d < -eps) return -1;
    if (d > eps) return 1;
  }
  if (sa.size() != sb.size()) return sa.size() < sb.size() ? -1 : 1;
  return 0;
}

namespace {

std::vector<VertexId> sorted_leaves_behind(const TreePosition& pos, EdgeId e,
                                           NodeId path_vertex) {
  const NodeId far = pos.other_endpoint(e, path_vertex);
  const auto mask = pos.side_leaf_mask(e, far);
  std::vector<VertexId> out;
  for (std::size_t v = 0; v < mask.size(); ++v) {
    if (mask[v]) out.push_back(static_cast<VertexId>(v));
  }
  return out;
}

// Side edges by block position: [start branch, x, mid branches..., y, end
// branch]; the block behind side_edges[k] is block k of the partition.
std::vector<EdgeId> side_edges_by_position(const BranchShiftPath& path) {
  std::vector<EdgeId> out;
  out.push_back(path.start_side);
  out.push_back(path.x);
  for (EdgeId f : path.mid_sides) out.push_back(f);
  out.push_back(path.y);
  out.push_back(path.end_side);
  return out;
}

std::vector<NodeId> side_edge_anchor(const BranchShiftPath& path) {
  std::vector<NodeId> out;
  out.push_back(path.vertices.front());  // start branch
  out.push_back(path.vertices.front());  // x
  for (std::size_t t = 1; t + 1 < path.vertices.size(); ++t) {
    out.push_back(path.vertices[t]);
  }
  out.push_back(path.vertices.back());  // y
  out.push_back(path.vertices.back());  // end branch
  return out;
}

}  // namespace

InducedQuotient induced_quotient(const TreePosition& pos, EdgeId x, EdgeId y) {
  InducedQuotient out;
  out.path = pos.path_between_edges(x, y);
  const auto edges = side_edges_by_position(out.path);
  const auto anchors = side_edge_anchor(out.path);
  Partition partition;
  partition.blocks.reserve(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    partition.blocks.push_back(sorted_leaves_behind(pos, edges[k], anchors[k]));
  }
  out.quotient = quotient_graph(pos.graph(), std::move(partition));
  out.ordering = LinearOrdering::identity(out.quotient.partition.block_count());
  return out;
}

CheckResult check_width_equivalence(const TreePosition& pos, EdgeId x, EdgeId y,
                                    double eps) {
  CheckResult result;
  const InducedQuotient q = induced_quotient(pos, x, y);
  const TiloWidths widths = tilo_widths(q.quotient.quotient, q.ordering);
  std::vector<EdgeId> cut_edges;
  cut_edges.push_back(q.path.start_side);
  for (EdgeId p : q.path.path) cut_edges.push_back(p);
  cut_edges.push_back(q.path.end_side);
  for (std::size_t t = 0; t < cut_edges.size(); ++t) {
    const double tree_w = pos.width(cut_edges[t]);
    const double lin_w = widths.widths.at(t);
    if (std::abs(tree_w - lin_w) > eps) {
      std::ostringstream msg;
      msg << "width mismatch at path position " << t << ": tree " << tree_w
          << " quotient " << lin_w;
      result.fail(msg.str());
    }
  }
  return result;
}

CheckResult check_quotient_invariance(const TreePosition& pos, EdgeId x,
                                      EdgeId y, double eps) {
  CheckResult result;
  const InducedQuotient before = induced_quotient(pos, x, y);
  const std::size_t i = before.path.length();
  const std::size_t blocks = i + 3;

  TreePosition shifted = pos;
  apply_branch_shift(shifted, BranchShift{x, y});
  // The re-induced pair: the first branch that moved one slot toward the old
  // x end, and x itself at the far end.
  const EdgeId new_x = i >= 2 ? before.path.mid_sides.front() : y;
  const InducedQuotient after = induced_quotient(shifted, new_x, x);

  if (after.quotient.partition.block_count() != blocks) {
    result.fail("re-induced quotient has wrong block count");
    return result;
  }

  // Expected relabeling: 0 -> 0, t -> t+1 for 1 <= t <= i, i+1 -> 1,
  // i+2 -> i+2.
  std::vector<std::size_t> expected(blocks);
  expected[0] = 0;
  for (std::size_t t = 1; t <= i; ++t) expected[t] = t + 1;
  expected[i + 1] = 1;
  expected[i + 2] = i + 2;

  for (std::size_t t = 0; t < blocks; ++t) {
    if (after.quotient.partition.blocks[t] !=
        before.quotient.partition.blocks[expected[t]]) {
      std::ostringstream msg;
      msg << "block " << t << " does not match original block " << expected[t];
      result.fail(msg.str());
    }
  }

  for (std::size_t a = 0; a < blocks; ++a) {
    for (std::size_t b = a + 1; b < blocks; ++b) {
      const double w_after = after.quotient.quotient.pair_weight(
          static_cast<VertexId>(a), static_cast<VertexId>(b));
      const double w_before = before.quotient.quotient.pair_weight(
          static_cast<VertexId>(expected[a]), static_cast<VertexId>(expected[b]));
      if (std::abs(w_after - w_before) > eps) {
        std::ostringstream msg;
        msg << "quotient weight mismatch between blocks " << a << " and " << b;
        result.fail(msg.str());
      }
    }
  }
  return result;
}

CheckResult check_cyclic_correspondence(const TreePosition& pos, EdgeId x,
                                        EdgeId y) {
  CheckResult result;
  const InducedQuotient before = induced_quotient(pos, x, y);
  const std::size_t i = before.path.length();
  const std::size_t blocks = i + 3;

  TreePosition shifted = pos;
  apply_branch_shift(shifted, BranchShift{x, y});
  const EdgeId new_x = i >= 2 ? before.path.mid_sides.front() : y;
  const InducedQuotient after = induced_quotient(shifted, new_x, x);

  if (after.quotient.partition.block_count() != blocks) {
    result.fail("re-induced quotient has wrong block count");
    return result;
  }

  // Induced ordering read through the original block labels.
  std::vector<VertexId> induced;
  induced.reserve(blocks);
  for (std::size_t t = 0; t < blocks; ++t) {
    const auto& blk = after.quotient.partition.blocks[t];
    bool found = false;
    for (std::size_t j = 0; j < blocks; ++j) {
      if (before.quotient.partition.blocks[j] == blk) {
        induced.push_back(static_cast<VertexId>(j));
        found = true;
        break;
      }
    }
    if (!found) {
      result.fail("block " + std::to_string(t) +
                  " not found in original partition");
      return result;
    }
  }

  const LinearOrdering expected =
      tilo_shift(LinearOrdering::identity(blocks), 1, i + 1);
  if (induced != expected.sequence()) {
    std::ostringstream msg;
    msg << "induced ordering differs from cyclic shift:";
    for (VertexId v : induced) msg << ' ' << v;
    result.fail(msg.str());
  }
  return result;
}

CheckResult check_slope_translation(const TreePosition& pos, EdgeId x, EdgeId y,
                                    double eps) {
  CheckResult result;
  const InducedQuotient q = induced_quotient(pos, x, y);
  const std::size_t i = q.path.length();
  const auto side_edges = side_edges_by_position(q.path);
  for (std::size_t j = 1; j <= i; ++j) {
    const EdgeId p_j = q.path.path[j - 1];
    for (std::size_t k = 0; k < side_edges.size(); ++k) {
      const double tree_slope = pos.slope(p_j, side_edges[k]);
      const double lin_slope = tilo_slope(q.quotient.quotient, q.ordering, j, k);
      const double expected = (k <= j) ? -lin_slope : lin_slope;
      if (std::abs(tree_slope - expected) > eps) {
        std::ostringstream msg;
        msg << "slope mismatch at path edge " << j << ", side branch " << k
            << ": tree " << tree_slope << " linear " << expected;
        result.fail(msg.str());
      }
    }
  }
  return result;
}

}  // namespace ttp
