#include "ttp/clustering.hpp"

#include <algorithm>

namespace ttp {

namespace {

EdgeId wider_interior_neighbor(const TreePosition& pos, EdgeId e, NodeId at,
                               double eps) {
  const TreeNode& node = pos.node(at);
  const double base = pos.width(e);
  EdgeId best = kNoEdge;
  for (int i = 0; i < node.degree; ++i) {
    const EdgeId f = node.edges[i];
    if (f == e || f == best) continue;
    if (pos.width(f) <= base + eps) continue;
    if (!pos.is_interior(pos.other_endpoint(f, at))) continue;
    if (best == kNoEdge || f < best) best = f;
  }
  return best;
}

}  // namespace

std::vector<LocalMinEdge> local_minima(const TreePosition& pos, double eps) {
  std::vector<LocalMinEdge> out;
  for (EdgeId e = 0; e < pos.edge_count(); ++e) {
    const TreeEdgeRec& rec = pos.edge(e);
    const EdgeId wa = wider_interior_neighbor(pos, e, rec.a, eps);
    if (wa == kNoEdge) continue;
    const EdgeId wb = wider_interior_neighbor(pos, e, rec.b, eps);
    if (wb == kNoEdge) continue;
    out.push_back(LocalMinEdge{e, pos.width(e), wa, wb});
  }
  return out;
}

PinchClusterPair clusters_from_minimum(const TreePosition& pos,
                                       const LocalMinEdge& e, bool certified,
                                       double eps) {
  if (!certified) {
    throw Error("cluster extraction requires a certified thin position");
  }
  const auto minima = local_minima(pos, eps);
  const bool is_min = std::any_of(
      minima.begin(), minima.end(),
      [&](const LocalMinEdge& m) { return m.edge == e.edge; });
  if (!is_min) {
    throw Error("edge " + std::to_string(e.edge) + " is not a local minimum");
  }
  const TreeEdgeRec& rec = pos.edge(e.edge);
  const auto mask = pos.side_leaf_mask(e.edge, rec.a);
  PinchClusterPair pair;
  pair.edge = e.edge;
  pair.boundary = pos.width(e.edge);
  for (std::size_t v = 0; v < mask.size(); ++v) {
    (mask[v] ? pair.cluster_a : pair.cluster_b)
        .push_back(static_cast<VertexId>(v));
  }
  return pair;
}

namespace {

struct PinchSearch {
  const WeightedGraph& g;
  double base_boundary;
  double eps;
  std::size_t max_len;
  std::size_t budget;
  std::size_t explored = 0;
  bool adding = false;
  std::vector<std::uint8_t> in_set;   // current membership of A
  std::size_t set_size = 0;
  std::vector<VertexId> sequence;
  std::optional<PinchCounterexample> found;

  // Boundary change of toggling v into/out of A: edges to the outside start
  // crossing or stop crossing accordingly.
  double toggle_delta(VertexId v) const {
    double inside = 0.0;
    double outside = 0.0;
    for (const auto& [to, w] : g.neighbors(v)) {
      if (in_set[to]) {
        inside += w;
      } else {
        outside += w;
      }
    }
    return in_set[v] ? inside - outside : outside - inside;
  }

  // Explore extensions; `boundary` is the boundary after `sequence`, with no
  // strictly larger prefix seen so far (raising prefixes prune the subtree).
  void descend(double boundary) {
    if (found || sequence.size() >= max_len) return;
    const std::size_t n = g.vertex_count();
    for (VertexId v = 0; v < n; ++v) {
      if (found) return;
      const bool movable = adding ? !in_set[v] : in_set[v] != 0;
      if (!movable) continue;
      // Moves that would empty A or fill V are invalid.
      if (adding && set_size + 1 == n) continue;
      if (!adding && set_size == 1) continue;
      if (++explored > budget) {
        throw BudgetError("pinch-cluster enumeration budget exceeded");
      }
      const double next = boundary + toggle_delta(v);
      in_set[v] = adding ? 1 : 0;
      set_size = adding ? set_size + 1 : set_size - 1;
      sequence.push_back(v);
      if (next < base_boundary - eps) {
        found = PinchCounterexample{adding, sequence, next};
      } else if (next <= base_boundary + eps) {
        // Neither a violation nor a raising prefix: keep extending.
        descend(next);
      }
      sequence.pop_back();
      in_set[v] = adding ? 0 : 1;
      set_size = adding ? set_size - 1 : set_size + 1;
    }
  }
};

}  // namespace

std::optional<PinchCounterexample> verify_pinch_cluster(
    const WeightedGraph& g, std::span<const VertexId> a, std::size_t max_len,
    double eps, std::size_t budget) {
  const std::size_t n = g.vertex_count();
  std::vector<std::uint8_t> mask(n, 0);
  std::size_t size = 0;
  for (VertexId v : a) {
    if (v >= n) throw Error("vertex out of range in cluster");
    if (!mask[v]) {
      mask[v] = 1;
      ++size;
    }
  }
  if (size == 0 || size == n) {
    throw Error("pinch-cluster check requires a proper nonempty subset");
  }

  PinchSearch search{g, g.boundary_of_mask(mask), eps, max_len, budget,
                     0, false, mask, size, {}, {}};

  search.adding = true;
  search.descend(search.base_boundary);
  if (search.found) return search.found;
  search.adding = false;
  search.descend(search.base_boundary);
  return search.found;
}

ClusterReport extract_all_clusters(const TreePosition& pos, bool certified,
                                   double eps) {
  if (!certified) {
    throw Error("cluster extraction requires a certified thin position");
  }
  ClusterReport report;
  report.certified_thin = true;
  report.profile = pos.width_profile();
  report.local_minima = local_minima(pos, eps);
  for (const LocalMinEdge& m : report.local_minima) {
    report.pairs.push_back(clusters_from_minimum(pos, m, certified, eps));
  }
  std::stable_sort(report.pairs.begin(), report.pairs.end(),
                   [](const PinchClusterPair& a, const PinchClusterPair& b) {
                     if (a.boundary != b.boundary) return a.boundary < b.boundary;
                     return a.edge < b.edge;
                   });
  return report;
}

}  // namespace ttp
