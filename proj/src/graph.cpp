#include "ttp/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

namespace ttp {

WeightedGraph WeightedGraph::from_edge_list(std::size_t vertex_count,
                                            std::span<const WeightedEdge> edges) {
  WeightedGraph g;
  g.vertex_count_ = vertex_count;

  std::map<std::pair<VertexId, VertexId>, double> merged;
  for (const WeightedEdge& e : edges) {
    if (e.u >= vertex_count || e.v >= vertex_count) {
      throw Error("edge endpoint out of range: (" + std::to_string(e.u) + ", " +
                  std::to_string(e.v) + ")");
    }
    if (e.u == e.v) {
      throw Error("self-loop rejected at vertex " + std::to_string(e.u));
    }
    if (!(e.weight > 0.0)) {
      throw Error("nonpositive edge weight rejected: " +
                  std::to_string(e.weight));
    }
    const VertexId lo = std::min(e.u, e.v);
    const VertexId hi = std::max(e.u, e.v);
    merged[{lo, hi}] += e.weight;
  }

  g.edges_.reserve(merged.size());
  for (const auto& [key, w] : merged) {
    g.edges_.push_back(WeightedEdge{key.first, key.second, w});
    g.total_weight_ += w;
  }

  std::vector<std::size_t> degree(vertex_count, 0);
  for (const WeightedEdge& e : g.edges_) {
    ++degree[e.u];
    ++degree[e.v];
  }
  g.adjacency_offsets_.assign(vertex_count + 1, 0);
  for (std::size_t v = 0; v < vertex_count; ++v) {
    g.adjacency_offsets_[v + 1] = g.adjacency_offsets_[v] + degree[v];
  }
  g.adjacency_.resize(g.adjacency_offsets_[vertex_count]);
  g.degree_weight_.assign(vertex_count, 0.0);
  std::vector<std::size_t> cursor(g.adjacency_offsets_.begin(),
                                  g.adjacency_offsets_.end() - 1);
  for (const WeightedEdge& e : g.edges_) {
    g.adjacency_[cursor[e.u]++] = {e.v, e.weight};
    g.adjacency_[cursor[e.v]++] = {e.u, e.weight};
    g.degree_weight_[e.u] += e.weight;
    g.degree_weight_[e.v] += e.weight;
  }

  if (vertex_count <= kDenseMatrixLimit) {
    g.dense_.assign(vertex_count * vertex_count, 0.0);
    for (const WeightedEdge& e : g.edges_) {
      g.dense_[static_cast<std::size_t>(e.u) * vertex_count + e.v] = e.weight;
      g.dense_[static_cast<std::size_t>(e.v) * vertex_count + e.u] = e.weight;
    }
  }
  return g;
}

std::span<const std::pair<VertexId, double>> WeightedGraph::neighbors(
    VertexId v) const {
  if (v >= vertex_count_) throw Error("vertex out of range");
  return {adjacency_.data() + adjacency_offsets_[v],
          adjacency_offsets_[v + 1] - adjacency_offsets_[v]};
}

double WeightedGraph::degree_weight(VertexId v) const {
  if (v >= vertex_count_) throw Error("vertex out of range");
  return degree_weight_[v];
}

double WeightedGraph::pair_weight(VertexId u, VertexId v) const {
  if (u >= vertex_count_ || v >= vertex_count_) {
    throw Error("vertex out of range");
  }
  if (u == v) throw Error("pair_weight requires distinct vertices");
  for (const auto& [to, w] : neighbors(u)) {
    if (to == v) return w;
  }
  return 0.0;
}

namespace {

std::vector<std::uint8_t> mask_of(std::span<const VertexId> set,
                                  std::size_t n) {
  std::vector<std::uint8_t> mask(n, 0);
  for (VertexId v : set) {
    if (v >= n) throw Error("vertex out of range in set");
    mask[v] = 1;
  }
  return mask;
}

}  // namespace

double WeightedGraph::set_weight(std::span<const VertexId> a,
                                 std::span<const VertexId> b) const {
  const auto mask_a = mask_of(a, vertex_count_);
  const auto mask_b = mask_of(b, vertex_count_);
  double acc = 0.0;
  for (const WeightedEdge& e : edges_) {
    if ((mask_a[e.u] && mask_b[e.v]) || (mask_a[e.v] && mask_b[e.u])) {
      acc += e.weight;
    }
  }
  return acc;
}

double WeightedGraph::boundary(std::span<const VertexId> a) const {
  return boundary_of_mask(mask_of(a, vertex_count_));
}

double WeightedGraph::boundary_of_mask(
    const std::vector<std::uint8_t>& mask) const {
  if (mask.size() != vertex_count_) throw Error("mask size mismatch");
  double acc = 0.0;
  for (const WeightedEdge& e : edges_) {
    if (mask[e.u] != mask[e.v]) acc += e.weight;
  }
  return acc;
}

const std::vector<double>& WeightedGraph::dense_matrix() const {
  if (dense_.empty() && vertex_count_ > 0) {
    throw Error("dense matrix unavailable for graphs with more than " +
                std::to_string(kDenseMatrixLimit) + " vertices");
  }
  return dense_;
}

void Partition::validate(std::size_t vertex_count) const {
  block_labels(vertex_count);
}

std::vector<std::uint32_t> Partition::block_labels(
    std::size_t vertex_count) const {
  std::vector<std::uint32_t> label(vertex_count, static_cast<std::uint32_t>(-1));
  std::size_t covered = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) throw Error("partition block " + std::to_string(b) + " is empty");
    for (VertexId v : blocks[b]) {
      if (v >= vertex_count) throw Error("partition vertex out of range");
      if (label[v] != static_cast<std::uint32_t>(-1)) {
        throw Error("partition blocks overlap at vertex " + std::to_string(v));
      }
      label[v] = static_cast<std::uint32_t>(b);
      ++covered;
    }
  }
  if (covered != vertex_count) {
    throw Error("partition does not cover every vertex");
  }
  return label;
}

QuotientGraph quotient_graph(const WeightedGraph& g, Partition partition) {
  const auto label = partition.block_labels(g.vertex_count());
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> cross;
  for (const WeightedEdge& e : g.edges()) {
    const auto bu = label[e.u];
    const auto bv = label[e.v];
    if (bu == bv) continue;
    cross[{std::min(bu, bv), std::max(bu, bv)}] += e.weight;
  }
  std::vector<WeightedEdge> qedges;
  qedges.reserve(cross.size());
  for (const auto& [key, w] : cross) {
    qedges.push_back(WeightedEdge{key.first, key.second, w});
  }
  QuotientGraph q;
  q.quotient =
      WeightedGraph::from_edge_list(partition.block_count(), qedges);
  q.partition = std::move(partition);
  return q;
}

LinearOrdering::LinearOrdering(std::vector<VertexId> vertex_at)
    : vertex_at_(std::move(vertex_at)) {
  position_of_.assign(vertex_at_.size(), static_cast<std::uint32_t>(-1));
  for (std::size_t p = 0; p < vertex_at_.size(); ++p) {
    VertexId v = vertex_at_[p];
    if (v >= vertex_at_.size() || position_of_[v] != static_cast<std::uint32_t>(-1)) {
      throw Error("ordering is not a permutation of the vertex ids");
    }
    position_of_[v] = static_cast<std::uint32_t>(p);
  }
}

LinearOrdering LinearOrdering::identity(std::size_t n) {
  std::vector<VertexId> seq(n);
  std::iota(seq.begin(), seq.end(), 0u);
  return LinearOrdering(std::move(seq));
}

}  // namespace ttp
