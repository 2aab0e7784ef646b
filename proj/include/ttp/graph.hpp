#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "ttp/common.hpp"

namespace ttp {

struct WeightedEdge {
  VertexId u;
  VertexId v;
  double weight;
};

// Undirected weighted graph over dense vertex ids.  No self-loops, strictly
// positive weights, at most one stored edge per unordered pair (parallel
// input entries are merged by summing).  Immutable after construction and
// safe for concurrent reads.
class WeightedGraph {
public:
  WeightedGraph() = default;

  // Rejects self-loops, nonpositive weights and out-of-range endpoints.
  static WeightedGraph from_edge_list(std::size_t vertex_count,
                                      std::span<const WeightedEdge> edges);

  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  // Merged edges with u < v, sorted by (u, v).
  const std::vector<WeightedEdge>& edges() const { return edges_; }
  std::span<const std::pair<VertexId, double>> neighbors(VertexId v) const;
  double total_weight() const { return total_weight_; }
  double degree_weight(VertexId v) const;

  // w(u, v): stored weight of the edge, 0 when absent; u == v rejected.
  double pair_weight(VertexId u, VertexId v) const;

  // w(A, B): total weight over unordered pairs {a, b} with one endpoint in A
  // and the other in B, each pair counted once (A and B may overlap).
  double set_weight(std::span<const VertexId> a,
                    std::span<const VertexId> b) const;

  // w(A, V \ A).
  double boundary(std::span<const VertexId> a) const;
  double boundary_of_mask(const std::vector<std::uint8_t>& mask) const;

  // Row-major vertex_count x vertex_count matrix of pair weights, zero
  // diagonal.  Built eagerly for graphs small enough for the dense
  // accumulation path; throws otherwise.
  bool has_dense_matrix() const { return !dense_.empty(); }
  const std::vector<double>& dense_matrix() const;

private:
  std::size_t vertex_count_ = 0;
  std::vector<WeightedEdge> edges_;
  std::vector<std::pair<VertexId, double>> adjacency_;
  std::vector<std::size_t> adjacency_offsets_;
  std::vector<double> degree_weight_;
  std::vector<double> dense_;
  double total_weight_ = 0.0;
};

// Largest vertex count for which the dense matrix is materialized.
inline constexpr std::size_t kDenseMatrixLimit = 1024;

struct Partition {
  std::vector<std::vector<VertexId>> blocks;

  std::size_t block_count() const { return blocks.size(); }
  // Throws if blocks are empty, overlap, or do not cover [0, n).
  void validate(std::size_t vertex_count) const;
  // block index per vertex; validates as a side effect.
  std::vector<std::uint32_t> block_labels(std::size_t vertex_count) const;
};

// Weighted graph over the blocks of a partition: block pair (i, j) carries
// w(P_i, P_j); edges inside one block are dropped.
struct QuotientGraph {
  Partition partition;
  WeightedGraph quotient;
};

QuotientGraph quotient_graph(const WeightedGraph& g, Partition partition);

// Bijection V -> [0, N-1]; position 0 is the front of the ordering.
class LinearOrdering {
public:
  LinearOrdering() = default;
  // vertex_at[p] = vertex at position p; must be a permutation of [0, N).
  explicit LinearOrdering(std::vector<VertexId> vertex_at);
  static LinearOrdering identity(std::size_t n);

  std::size_t size() const { return vertex_at_.size(); }
  VertexId vertex_at(std::size_t position) const { return vertex_at_.at(position); }
  std::size_t position_of(VertexId v) const { return position_of_.at(v); }
  const std::vector<VertexId>& sequence() const { return vertex_at_; }

  bool operator==(const LinearOrdering& other) const {
    return vertex_at_ == other.vertex_at_;
  }

private:
  std::vector<VertexId> vertex_at_;
  std::vector<std::uint32_t> position_of_;
};

}  // namespace ttp
