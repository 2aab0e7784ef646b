#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ttp/graph.hpp"
#include "ttp/tree_position.hpp"

namespace ttp {

// Prefix boundary widths of a linear ordering: widths[i] = w(A_i, V \ A_i)
// where A_i holds the vertices at positions 0..i; indices 0..N-2.
struct TiloWidths {
  std::vector<double> widths;
};

TiloWidths tilo_widths(const WeightedGraph& g, const LinearOrdering& o);

// s_{i,k}: weight from the vertex at position k to the tail beyond position i
// minus its weight into the head; the width change of prefix cut i if that
// vertex were moved across it.
double tilo_slope(const WeightedGraph& g, const LinearOrdering& o,
                  std::size_t i, std::size_t k);

// Cyclic shift of the block [a, b] sending position a to position b
// (either direction).  a == b rejected.
LinearOrdering tilo_shift(const LinearOrdering& o, std::size_t a, std::size_t b);

// First (k, i) with k < i passing the linear reduction criteria:
// s_{i,k} > 0, widths nondecreasing over (k, i], and
// s_{i,k} - s_{i,i+1} - 2 a_{k,i+1} > 0.  The reducing move sends position k
// to position i+1, just past the inspected prefix: the third condition is
// exactly b'_i < b_i for that target.  (Soundness-tested; with target i the
// conditions admit width increases.)  Only the k < i direction is scanned;
// the tree-level engine covers the reverse by scanning both (x, y) orders.
std::optional<std::pair<std::size_t, std::size_t>> tilo_reducible(
    const WeightedGraph& g, const LinearOrdering& o,
    double epsilon = kDefaultEpsilon);

// Lexicographic comparison of sorted width multisets (thinner == -1).
int compare_tilo_widths(const TiloWidths& a, const TiloWidths& b, double eps);

// The quotient graph over the blocks hanging off the x-to-y path: block 0
// behind the stationary branch at the x end, block 1 behind x, one block per
// mid branch, then the block behind y and the one behind the stationary
// branch at the y end.  Comes with the identity ordering on blocks, which
// ties tree widths/slopes to linear ones.
struct InducedQuotient {
  QuotientGraph quotient;
  LinearOrdering ordering;  // identity on blocks
  BranchShiftPath path;
};

InducedQuotient induced_quotient(const TreePosition& pos, EdgeId x, EdgeId y);

struct CheckResult {
  bool ok = true;
  std::vector<std::string> mismatches;

  void fail(std::string msg) {
    ok = false;
    mismatches.push_back(std::move(msg));
  }
};

// Prefix widths of the induced identity ordering equal the tree widths of the
// corresponding path edges (ends included: position 0 matches the stationary
// start branch, the last position the stationary end branch).
CheckResult check_width_equivalence(const TreePosition& pos, EdgeId x, EdgeId y,
                                    double eps = kDefaultEpsilon);

// Applying the shift and re-inducing the quotient from the moved pair yields
// the same blocks up to the fixed relabeling, with identical edge weights.
CheckResult check_quotient_invariance(const TreePosition& pos, EdgeId x,
                                      EdgeId y, double eps = kDefaultEpsilon);

// The ordering induced after the shift equals the cyclic shift of the
// identity ordering from position 1 to position i+1.
CheckResult check_cyclic_correspondence(const TreePosition& pos, EdgeId x,
                                        EdgeId y);

// Tree slopes of path edges against side branches equal the linear slopes of
// the induced ordering up to the stated sign: s(p_j, f_k) = -s_{j,k} for
// k <= j and +s_{j,k} for k > j.
CheckResult check_slope_translation(const TreePosition& pos, EdgeId x, EdgeId y,
                                    double eps = kDefaultEpsilon);

}  // namespace ttp
