#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ttp/tree_position.hpp"

namespace ttp {

// Directed move: shifting x to y (the reverse is a different move).
struct BranchShift {
  EdgeId x = kNoEdge;
  EdgeId y = kNoEdge;

  bool operator==(const BranchShift&) const = default;
};

struct ShiftOutcome {
  // Refreshed widths of the path edges, keyed by edge id.
  std::vector<std::pair<EdgeId, double>> new_path_widths;
  WidthProfile profile_before;
  WidthProfile profile_after;
  // True iff the new profile is strictly thinner than the old one.
  bool accepted = false;
};

enum class ScanStrategy : std::uint8_t { FirstImprovement, BestImprovement };
enum class InitKind : std::uint8_t { Caterpillar, Random };

struct ThinConfig {
  double epsilon = kDefaultEpsilon;
  ScanStrategy scan = ScanStrategy::FirstImprovement;
  InitKind init = InitKind::Caterpillar;
  std::uint64_t seed = 0;
  std::size_t max_iterations = 100000;
  bool parallel_scan = false;
  unsigned workers = 0;  // 0 = hardware concurrency

  void validate() const;
};

struct TraceStep {
  std::size_t index = 0;
  BranchShift shift;
  bool via_exhaustive = false;
  double head_before = 0.0;
  double head_after = 0.0;
};

struct ThinResult {
  std::size_t iterations = 0;
  bool certified_thin = false;
  std::vector<TraceStep> trace;
};

// All ordered candidate moves (x, y) over nonadjacent edge pairs, ascending
// by (x, y).  Both directions appear; they are different moves.
std::vector<BranchShift> candidate_shifts(const TreePosition& pos);

// Performs the edit operation: the interior vertex anchoring x is detached
// from its path end and re-inserted splitting y's side.  The leaf map is
// untouched; only path-edge widths are refreshed (off-path widths cannot
// change).  Rejects adjacent pairs.
ShiftOutcome apply_branch_shift(TreePosition& pos, const BranchShift& m,
                                double epsilon = kDefaultEpsilon);

// Widths the path edges will have after apply_branch_shift, keyed by edge id:
// the path edge next to x ends up adjacent to y and picks up the combined
// change s(p_i,x) + s(p_i,y) + 2 a(x,y); every other path edge p_t loses the
// branch x from its near side and changes by s(p_t, x).
std::vector<std::pair<EdgeId, double>> predicted_path_widths(
    const TreePosition& pos, const BranchShift& m);

// Profile after the move, assembled from the predictions without mutating.
WidthProfile predicted_profile(const TreePosition& pos, const BranchShift& m);

// Scan for a move passing the local reduction criteria: s(p_i, x) < 0, path
// widths nondecreasing toward y, and a strictly negative total change at the
// final path edge.  Any hit strictly lowers the width profile.  Deterministic:
// candidates in ascending (x, y) order; FirstImprovement returns the first
// hit, BestImprovement the hit with the thinnest predicted profile (ties by
// candidate order).
std::optional<BranchShift> scan_reducing_shift(const TreePosition& pos,
                                               const ThinConfig& cfg);

// Decides weak reducibility exactly: tries every ordered nonadjacent pair and
// compares the full predicted profile; returns the first strictly improving
// move.  The criteria scan above is sufficient-only, so the thinning driver
// falls back to this before certifying a position thin.
std::optional<BranchShift> find_improving_shift_exhaustive(
    const TreePosition& pos, double epsilon = kDefaultEpsilon);

// Same result as scan_reducing_shift for any worker count; candidates are
// evaluated concurrently against the immutable position and merged by
// candidate order.  Requires cfg.parallel_scan.
std::optional<BranchShift> parallel_candidate_scan(const TreePosition& pos,
                                                   const ThinConfig& cfg);

// Descends to a strongly irreducible (thin) position: applies criteria-scan
// hits until none remain, then the exhaustive check, repeating until neither
// finds a move.  Every accepted step strictly lowers the profile.  Throws
// IterationCapError if cfg.max_iterations is reached with moves remaining.
ThinResult thin(TreePosition& pos, const ThinConfig& cfg);

}  // namespace ttp
