#include "ttp/shift.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace ttp {

void ThinConfig::validate() const {
  if (!(epsilon > 0.0)) throw Error("epsilon must be positive");
  if (max_iterations < 1) throw Error("max_iterations must be at least 1");
}

std::vector<BranchShift> candidate_shifts(const TreePosition& pos) {
  std::vector<BranchShift> out;
  const std::size_t m = pos.edge_count();
  for (EdgeId x = 0; x < m; ++x) {
    for (EdgeId y = 0; y < m; ++y) {
      if (x == y || pos.edges_adjacent(x, y)) continue;
      out.push_back(BranchShift{x, y});
    }
  }
  return out;
}

std::vector<std::pair<EdgeId, double>> predicted_path_widths(
    const TreePosition& pos, const BranchShift& m) {
  const BranchShiftPath path = pos.path_between_edges(m.x, m.y);
  const std::size_t i = path.length();
  std::vector<std::pair<EdgeId, double>> out;
  out.reserve(i);
  for (std::size_t t = 2; t <= i; ++t) {
    const EdgeId p_t = path.path[t - 1];
    out.emplace_back(p_t, pos.width(p_t) + pos.slope(p_t, m.x));
  }
  const EdgeId p_i = path.path.back();
  const double delta = pos.slope(p_i, m.x) + pos.slope(p_i, m.y) +
                       2.0 * pos.adjacency_weight(m.x, m.y);
  out.emplace_back(path.path.front(), pos.width(p_i) + delta);
  return out;
}

WidthProfile predicted_profile(const TreePosition& pos, const BranchShift& m) {
  std::vector<double> widths = pos.width_cache();
  for (const auto& [edge, w] : predicted_path_widths(pos, m)) {
    widths[edge] = w;
  }
  return WidthProfile(std::move(widths));
}

ShiftOutcome apply_branch_shift(TreePosition& pos, const BranchShift& m,
                                double epsilon) {
  const BranchShiftPath path = pos.path_between_edges(m.x, m.y);
  ShiftOutcome outcome;
  outcome.profile_before = pos.width_profile();

  const NodeId u = path.vertices.front();
  const NodeId s = path.vertices.back();
  const EdgeId p1 = path.path.front();
  const NodeId v = pos.other_endpoint(p1, u);

  ShiftAccess::shift_reconnect(pos, path.start_side, p1, path.end_side, u, v, s);

  outcome.new_path_widths.reserve(path.path.size());
  for (EdgeId e : path.path) {
    const double w = pos.recompute_width(e);
    ShiftAccess::set_cached_width(pos, e, w);
    outcome.new_path_widths.emplace_back(e, w);
  }
  outcome.profile_after = pos.width_profile();
  outcome.accepted =
      outcome.profile_after.thinner_than(outcome.profile_before, epsilon);
  return outcome;
}

namespace {

// Local reduction criteria for shifting x to y.
bool passes_reduction_criteria(const TreePosition& pos, const BranchShift& m,
                               double eps) {
  const BranchShiftPath path = pos.path_between_edges(m.x, m.y);
  const std::size_t i = path.length();
  for (std::size_t t = 2; t <= i; ++t) {
    if (pos.width(path.path[t - 2]) > pos.width(path.path[t - 1]) + eps) {
      return false;
    }
  }
  const EdgeId p_i = path.path.back();
  const double s_x = pos.slope(p_i, m.x);
  if (!(s_x < -eps)) return false;
  const double total =
      s_x + pos.slope(p_i, m.y) + 2.0 * pos.adjacency_weight(m.x, m.y);
  return total < -eps;
}

std::optional<BranchShift> pick_best(const TreePosition& pos,
                                     const std::vector<BranchShift>& hits,
                                     double eps) {
  std::optional<BranchShift> best;
  WidthProfile best_profile;
  for (const BranchShift& hit : hits) {
    WidthProfile profile = predicted_profile(pos, hit);
    if (!best || profile.thinner_than(best_profile, eps)) {
      best = hit;
      best_profile = std::move(profile);
    }
  }
  return best;
}

}  // namespace

std::optional<BranchShift> scan_reducing_shift(const TreePosition& pos,
                                               const ThinConfig& cfg) {
  cfg.validate();
  const auto candidates = candidate_shifts(pos);
  if (cfg.scan == ScanStrategy::FirstImprovement) {
    for (const BranchShift& c : candidates) {
      if (passes_reduction_criteria(pos, c, cfg.epsilon)) return c;
    }
    return std::nullopt;
  }
  std::vector<BranchShift> hits;
  for (const BranchShift& c : candidates) {
    if (passes_reduction_criteria(pos, c, cfg.epsilon)) hits.push_back(c);
  }
  return pick_best(pos, hits, cfg.epsilon);
}

std::optional<BranchShift> find_improving_shift_exhaustive(
    const TreePosition& pos, double epsilon) {
  const WidthProfile current = pos.width_profile();
  for (const BranchShift& c : candidate_shifts(pos)) {
    if (predicted_profile(pos, c).thinner_than(current, epsilon)) {
      return c;
    }
  }
  return std::nullopt;
}

std::optional<BranchShift> parallel_candidate_scan(const TreePosition& pos,
                                                   const ThinConfig& cfg) {
  cfg.validate();
  if (!cfg.parallel_scan) {
    throw std::invalid_argument("parallel_candidate_scan requires cfg.parallel_scan");
  }
  const auto candidates = candidate_shifts(pos);
  unsigned workers = cfg.workers ? cfg.workers : std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  workers = std::min<std::size_t>(workers, std::max<std::size_t>(candidates.size(), 1));

  const std::size_t npos = candidates.size();
  // Earliest hit index so far; lets workers skip candidates that cannot win.
  std::atomic<std::size_t> best_hit{npos};
  std::vector<std::vector<std::size_t>> hits_per_worker(workers);

  const bool first_only = cfg.scan == ScanStrategy::FirstImprovement;
  auto run = [&](unsigned w) {
    const std::size_t chunk = (npos + workers - 1) / workers;
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(npos, lo + chunk);
    for (std::size_t idx = lo; idx < hi; ++idx) {
      if (first_only && idx > best_hit.load(std::memory_order_relaxed)) break;
      if (passes_reduction_criteria(pos, candidates[idx], cfg.epsilon)) {
        hits_per_worker[w].push_back(idx);
        if (first_only) {
          std::size_t seen = best_hit.load(std::memory_order_relaxed);
          while (idx < seen &&
                 !best_hit.compare_exchange_weak(seen, idx,
                                                 std::memory_order_relaxed)) {
          }
          break;
        }
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  for (std::thread& t : pool) t.join();

  std::vector<std::size_t> all;
  for (const auto& part : hits_per_worker) {
    all.insert(all.end(), part.begin(), part.end());
  }
  if (all.empty()) return std::nullopt;
  std::sort(all.begin(), all.end());
  if (first_only) return candidates[all.front()];
  std::vector<BranchShift> hits;
  hits.reserve(all.size());
  for (std::size_t idx : all) hits.push_back(candidates[idx]);
  return pick_best(pos, hits, cfg.epsilon);
}

ThinResult thin(TreePosition& pos, const ThinConfig& cfg) {
  cfg.validate();
  ThinResult result;
  while (true) {
    bool via_exhaustive = false;
    std::optional<BranchShift> move =
        cfg.parallel_scan ? parallel_candidate_scan(pos, cfg)
                          : scan_reducing_shift(pos, cfg);
    if (!move) {
      move = find_improving_shift_exhaustive(pos, cfg.epsilon);
      via_exhaustive = true;
    }
    if (!move) break;
    if (result.iterations >= cfg.max_iterations) {
      throw IterationCapError(
          "iteration cap reached with reducing moves remaining; epsilon may be "
          "miscalibrated");
    }
    const ShiftOutcome outcome = apply_branch_shift(pos, *move, cfg.epsilon);
    if (!outcome.accepted) {
      throw Error("accepted shift failed to lower the width profile; epsilon "
                  "may be miscalibrated");
    }
    TraceStep step;
    step.index = result.iterations;
    step.shift = *move;
    step.via_exhaustive = via_exhaustive;
    step.head_before = outcome.profile_before.head();
    step.head_after = outcome.profile_after.head();
    result.trace.push_back(step);
    ++result.iterations;
  }
  result.certified_thin = true;
  return result;
}

}  // namespace ttp
