#pragma once

// Flow-splitting solvers shared by the placement algorithms:
//  - greedy_bisection_minmax: min-max load split of one demand across
//    candidates (bisection on the peak level plus an exact water-fill).
//  - simplex_min_cost: minimum-cost split under per-candidate caps,
//    solved by a small two-phase tableau simplex with Bland's rule.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace chainsim {

// How the min-max split measures "load": utilization compares
// (load+assignment)/capacity, which is capacity-fair on heterogeneous
// candidates; absolute compares load+assignment directly.
enum class LoadMetric { Utilization, Absolute };

struct SplitCandidate {
  double current_load = 0.0;  // u_k, in demand units
  double capacity = 0.0;      // hard cap on u_k + assignment
  double unit_cost = 0.0;     // used by simplex_min_cost only
};

struct SplitProblem {
  std::vector<SplitCandidate> candidates;
  double demand = 0.0;
  // Optional per-candidate assignment cap in demand units (e.g. the
  // residual bandwidth of the path feeding the candidate). Empty = uncapped.
  std::vector<double> link_caps;
  LoadMetric metric = LoadMetric::Utilization;
};

struct SplitSolution {
  std::vector<double> ratios;   // fraction of demand per candidate, sums to 1
  double objective_value = 0.0;  // see each solver for its meaning
};

namespace detail {

inline void validate_split_problem(const SplitProblem& p) {
  if (p.candidates.empty()) throw std::invalid_argument("split: no candidates");
  if (!(p.demand > 0)) throw std::invalid_argument("split: demand must be positive");
  if (!p.link_caps.empty() && p.link_caps.size() != p.candidates.size())
    throw std::invalid_argument("split: link_caps size mismatch");
  for (const auto& c : p.candidates) {
    if (c.capacity < c.current_load)
      throw std::invalid_argument("split: capacity below current load");
    if (c.current_load < 0) throw std::invalid_argument("split: negative load");
  }
  for (double lc : p.link_caps)
    if (lc < 0) throw std::invalid_argument("split: negative link cap");
}

inline double assignable_cap(const SplitProblem& p, std::size_t k) {
  const auto& c = p.candidates[k];
  double cap = c.capacity - c.current_load;
  if (!p.link_caps.empty()) cap = std::min(cap, p.link_caps[k]);
  return std::max(cap, 0.0);
}

}  // namespace detail

// Min-max split: choose ratios >= 0 summing to 1 so the worst candidate
// load (per `metric`) after assignment is minimal; every candidate counts
// toward the peak even when it receives nothing. Returns nullopt when the
// caps cannot absorb the demand. objective_value is the resulting peak
// absolute load max_k(u_k + x_k), independent of the guiding metric.
//
// `tol` bounds the bisection bracket on the peak level, measured in
// demand units; the loop also runs to fixed-point so results are
// deterministic for any sane tol.
inline std::optional<SplitSolution> greedy_bisection_minmax(const SplitProblem& p,
                                                            double tol = 1e-9) {
  detail::validate_split_problem(p);
  const std::size_t n = p.candidates.size();
  std::vector<double> ub(n);
  double total_cap = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    ub[k] = detail::assignable_cap(p, k);
    total_cap += ub[k];
  }
  if (total_cap < p.demand) return std::nullopt;

  const bool util = p.metric == LoadMetric::Utilization;
  // Level -> greedy assignment; feasible iff the sum covers the demand.
  auto fill_at = [&](double level, std::vector<double>& x) {
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const auto& c = p.candidates[k];
      const double room = util ? level * c.capacity - c.current_load : level - c.current_load;
      x[k] = std::clamp(room, 0.0, ub[k]);
      sum += x[k];
    }
    return sum;
  };

  double lo = 0.0, hi = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& c = p.candidates[k];
    const double base = util ? c.current_load / c.capacity : c.current_load;
    const double top =
        util ? (c.current_load + ub[k]) / c.capacity : c.current_load + ub[k];
    lo = std::max(lo, base);
    hi = std::max(hi, top);
  }

  std::vector<double> x(n);
  const double level_tol =
      util ? std::max(tol, 1e-15) / std::max(1.0, p.demand) : std::max(tol, 1e-15);
  for (int it = 0; it < 200 && hi - lo > level_tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (fill_at(mid, x) >= p.demand)
      hi = mid;
    else
      lo = mid;
  }
  double sum = fill_at(hi, x);
  // Water-fill down to the exact demand; trimming from the last candidate
  // keeps earlier (better-ranked) candidates filled first on ties.
  double excess = sum - p.demand;
  for (std::size_t k = n; k-- > 0 && excess > 0;) {
    const double cut = std::min(excess, x[k]);
    x[k] -= cut;
    excess -= cut;
  }

  SplitSolution out;
  out.ratios.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.ratios[k] = x[k] / p.demand;
  double peak = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    peak = std::max(peak, p.candidates[k].current_load + x[k]);
  out.objective_value = peak;
  return out;
}

// Minimum-cost split: minimize sum_k cost_k * ratio_k subject to
// sum ratios = 1 and ratio_k * demand <= min(link_cap_k, capacity_k - u_k).
// objective_value is the achieved cost. nullopt = infeasible.
inline std::optional<SplitSolution> simplex_min_cost(const SplitProblem& p) {
  detail::validate_split_problem(p);
  const std::size_t n = p.candidates.size();
  std::vector<double> ub(n);
  for (std::size_t k = 0; k < n; ++k) ub[k] = detail::assignable_cap(p, k) / p.demand;

  // Tableau layout: columns = n ratio vars | n slack vars | artificial | rhs.
  // Rows = n upper-bound rows, the sum-to-one equality, objective row.
  const std::size_t cols = 2 * n + 2;
  const std::size_t rows = n + 1;
  std::vector<std::vector<double>> t(rows + 1, std::vector<double>(cols, 0.0));
  std::vector<std::size_t> basis(rows);
  for (std::size_t k = 0; k < n; ++k) {
    t[k][k] = 1.0;
    t[k][n + k] = 1.0;
    t[k][cols - 1] = ub[k];
    basis[k] = n + k;
  }
  for (std::size_t k = 0; k < n; ++k) t[n][k] = 1.0;
  t[n][2 * n] = 1.0;  // artificial variable for the equality row
  t[n][cols - 1] = 1.0;
  basis[n] = 2 * n;

  auto pivot = [&](std::size_t pr, std::size_t pc) {
    const double pv = t[pr][pc];
    for (auto& v : t[pr]) v /= pv;
    for (std::size_t r = 0; r <= rows; ++r) {
      if (r == pr) continue;
      const double f = t[r][pc];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < cols; ++c) t[r][c] -= f * t[pr][c];
    }
    basis[pr] = pc;
  };

  // Bland's rule: smallest eligible column enters, smallest-index row
  // among minimal ratios leaves. Terminates without cycling.
  auto run = [&](std::size_t obj_row, std::size_t usable_cols) -> bool {
    for (;;) {
      std::size_t pc = usable_cols;
      for (std::size_t c = 0; c < usable_cols; ++c)
        if (t[obj_row][c] < -1e-12) {
          pc = c;
          break;
        }
      if (pc == usable_cols) return true;
      std::size_t pr = rows;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < rows; ++r) {
        if (t[r][pc] > 1e-12) {
          const double ratio = t[r][cols - 1] / t[r][pc];
          if (ratio < best - 1e-12 || (ratio < best + 1e-12 && (pr == rows || r < pr))) {
            if (ratio < best) best = ratio;
            pr = r;
          }
        }
      }
      if (pr == rows) return false;  // unbounded (cannot happen: box-bounded)
      pivot(pr, pc);
    }
  };

  // Phase 1: drive the artificial out by minimizing it.
  for (std::size_t c = 0; c < cols; ++c) t[rows][c] = -t[n][c];
  t[rows][2 * n] = 0.0;
  if (!run(rows, 2 * n)) return std::nullopt;
  const double phase1 = -t[rows][cols - 1];
  if (phase1 > 1e-9) return std::nullopt;  // equality unreachable: infeasible
  if (basis[n] == 2 * n) {
    // Degenerate: artificial still basic at zero; pivot it out if possible.
    for (std::size_t c = 0; c < 2 * n; ++c)
      if (std::abs(t[n][c]) > 1e-9) {
        pivot(n, c);
        break;
      }
  }

  // Phase 2: minimize the real cost.
  for (std::size_t c = 0; c < cols; ++c) t[rows][c] = 0.0;
  for (std::size_t k = 0; k < n; ++k) t[rows][k] = p.candidates[k].unit_cost;
  for (std::size_t r = 0; r < rows; ++r) {
    if (basis[r] < n && t[rows][basis[r]] != 0.0) {
      const double f = t[rows][basis[r]];
      for (std::size_t c = 0; c < cols; ++c) t[rows][c] -= f * t[r][c];
    }
  }
  if (!run(rows, 2 * n)) return std::nullopt;

  SplitSolution out;
  out.ratios.assign(n, 0.0);
  for (std::size_t r = 0; r < rows; ++r)
    if (basis[r] < n) out.ratios[basis[r]] = std::max(0.0, t[r][cols - 1]);
  double cost = 0.0;
  for (std::size_t k = 0; k < n; ++k) cost += out.ratios[k] * p.candidates[k].unit_cost;
  out.objective_value = cost;
  return out;
}

}  // namespace chainsim
