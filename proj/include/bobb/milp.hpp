#ifndef BOBB_MILP_HPP
#define BOBB_MILP_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "bobb/instance.hpp"
#include "bobb/simplex.hpp"

namespace bobb {

enum class MilpStatus { kOptimal, kFeasibleTimeout, kInfeasible };

struct MilpResult {
  MilpStatus status = MilpStatus::kInfeasible;
  std::optional<std::vector<double>> incumbent;
  double incumbent_value = kInf;
  double dual_bound = -kInf;
  // Every integer-feasible solution met during the solve, incumbents included.
  std::vector<std::vector<double>> pool;
  int nodes = 0;
  int lps = 0;
};

struct MilpOptions {
  long long node_limit = 2000000;
};

// Globally valid level-curve cut for the scalarized objective:
// w1*f1 + w2*f2 >= dual_bound, encoded as a <= row.  A small slack keeps
// optimal points from being shaved off by rounding.
inline Row level_curve_cut(const Instance& inst, std::pair<double, double> weights,
                           double dual_bound) {
  std::vector<double> coeffs(inst.num_vars());
  for (int j = 0; j < inst.num_vars(); ++j)
    coeffs[j] = -(weights.first * inst.c1[j] + weights.second * inst.c2[j]);
  double rhs = -(dual_bound - 1e-9 * (1.0 + std::abs(dual_bound)));
  return dense_row(coeffs, rhs);
}

// Single-objective branch-and-bound over the LP core: best-bound node
// selection, most-fractional branching with lowest index on ties.  The
// time limit makes this usable as an any-time subroutine; on timeout the
// dual bound stays valid and the incumbent (when present) is feasible.
inline MilpResult milp_solve(const Instance& inst, std::pair<double, double> weights,
                             const LocalBounds& bounds, std::span<const Row> extra_rows = {},
                             double time_limit_s = 60.0, const MilpOptions& opt = {}) {
  using Clock = std::chrono::steady_clock;
  const auto deadline = Clock::now() + std::chrono::duration<double>(time_limit_s);

  struct BbNode {
    LocalBounds bounds;
    double bound;
    long long seq;
  };
  struct Cmp {
    bool operator()(const BbNode& a, const BbNode& b) const {
      if (a.bound != b.bound) return a.bound > b.bound;  // smaller bound first
      return a.seq > b.seq;                              // FIFO on ties
    }
  };

  MilpResult res;
  std::priority_queue<BbNode, std::vector<BbNode>, Cmp> open;
  long long seq = 0;
  open.push(BbNode{bounds, -kInf, seq++});

  const double int_gap_tol = 1e-9;
  while (!open.empty()) {
    if (res.nodes >= opt.node_limit) break;
    if (Clock::now() >= deadline) break;
    BbNode node = open.top();
    open.pop();
    if (res.incumbent &&
        node.bound >= res.incumbent_value - int_gap_tol * (1.0 + std::abs(res.incumbent_value)))
      continue;
    LpResult lp = lp_solve(inst, weights, node.bounds, extra_rows);
    ++res.lps;
    ++res.nodes;
    if (lp.status != LpStatus::kOptimal) continue;  // infeasible subtree
    if (res.incumbent &&
        lp.value >= res.incumbent_value - int_gap_tol * (1.0 + std::abs(res.incumbent_value)))
      continue;

    int frac_var = -1;
    double frac_score = -1.0;
    for (int j = 0; j < inst.n_int; ++j) {
      double f = lp.x[j] - std::floor(lp.x[j]);
      double dist = std::min(f, 1.0 - f);
      if (dist > kIntTol && dist > frac_score + 1e-12) {
        frac_score = dist;
        frac_var = j;
      }
    }
    if (frac_var < 0) {
      // integer feasible: round the integer block exactly
      std::vector<double> x = lp.x;
      for (int j = 0; j < inst.n_int; ++j) x[j] = std::round(x[j]);
      res.pool.push_back(x);
      if (lp.value < res.incumbent_value) {
        res.incumbent = x;
        res.incumbent_value = lp.value;
      }
      continue;
    }
    double v = lp.x[frac_var];
    BbNode down{node.bounds, lp.value, seq++};
    down.bounds.upper[frac_var] = std::floor(v);
    BbNode up{node.bounds, lp.value, seq++};
    up.bounds.lower[frac_var] = std::floor(v) + 1.0;
    open.push(down);
    open.push(up);
  }

  bool finished = open.empty() && res.nodes < opt.node_limit;
  if (finished) {
    if (res.incumbent) {
      res.status = MilpStatus::kOptimal;
      res.dual_bound = res.incumbent_value;
    } else {
      res.status = MilpStatus::kInfeasible;
      res.dual_bound = kInf;  // bound on a minimum over the empty set
    }
    return res;
  }
  // stopped early: best open bound is the proof
  double best_open = res.incumbent ? res.incumbent_value : kInf;
  std::priority_queue<BbNode, std::vector<BbNode>, Cmp> rest = std::move(open);
  if (!rest.empty()) best_open = std::min(best_open, rest.top().bound);
  res.dual_bound = best_open == kInf ? -kInf : best_open;
  res.status = MilpStatus::kFeasibleTimeout;
  return res;
}

}  // namespace bobb

#endif  // BOBB_MILP_HPP
