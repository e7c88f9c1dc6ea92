#ifndef BOBB_PRESOLVE_HPP
#define BOBB_PRESOLVE_HPP

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "bobb/instance.hpp"
#include "bobb/parametric.hpp"
#include "bobb/pareto_store.hpp"

namespace bobb {

enum class FixReason { kDuality, kSingleton, kProbeLower, kProbeUpper };

struct FixingReport {
  struct Fix {
    int var;
    double value;
    FixReason reason;
  };
  std::vector<Fix> fixes;
  std::vector<std::pair<int, int>> dominating;  // (j, i): x_j dominates x_i
  bool empty() const { return fixes.empty() && dominating.empty(); }
};

namespace presolve_detail {

inline constexpr double kZeroTol = 1e-9;

// signs of a variable's constraint column: first = any positive, second = any negative
inline std::pair<bool, bool> column_signs(const Instance& inst, int j) {
  bool pos = false, neg = false;
  for (const Row& r : inst.rows) {
    for (const auto& [col, v] : r.terms) {
      if (col != j || std::abs(v) < kZeroTol) continue;
      (v > 0 ? pos : neg) = true;
    }
  }
  return {pos, neg};
}

inline bool already_fixed(const Instance& inst, int j) {
  return inst.upper[j] - inst.lower[j] <= kFeasTol;
}

}  // namespace presolve_detail

// Duality fixing: a variable whose objective coefficients and constraint
// column share a sign can be pinned to the matching bound without losing any
// efficient solution.  Mutates the instance bounds in place.
inline FixingReport duality_fix(Instance& inst) {
  FixingReport rep;
  for (int j = 0; j < inst.num_vars(); ++j) {
    if (presolve_detail::already_fixed(inst, j)) continue;
    auto [pos, neg] = presolve_detail::column_signs(inst, j);
    if (inst.c1[j] >= 0.0 && inst.c2[j] >= 0.0 && !neg) {
      inst.upper[j] = inst.lower[j];
      rep.fixes.push_back({j, inst.lower[j], FixReason::kDuality});
    } else if (inst.c1[j] <= 0.0 && inst.c2[j] <= 0.0 && !pos) {
      inst.lower[j] = inst.upper[j];
      rep.fixes.push_back({j, inst.upper[j], FixReason::kDuality});
    }
  }
  return rep;
}

// Singleton-column fixing: for each row, a singleton variable with the best
// objective-per-row-unit ratio in both objectives can be pushed to its bound
// when the row keeps slack in the worst case.
inline FixingReport singleton_fix(Instance& inst) {
  using presolve_detail::kZeroTol;
  FixingReport rep;
  const int n = inst.num_vars();
  // count nonzero rows per column
  std::vector<int> nnz(n, 0);
  for (const Row& r : inst.rows) {
    for (const auto& [col, v] : r.terms) {
      if (std::abs(v) >= kZeroTol) ++nnz[col];
    }
  }
  for (int ridx = 0; ridx < static_cast<int>(inst.rows.size()); ++ridx) {
    const Row& row = inst.rows[ridx];
    for (int mirror = 0; mirror < 2; ++mirror) {
      // mirror 0: a_rj > 0, c_j < 0, fix at upper; mirror 1: a_rj < 0,
      // c_j > 0, fix at lower (the sign-flipped image of the first case).
      std::vector<std::pair<int, double>> members;  // (var, a_rj)
      for (const auto& [col, v] : row.terms) {
        if (std::abs(v) < kZeroTol || nnz[col] != 1) continue;
        if (presolve_detail::already_fixed(inst, col)) continue;
        bool sign_ok = mirror == 0 ? (v > 0 && inst.c1[col] < 0 && inst.c2[col] < 0)
                                   : (v < 0 && inst.c1[col] > 0 && inst.c2[col] > 0);
        if (sign_ok) members.emplace_back(col, v);
      }
      if (members.empty()) continue;
      // worst-case row activity with members at their weakest-contribution bound
      double worst = 0.0;
      for (const auto& [col, v] : row.terms) {
        if (std::abs(v) < kZeroTol) continue;
        bool member = false;
        for (const auto& [mc, mv] : members) {
          if (mc == col) member = true;
        }
        if (member) {
          worst += v * (mirror == 0 ? inst.lower[col] : inst.upper[col]);
        } else {
          worst += v * (v > 0 ? inst.upper[col] : inst.lower[col]);
        }
      }
      // best ratio member in both objectives simultaneously
      int s = -1;
      for (const auto& [col, v] : members) {
        bool best = true;
        for (const auto& [oc, ov] : members) {
          if (oc == col) continue;
          if (inst.c1[col] / v > inst.c1[oc] / ov + kZeroTol ||
              inst.c2[col] / v > inst.c2[oc] / ov + kZeroTol) {
            best = false;
            break;
          }
        }
        if (best) {
          s = col;
          break;
        }
      }
      if (s < 0) continue;
      double a_rs = 0.0;
      for (const auto& [col, v] : row.terms) {
        if (col == s) a_rs = v;
      }
      double need = std::abs(a_rs) * (inst.upper[s] - inst.lower[s]);
      if (need <= row.rhs - worst + kZeroTol) {
        double value = mirror == 0 ? inst.upper[s] : inst.lower[s];
        inst.lower[s] = value;
        inst.upper[s] = value;
        rep.fixes.push_back({s, value, FixReason::kSingleton});
      }
    }
  }
  return rep;
}

// Dominating-column pairs (j, i): x_j at least as good as x_i in both
// objectives and every row, same variable kind.  Each pair admits the
// disjunction x_j = u_j or x_i = l_i on the efficient set.
inline std::vector<std::pair<int, int>> dominating_pairs(const Instance& inst) {
  using presolve_detail::kZeroTol;
  const int n = inst.num_vars();
  std::vector<std::vector<double>> col(n, std::vector<double>(inst.rows.size(), 0.0));
  for (std::size_t r = 0; r < inst.rows.size(); ++r) {
    for (const auto& [c, v] : inst.rows[r].terms) col[c][r] = v;
  }
  std::vector<std::pair<int, int>> pairs;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i == j || inst.is_integer(i) != inst.is_integer(j)) continue;
      if (inst.c1[j] > inst.c1[i] + kZeroTol || inst.c2[j] > inst.c2[i] + kZeroTol) continue;
      bool dom = true;
      for (std::size_t r = 0; r < inst.rows.size() && dom; ++r) {
        if (col[j][r] > col[i][r] + kZeroTol) dom = false;
      }
      if (dom) pairs.emplace_back(j, i);
    }
  }
  return pairs;
}

// Linear cut valid for the union {x_j = u_j} or {x_i = l_i}:
// (u_j - x_j)/(u_j - l_j) + (x_i - l_i)/(u_i - l_i) <= 1.
inline Row dominating_disjunction_cut(const Instance& inst, int j, int i) {
  double wj = inst.upper[j] - inst.lower[j];
  double wi = inst.upper[i] - inst.lower[i];
  Row r;
  r.terms.emplace_back(j, -1.0 / wj);
  r.terms.emplace_back(i, 1.0 / wi);
  r.rhs = 1.0 - inst.upper[j] / wj + inst.lower[i] / wi;
  return r;
}

enum class ProbeSide { kLower, kUpper };

// Probing (one round): fix the integer variable at the probed bound, relax
// integrality and build the slice frontier; when the slice is infeasible or
// entirely dominated by the store, the bound moves inward by one.  Returns
// the tightened bound value.
inline std::optional<double> probe_variable(const Instance& inst, const ParetoStore& store,
                                            int var, ProbeSide side, LocalBounds& bounds,
                                            std::span<const Row> extra_rows = {}) {
  if (!inst.is_integer(var)) return std::nullopt;
  if (bounds.upper[var] - bounds.lower[var] < 1.0 - kIntTol) return std::nullopt;
  LocalBounds probe = bounds;
  double at = side == ProbeSide::kLower ? bounds.lower[var] : bounds.upper[var];
  probe.lower[var] = at;
  probe.upper[var] = at;
  bool discard = false;
  ParametricResult pr;
  try {
    ParametricHooks hooks;
    bool all_dom = true;
    hooks.on_piece = [&](const Element& e, bool) {
      if (!store.is_dominated(e)) {
        all_dom = false;
        return false;
      }
      return true;
    };
    pr = parametric_front(inst, probe, extra_rows, &hooks);
    if (pr.status != LpStatus::kOptimal) {
      discard = true;  // infeasible slice holds no efficient point
    } else if (pr.curve.single_point()) {
      discard = store.is_dominated(Element::point(pr.curve.breakpoints[0]));
    } else {
      discard = all_dom && pr.completed;
    }
  } catch (const NumericalFailure&) {
    return std::nullopt;  // inconclusive
  }
  if (!discard) return std::nullopt;
  if (side == ProbeSide::kLower) {
    bounds.lower[var] += 1.0;
    return bounds.lower[var];
  }
  bounds.upper[var] -= 1.0;
  return bounds.upper[var];
}

}  // namespace bobb

#endif  // BOBB_PRESOLVE_HPP
