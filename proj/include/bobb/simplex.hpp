#ifndef BOBB_SIMPLEX_HPP
#define BOBB_SIMPLEX_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "bobb/instance.hpp"
#include "bobb/numerics.hpp"

namespace bobb {

enum class LpStatus { kOptimal, kInfeasible };

struct NumericalFailure : std::runtime_error {
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

enum class VarState : std::uint8_t { kBasic, kAtLower, kAtUpper };

// Warm-start state: one basic variable per row plus nonbasic bound flags.
struct LpBasis {
  std::vector<int> basic;
  std::vector<VarState> state;
  bool valid() const { return !basic.empty(); }
};

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;  // structural variables only
  double value = 0.0;
  LpBasis basis;
  int iterations = 0;
};

struct SensitivityInterval {
  double alpha_lo = -kInf;
  double alpha_hi = kInf;
};

// Dense bounded-variable primal simplex over
//   min c.x  s.t.  A x + s = b,  l <= x <= u,  0 <= s,
// where columns 0..n-1 are structural and n..n+m-1 are row slacks.
// Phase 1 drives artificial infeasibilities out via a composite objective.
// Dantzig pricing with a Bland fallback after a run of degenerate pivots.
class BoundedSimplex {
 public:
  BoundedSimplex(const Instance& inst, const LocalBounds& bounds, std::span<const Row> extra_rows) {
    n_ = inst.num_vars();
    m_ = static_cast<int>(inst.rows.size() + extra_rows.size());
    total_ = n_ + m_;
    cols_.assign(static_cast<std::size_t>(m_) * total_, 0.0);
    rhs_.resize(m_);
    int r = 0;
    for (const Row& row : inst.rows) load_row(row, r++);
    for (const Row& row : extra_rows) load_row(row, r++);
    lower_.assign(total_, 0.0);
    upper_.assign(total_, kInf);
    for (int j = 0; j < n_; ++j) {
      lower_[j] = bounds.lower[j];
      upper_[j] = bounds.upper[j];
    }
    for (int i = 0; i < m_; ++i) cols_[idx(i, n_ + i)] = 1.0;
  }

  int num_rows() const { return m_; }
  int num_structural() const { return n_; }

  // Solves min c.x (c over structural variables).  Uses the warm basis when
  // it is primal feasible for the current bounds, otherwise starts cold.
  LpResult solve(std::span<const double> c, const LpBasis* warm = nullptr) {
    set_costs(c);
    LpResult res;
    for (int j = 0; j < n_; ++j) {
      if (lower_[j] > upper_[j] + kFeasTol) return res;  // crossed bounds
    }
    bool warm_ok = false;
    if (warm && warm->valid() && static_cast<int>(warm->basic.size()) == m_ &&
        static_cast<int>(warm->state.size()) == total_) {
      warm_ok = try_install(*warm);
    }
    if (!warm_ok) {
      if (!phase1()) return res;  // infeasible
    }
    iterations_ = 0;
    if (!optimize(cost_)) throw NumericalFailure("simplex iteration limit exceeded");
    res.status = LpStatus::kOptimal;
    res.x.assign(x_.begin(), x_.begin() + n_);
    res.value = objective_value();
    res.basis = export_basis();
    res.iterations = iterations_;
    return res;
  }

  // Re-optimizes for new costs from the current (primal feasible) basis.
  // Only valid after a successful solve().
  void resolve(std::span<const double> c) {
    set_costs(c);
    if (!optimize(cost_)) throw NumericalFailure("simplex iteration limit exceeded");
  }

  // Lexicographic solve: min primary, then min secondary over the primary's
  // optimal face.  Requires a prior successful phase (call after solve()).
  void lex_improve(std::span<const double> secondary) {
    std::vector<double> c2(total_, 0.0);
    for (int j = 0; j < n_ && j < static_cast<int>(secondary.size()); ++j) c2[j] = secondary[j];
    restricted_optimize(cost_, c2);
  }

  const std::vector<double>& full_solution() const { return x_; }
  double objective_value() const {
    double v = 0.0;
    for (int j = 0; j < n_; ++j) v += cost_[j] * x_[j];
    return v;
  }
  double dot(std::span<const double> c) const {
    double v = 0.0;
    for (int j = 0; j < n_ && j < static_cast<int>(c.size()); ++j) v += c[j] * x_[j];
    return v;
  }

  LpBasis export_basis() const {
    LpBasis b;
    b.basic = basic_;
    b.state = state_;
    return b;
  }

  // Reduced costs of an arbitrary structural objective under the current basis.
  std::vector<double> reduced_costs(std::span<const double> c) const {
    std::vector<double> full(total_, 0.0);
    for (int j = 0; j < n_ && j < static_cast<int>(c.size()); ++j) full[j] = c[j];
    return reduced_costs_full(full);
  }

  VarState var_state(int j) const { return state_[j]; }

  // Largest alpha interval around `alpha` on which the current basis stays
  // optimal for min (c1 + alpha c2).x.
  SensitivityInterval sensitivity(std::span<const double> c1, std::span<const double> c2,
                                  double alpha) const {
    std::vector<double> d1 = reduced_costs(c1);
    std::vector<double> d2 = reduced_costs(c2);
    SensitivityInterval out;
    for (int j = 0; j < total_; ++j) {
      if (state_[j] == VarState::kBasic) continue;
      double cur = d1[j] + alpha * d2[j];
      double sign = state_[j] == VarState::kAtLower ? 1.0 : -1.0;
      if (sign * cur < -10 * kCostTol * (1.0 + std::abs(d1[j])))
        throw std::logic_error("basis not optimal at the given alpha");
      if (std::abs(d2[j]) <= kCostTol) continue;
      double bound = -d1[j] / d2[j];
      if (sign * d2[j] < 0.0) {
        out.alpha_hi = std::min(out.alpha_hi, bound);
      } else {
        out.alpha_lo = std::max(out.alpha_lo, bound);
      }
    }
    if (out.alpha_lo > alpha) out.alpha_lo = alpha;
    if (out.alpha_hi < alpha) out.alpha_hi = alpha;
    return out;
  }

  // One parametric sweep step at fixed alpha: re-optimizes the secondary
  // objective over the alpha-optimal face (entering candidates restricted to
  // zero parametric reduced cost).  Returns the number of accepted pivots.
  // on_pivot, when set, receives the structural solution before/after each
  // value-changing pivot.
  int sweep_secondary(std::span<const double> c1, std::span<const double> c2, double alpha,
                      const std::function<void(std::span<const double>, std::span<const double>)>&
                          on_pivot = nullptr) {
    std::vector<double> ca(total_, 0.0), cb(total_, 0.0);
    for (int j = 0; j < n_ && j < static_cast<int>(c1.size()); ++j) ca[j] = c1[j];
    for (int j = 0; j < n_ && j < static_cast<int>(c2.size()); ++j) cb[j] = c2[j];
    for (int j = 0; j < total_; ++j) ca[j] += alpha * cb[j];
    return restricted_optimize(ca, cb, &on_pivot);
  }

  void set_iteration_cap(long long cap) { iter_cap_ = cap; }

 private:
  std::size_t idx(int row, int col) const {
    return static_cast<std::size_t>(row) * total_ + col;
  }

  void load_row(const Row& row, int r) {
    for (const auto& [j, v] : row.terms) cols_[idx(r, j)] += v;
    rhs_[r] = row.rhs;
  }

  void set_costs(std::span<const double> c) {
    cost_.assign(total_, 0.0);
    for (int j = 0; j < n_ && j < static_cast<int>(c.size()); ++j) cost_[j] = c[j];
  }

  // Installs basis arrays and recomputes basic values; true if primal feasible.
  bool try_install(const LpBasis& warm) {
    basic_ = warm.basic;
    state_ = warm.state;
    if (!refactorize()) return false;
    compute_x();
    for (int i = 0; i < m_; ++i) {
      int j = basic_[i];
      if (x_[j] < lower_[j] - kFeasTol * (1.0 + std::abs(lower_[j])) ||
          x_[j] > upper_[j] + kFeasTol * (1.0 + std::abs(upper_[j])))
        return false;
    }
    return true;
  }

  // Gaussian elimination of the basis matrix into binv_.
  bool refactorize() {
    std::vector<double> mat(static_cast<std::size_t>(m_) * m_, 0.0);
    // dense basis matrix: column k = constraint column of basic_[k]
    for (int k = 0; k < m_; ++k) {
      for (int i = 0; i < m_; ++i) mat[static_cast<std::size_t>(i) * m_ + k] = cols_[idx(i, basic_[k])];
    }
    std::vector<double> inv(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) inv[static_cast<std::size_t>(i) * m_ + i] = 1.0;
    for (int col = 0; col < m_; ++col) {
      int piv = -1;
      double best = 1e-11;
      for (int i = col; i < m_; ++i) {
        double v = std::abs(mat[static_cast<std::size_t>(i) * m_ + col]);
        if (v > best) {
          best = v;
          piv = i;
        }
      }
      if (piv < 0) return false;
      if (piv != col) {
        for (int k = 0; k < m_; ++k) {
          std::swap(mat[static_cast<std::size_t>(piv) * m_ + k], mat[static_cast<std::size_t>(col) * m_ + k]);
          std::swap(inv[static_cast<std::size_t>(piv) * m_ + k], inv[static_cast<std::size_t>(col) * m_ + k]);
        }
      }
      double d = mat[static_cast<std::size_t>(col) * m_ + col];
      for (int k = 0; k < m_; ++k) {
        mat[static_cast<std::size_t>(col) * m_ + k] /= d;
        inv[static_cast<std::size_t>(col) * m_ + k] /= d;
      }
      for (int i = 0; i < m_; ++i) {
        if (i == col) continue;
        double f = mat[static_cast<std::size_t>(i) * m_ + col];
        if (f == 0.0) continue;
        for (int k = 0; k < m_; ++k) {
          mat[static_cast<std::size_t>(i) * m_ + k] -= f * mat[static_cast<std::size_t>(col) * m_ + k];
          inv[static_cast<std::size_t>(i) * m_ + k] -= f * inv[static_cast<std::size_t>(col) * m_ + k];
        }
      }
    }
    binv_ = std::move(inv);
    return true;
  }

  void compute_x() {
    x_.assign(total_, 0.0);
    for (int j = 0; j < total_; ++j) {
      if (state_[j] == VarState::kAtLower) {
        x_[j] = lower_[j];
      } else if (state_[j] == VarState::kAtUpper) {
        x_[j] = upper_[j];
      }
    }
    // xB = B^-1 (b - N xN)
    std::vector<double> resid = rhs_;
    for (int j = 0; j < total_; ++j) {
      if (state_[j] == VarState::kBasic || x_[j] == 0.0) continue;
      for (int i = 0; i < m_; ++i) {
        double a = cols_[idx(i, j)];
        if (a != 0.0) resid[i] -= a * x_[j];
      }
    }
    for (int k = 0; k < m_; ++k) {
      double v = 0.0;
      for (int i = 0; i < m_; ++i) v += binv_[static_cast<std::size_t>(k) * m_ + i] * resid[i];
      x_[basic_[k]] = v;
    }
  }

  // All-slack start.  Rows violated at the start point get their slack lower
  // bound relaxed to the start value; a composite objective then drives those
  // slacks up to zero.  A slack's bound snaps back to zero the moment it
  // becomes feasible, so it cannot turn infeasible again.
  bool phase1() {
    basic_.resize(m_);
    state_.assign(total_, VarState::kAtLower);
    for (int j = 0; j < n_; ++j) {
      // start each structural at the finite bound closer to zero
      state_[j] = std::abs(lower_[j]) <= std::abs(upper_[j]) ? VarState::kAtLower : VarState::kAtUpper;
    }
    for (int i = 0; i < m_; ++i) {
      basic_[i] = n_ + i;
      state_[n_ + i] = VarState::kBasic;
    }
    if (!refactorize()) throw NumericalFailure("initial basis singular");
    compute_x();
    bool any_infeas = false;
    for (int i = 0; i < m_; ++i) {
      if (x_[n_ + i] < -kFeasTol) {
        lower_[n_ + i] = x_[n_ + i];
        any_infeas = true;
      }
    }
    if (!any_infeas) return true;
    bool ok = phase1_optimize();
    for (int i = 0; i < m_; ++i) lower_[n_ + i] = 0.0;
    if (!ok) return false;
    compute_x();
    for (int i = 0; i < m_; ++i) {
      if (x_[n_ + i] < -10 * kFeasTol) return false;
    }
    return true;
  }

  // Minimizes the total infeasibility of slacks below zero.  The composite
  // objective is rebuilt per pivot; relaxed bounds are restored as slacks
  // reach feasibility.
  bool phase1_optimize() {
    iterations_ = 0;
    int stall = 0;
    while (true) {
      if (++iterations_ > 4 * iter_limit()) throw NumericalFailure("phase 1 iteration limit");
      for (int i = 0; i < m_; ++i) {
        if (lower_[n_ + i] < 0.0 && x_[n_ + i] >= -kFeasTol) {
          lower_[n_ + i] = 0.0;
          if (state_[n_ + i] == VarState::kAtLower) x_[n_ + i] = 0.0;
        }
      }
      std::vector<double> c(total_, 0.0);
      double infeas = 0.0;
      for (int i = 0; i < m_; ++i) {
        if (x_[n_ + i] < -kFeasTol) {
          c[n_ + i] = -1.0;  // increase infeasible slack
          infeas -= x_[n_ + i];
        }
      }
      if (infeas <= kFeasTol) return true;
      if (!pivot_once(c, stall > 50)) return false;  // stuck infeasible
      ++stall;
    }
  }

  long long iter_limit() const {
    if (iter_cap_ > 0) return iter_cap_;
    return 10LL * (m_ + total_) + 200;
  }

  // Primal simplex to optimality for costs c (full-length vector).
  bool optimize(const std::vector<double>& c) {
    int degenerate_run = 0;
    long long it = 0;
    while (true) {
      if (++it > iter_limit()) return false;
      double before = 0.0;
      for (int j = 0; j < total_; ++j) before += c[j] * x_[j];
      if (!pivot_once(c, degenerate_run > 50)) return true;  // optimal
      ++iterations_;
      double after = 0.0;
      for (int j = 0; j < total_; ++j) after += c[j] * x_[j];
      if (after < before - kCostTol * (1.0 + std::abs(before))) {
        degenerate_run = 0;
      } else {
        ++degenerate_run;
      }
    }
  }

  // Secondary optimization restricted to the optimal face of `ca`:
  // entering variables must have |d_ca| ~ 0 and improve cb.
  int restricted_optimize(
      const std::vector<double>& ca, const std::vector<double>& cb,
      const std::function<void(std::span<const double>, std::span<const double>)>* on_pivot =
          nullptr) {
    int pivots = 0;
    int degenerate_run = 0;
    long long it = 0;
    std::vector<double> xbefore;
    while (true) {
      if (++it > iter_limit()) throw NumericalFailure("restricted sweep iteration limit");
      std::vector<double> da = reduced_costs_full(ca);
      std::vector<double> db = reduced_costs_full(cb);
      int enter = -1;
      double best = 0.0;
      for (int j = 0; j < total_; ++j) {
        if (state_[j] == VarState::kBasic) continue;
        double sign = state_[j] == VarState::kAtLower ? 1.0 : -1.0;
        double tol_a = 1e-8 * (1.0 + std::abs(ca[j]));
        if (std::abs(da[j]) > tol_a) continue;  // would leave the ca-optimal face
        double rate = -sign * db[j];            // cb decrease per unit move
        if (rate > kCostTol) {
          if (degenerate_run > 50) {  // Bland: first eligible index
            enter = j;
            break;
          }
          if (rate > best) {
            best = rate;
            enter = j;
          }
        }
      }
      if (enter < 0) return pivots;
      if (on_pivot && *on_pivot) xbefore.assign(x_.begin(), x_.begin() + n_);
      double moved = do_ratio_pivot(enter);
      ++pivots;
      ++iterations_;
      if (moved > kFeasTol) {
        degenerate_run = 0;
        if (on_pivot && *on_pivot)
          (*on_pivot)(std::span<const double>(xbefore), std::span<const double>(x_.data(), n_));
      } else {
        ++degenerate_run;
      }
    }
  }

  std::vector<double> reduced_costs_full(const std::vector<double>& c) const {
    std::vector<double> y(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      double v = 0.0;
      for (int k = 0; k < m_; ++k) v += c[basic_[k]] * binv_[static_cast<std::size_t>(k) * m_ + i];
      y[i] = v;
    }
    std::vector<double> d(total_);
    for (int j = 0; j < total_; ++j) {
      double v = c[j];
      for (int i = 0; i < m_; ++i) {
        double a = cols_[idx(i, j)];
        if (a != 0.0) v -= y[i] * a;
      }
      d[j] = v;
    }
    return d;
  }

  // One Dantzig (or Bland) pivot for costs c; false when no entering
  // candidate remains (optimal for c).
  bool pivot_once(const std::vector<double>& c, bool bland) {
    std::vector<double> d = reduced_costs_full(c);
    int enter = -1;
    double best = kCostTol;
    for (int j = 0; j < total_; ++j) {
      if (state_[j] == VarState::kBasic) continue;
      double sign = state_[j] == VarState::kAtLower ? 1.0 : -1.0;
      double viol = -sign * d[j];
      if (viol > best) {
        if (bland) {
          enter = j;
          break;
        }
        best = viol;
        enter = j;
      }
    }
    if (enter < 0) return false;
    do_ratio_pivot(enter);
    return true;
  }

  // Ratio test + basis update for the entering variable; returns |step|.
  double do_ratio_pivot(int enter) {
    const double dir = state_[enter] == VarState::kAtLower ? 1.0 : -1.0;
    // w = B^-1 a_enter
    std::vector<double> w(m_, 0.0);
    for (int k = 0; k < m_; ++k) {
      double v = 0.0;
      for (int i = 0; i < m_; ++i) {
        double a = cols_[idx(i, enter)];
        if (a != 0.0) v += binv_[static_cast<std::size_t>(k) * m_ + i] * a;
      }
      w[k] = v;
    }
    double limit = upper_[enter] - lower_[enter];  // bound flip span
    int leave = -1;                                // -1: bound flip
    bool leave_to_upper = false;
    for (int k = 0; k < m_; ++k) {
      double delta = -dir * w[k];  // change of basic k per unit entering step
      int j = basic_[k];
      if (delta > 1e-11) {
        double room = (upper_[j] - x_[j]) / delta;
        if (room < limit - 1e-12) {
          limit = room;
          leave = k;
          leave_to_upper = true;
        }
      } else if (delta < -1e-11) {
        double room = (lower_[j] - x_[j]) / delta;
        if (room < limit - 1e-12) {
          limit = room;
          leave = k;
          leave_to_upper = false;
        }
      }
    }
    if (limit >= kInf) throw NumericalFailure("unbounded ray in bounded problem");
    limit = std::max(limit, 0.0);
    // Apply the step.
    double step = dir * limit;
    for (int k = 0; k < m_; ++k) x_[basic_[k]] -= step * w[k];
    x_[enter] += step;
    if (leave < 0) {
      // bound flip
      state_[enter] =
          state_[enter] == VarState::kAtLower ? VarState::kAtUpper : VarState::kAtLower;
      x_[enter] = state_[enter] == VarState::kAtLower ? lower_[enter] : upper_[enter];
      return limit;
    }
    int out = basic_[leave];
    state_[out] = leave_to_upper ? VarState::kAtUpper : VarState::kAtLower;
    x_[out] = leave_to_upper ? upper_[out] : lower_[out];
    basic_[leave] = enter;
    state_[enter] = VarState::kBasic;
    update_binv(leave, w);
    if (++pivots_since_factor_ >= 60) {
      pivots_since_factor_ = 0;
      if (!refactorize()) throw NumericalFailure("basis became singular");
      compute_x();
    }
    return limit;
  }

  // Product-form update of B^-1 after replacing basic row `leave`.
  void update_binv(int leave, const std::vector<double>& w) {
    double piv = w[leave];
    if (std::abs(piv) < 1e-11) {
      if (!refactorize()) throw NumericalFailure("degenerate pivot made basis singular");
      compute_x();
      return;
    }
    for (int i = 0; i < m_; ++i) binv_[static_cast<std::size_t>(leave) * m_ + i] /= piv;
    for (int k = 0; k < m_; ++k) {
      if (k == leave) continue;
      double f = w[k];
      if (f == 0.0) continue;
      for (int i = 0; i < m_; ++i)
        binv_[static_cast<std::size_t>(k) * m_ + i] -= f * binv_[static_cast<std::size_t>(leave) * m_ + i];
    }
  }

  int n_ = 0, m_ = 0, total_ = 0;
  std::vector<double> cols_;  // m x total row-major constraint matrix
  std::vector<double> rhs_;
  std::vector<double> lower_, upper_;
  std::vector<double> cost_;
  std::vector<int> basic_;
  std::vector<VarState> state_;
  std::vector<double> binv_;  // m x m
  std::vector<double> x_;     // full solution (structural + slack)
  int iterations_ = 0;
  int pivots_since_factor_ = 0;
  long long iter_cap_ = 0;
};

// Weighted single-objective LP over the relaxation:
//   min w1*f1 + w2*f2  s.t. instance rows + extra rows, local bounds.
inline LpResult lp_solve(const Instance& inst, std::pair<double, double> weights,
                         const LocalBounds& bounds, std::span<const Row> extra_rows = {},
                         const LpBasis* warm = nullptr) {
  BoundedSimplex splx(inst, bounds, extra_rows);
  std::vector<double> c(inst.num_vars());
  for (int j = 0; j < inst.num_vars(); ++j)
    c[j] = weights.first * inst.c1[j] + weights.second * inst.c2[j];
  return splx.solve(c, warm);
}

}  // namespace bobb

#endif  // BOBB_SIMPLEX_HPP
