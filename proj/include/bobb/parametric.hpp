#ifndef BOBB_PARAMETRIC_HPP
#define BOBB_PARAMETRIC_HPP

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "bobb/geometry.hpp"
#include "bobb/instance.hpp"
#include "bobb/pareto_store.hpp"
#include "bobb/simplex.hpp"

namespace bobb {

// Convex piecewise-linear nondominated frontier of an LP relaxation,
// nd(L_s), generated west to east.  edge_integer[k] certifies that every
// point of edge k has an integer-feasible preimage (both endpoint bases
// integral in the integer variables with identical integer parts).
struct DualBoundCurve {
  std::vector<ObjPoint> breakpoints;  // f1 strictly increasing
  std::vector<bool> edge_integer;     // size breakpoints.size()-1
  bool point_integer = false;         // single-point curves only

  bool single_point() const { return breakpoints.size() == 1; }

  bool all_integer() const {
    if (single_point()) return point_integer;
    for (bool b : edge_integer) {
      if (!b) return false;
    }
    return true;
  }

  std::vector<Element> to_elements() const {
    std::vector<Element> out;
    if (breakpoints.empty()) return out;
    if (single_point()) {
      out.push_back(Element::point(breakpoints[0]));
      return out;
    }
    for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k)
      out.push_back(Element::segment(breakpoints[k], breakpoints[k + 1]));
    return out;
  }
};

struct ParametricResult {
  LpStatus status = LpStatus::kInfeasible;
  DualBoundCurve curve;
  bool completed = false;  // false when a piece callback stopped generation
  ObjPoint y_west{}, y_east{};
};

struct ParametricHooks {
  // Called per generated sub-edge (or the single point) with its
  // integer-feasibility certificate; return false to stop generation.
  std::function<bool(const Element&, bool integer_feasible)> on_piece;
  // Structural solution before/after each value-changing pivot.
  std::function<void(std::span<const double>, std::span<const double>)> on_pivot;
};

namespace detail {

inline bool integer_vars_integral(std::span<const double> x, int n_int) {
  for (int j = 0; j < n_int; ++j) {
    if (!is_integral(x[j])) return false;
  }
  return true;
}

inline bool same_integer_part(std::span<const double> a, std::span<const double> b, int n_int) {
  for (int j = 0; j < n_int; ++j) {
    if (std::llround(a[j]) != std::llround(b[j])) return false;
  }
  return true;
}

}  // namespace detail

// Generates nd(L_s) by parametric simplex on min f1 + alpha f2: solve the
// lexicographic west endpoint, then repeatedly advance alpha to the next
// basis breakpoint and re-optimize f2 over the alpha-optimal face.  Exact
// pivoting replaces the epsilon step: at each breakpoint the entering
// variable with maximal f2 decrease rate is pivoted until the face is
// f2-optimal.  Consecutive solves reuse the previous basis.
inline ParametricResult parametric_front(const Instance& inst, const LocalBounds& bounds,
                                         std::span<const Row> extra_rows = {},
                                         const ParametricHooks* hooks = nullptr) {
  ParametricResult res;
  BoundedSimplex splx(inst, bounds, extra_rows);
  const long long cap = 10LL * (splx.num_rows() + splx.num_structural() + inst.rows.size()) + 400;

  LpResult east = splx.solve(inst.c2);
  if (east.status != LpStatus::kOptimal) return res;
  splx.lex_improve(inst.c1);
  res.y_east = inst.image(std::span<const double>(splx.full_solution().data(), inst.num_vars()));

  splx.resolve(inst.c1);
  splx.lex_improve(inst.c2);
  std::vector<double> x_cur(splx.full_solution().begin(),
                            splx.full_solution().begin() + inst.num_vars());
  res.y_west = inst.image(x_cur);
  res.status = LpStatus::kOptimal;

  DualBoundCurve& curve = res.curve;
  curve.breakpoints.push_back(res.y_west);

  auto collinear_with_last = [&](const ObjPoint& to) {
    const std::size_t k = curve.breakpoints.size();
    if (k < 2) return false;
    const ObjPoint& a = curve.breakpoints[k - 2];
    const ObjPoint& b = curve.breakpoints[k - 1];
    double cross = (b.f2 - a.f2) * (to.f1 - b.f1) - (to.f2 - b.f2) * (b.f1 - a.f1);
    double scale = (std::abs(b.f2 - a.f2) + std::abs(to.f2 - b.f2)) *
                       (std::abs(to.f1 - b.f1) + std::abs(b.f1 - a.f1)) +
                   1.0;
    return std::abs(cross) <= 1e-9 * scale;
  };

  auto emit = [&](const ObjPoint& to, bool integral) -> bool {
    // Chain each sub-edge from the last stored breakpoint; dust moves fold
    // away.  Real moves at fixed alpha follow a strictly decreasing line.
    const ObjPoint a = curve.breakpoints.back();
    if (!(to.f1 > a.f1 && to.f2 < a.f2)) return true;
    if (nearly_equal(a.f1, to.f1) && nearly_equal(a.f2, to.f2)) return true;
    if (collinear_with_last(to)) {
      // Same slope as the previous edge: extend it, AND the certificates.
      curve.breakpoints.back() = to;
      curve.edge_integer.back() = curve.edge_integer.back() && integral;
    } else {
      curve.breakpoints.push_back(to);
      curve.edge_integer.push_back(integral);
    }
    if (hooks && hooks->on_piece) {
      return hooks->on_piece(Element::segment(a, to), integral);
    }
    return true;
  };

  const bool west_integral = detail::integer_vars_integral(x_cur, inst.n_int);
  if (points_nearly_equal(res.y_west, res.y_east)) {
    curve.point_integer = west_integral;
    res.completed = true;
    if (hooks && hooks->on_piece) hooks->on_piece(Element::point(res.y_west), west_integral);
    return res;
  }

  double alpha = 0.0;
  ObjPoint y = res.y_west;
  long long steps = 0;
  while (!points_nearly_equal(y, res.y_east)) {
    if (++steps > cap) throw NumericalFailure("parametric sweep exceeded its breakpoint cap");
    SensitivityInterval si = splx.sensitivity(inst.c1, inst.c2, alpha);
    if (si.alpha_hi >= kInf / 2) {
      // Basis optimal for every larger alpha: we must already be at the east
      // endpoint up to numerics.
      if (!points_nearly_equal(y, res.y_east))
        throw NumericalFailure("parametric sweep stalled before the east endpoint");
      break;
    }
    alpha = si.alpha_hi;

    // Sub-edges produced by the pivots at this alpha.
    struct SubEdge {
      ObjPoint b;
      bool integral;
    };
    std::vector<SubEdge> subs;
    auto on_pivot = std::function<void(std::span<const double>, std::span<const double>)>(
        [&](std::span<const double> xa, std::span<const double> xb) {
          ObjPoint yb = inst.image(xb);
          bool integral = detail::integer_vars_integral(xa, inst.n_int) &&
                          detail::integer_vars_integral(xb, inst.n_int) &&
                          detail::same_integer_part(xa, xb, inst.n_int);
          subs.push_back(SubEdge{yb, integral});
          if (hooks && hooks->on_pivot) hooks->on_pivot(xa, xb);
        });
    splx.sweep_secondary(inst.c1, inst.c2, alpha, on_pivot);
    x_cur.assign(splx.full_solution().begin(), splx.full_solution().begin() + inst.num_vars());
    ObjPoint y_new = inst.image(x_cur);

    bool keep_going = true;
    for (const SubEdge& s : subs) {
      if (!emit(s.b, s.integral)) {
        keep_going = false;
        break;
      }
    }
    if (!keep_going) {
      res.completed = false;
      return res;
    }
    y = y_new;
  }
  res.completed = true;
  return res;
}

// Fathoming Rule 0: the node is provably solved when the whole relaxed
// frontier is integer feasible.  Requires both endpoint images integral
// (the caller checks the gate).  Stops at the first uncertified edge.
inline bool fr0_check(const Instance& inst, const LocalBounds& bounds,
                      std::span<const Row> extra_rows, const ObjPoint& y1, const ObjPoint& y2,
                      const std::function<void(const Element&)>& on_integer_piece = nullptr,
                      const std::function<void(std::span<const double>, std::span<const double>)>&
                          on_pivot = nullptr) {
  if (points_nearly_equal(y1, y2)) return true;
  bool ok = true;
  ParametricHooks hooks;
  hooks.on_piece = [&](const Element& e, bool integral) {
    if (!integral) {
      ok = false;
      return false;
    }
    if (on_integer_piece) on_integer_piece(e);
    return true;
  };
  hooks.on_pivot = on_pivot;
  ParametricResult pr = parametric_front(inst, bounds, extra_rows, &hooks);
  if (pr.status != LpStatus::kOptimal) return false;
  if (pr.curve.single_point()) return pr.curve.point_integer;
  return ok;
}

// Fathoming Rule 3: every piece of nd(L_s) dominated by the store.  Stops at
// the first undominated piece.
inline bool fr3_check(const Instance& inst, const LocalBounds& bounds,
                      std::span<const Row> extra_rows, const ObjPoint& y1, const ObjPoint& y2,
                      const ParetoStore& store,
                      const std::function<void(const Element&, bool)>& on_piece = nullptr,
                      const std::function<void(std::span<const double>, std::span<const double>)>&
                          on_pivot = nullptr) {
  if (points_nearly_equal(y1, y2)) return store.is_dominated(Element::point(y1));
  bool ok = true;
  ParametricHooks hooks;
  hooks.on_piece = [&](const Element& e, bool integral) {
    if (on_piece) on_piece(e, integral);
    if (!store.is_dominated(e)) {
      ok = false;
      return false;
    }
    return true;
  };
  hooks.on_pivot = on_pivot;
  ParametricResult pr = parametric_front(inst, bounds, extra_rows, &hooks);
  if (pr.status != LpStatus::kOptimal) return false;
  if (pr.curve.single_point()) return store.is_dominated(Element::point(pr.curve.breakpoints[0]));
  return ok;
}

}  // namespace bobb

#endif  // BOBB_PARAMETRIC_HPP
