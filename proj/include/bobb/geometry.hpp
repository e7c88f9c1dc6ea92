#ifndef BOBB_GEOMETRY_HPP
#define BOBB_GEOMETRY_HPP

#include <algorithm>
#include <cassert>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bobb/numerics.hpp"

namespace bobb {

// A point in objective space, y = (f1(x), f2(x)).
struct ObjPoint {
  double f1 = 0.0;
  double f2 = 0.0;
};

inline bool operator==(const ObjPoint& a, const ObjPoint& b) {
  return a.f1 == b.f1 && a.f2 == b.f2;
}

// Weak dominance: y dominates y2 iff y <= y2 componentwise (ties count).
inline bool dominates(const ObjPoint& y, const ObjPoint& y2) {
  return nearly_le(y.f1, y2.f1) && nearly_le(y.f2, y2.f2);
}

inline bool points_nearly_equal(const ObjPoint& a, const ObjPoint& b) {
  return nearly_equal(a.f1, b.f1) && nearly_equal(a.f2, b.f2);
}

// One element of a nondominated frontier: either a single point (lo == hi)
// or a strictly decreasing closed segment from lo to hi
// (lo.f1 < hi.f1, lo.f2 > hi.f2).  Horizontal or vertical segments are
// never stored; only their nondominated endpoint survives trimming.
struct Element {
  ObjPoint lo;  // smaller f1, larger f2
  ObjPoint hi;  // larger f1, smaller f2

  static Element point(ObjPoint p) { return Element{p, p}; }
  static Element segment(ObjPoint l, ObjPoint r) {
    assert(l.f1 < r.f1 && l.f2 > r.f2);
    return Element{l, r};
  }

  bool is_point() const { return lo.f1 == hi.f1 && lo.f2 == hi.f2; }

  ObjPoint at(double t) const {
    return ObjPoint{lo.f1 + t * (hi.f1 - lo.f1), lo.f2 + t * (hi.f2 - lo.f2)};
  }

  // f2 on the supporting line at the given f1 (segments only).
  double f2_at(double f1) const {
    if (is_point()) return lo.f2;
    double t = (f1 - lo.f1) / (hi.f1 - lo.f1);
    return lo.f2 + t * (hi.f2 - lo.f2);
  }
};

// Closed parameter interval of an element, in [0, 1].
struct TInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty() const { return hi < lo; }
};

namespace detail {

// Sub-interval of e dominated by the quadrant anchored at p.
// e param: t=0 at e.lo, t=1 at e.hi; f1 increases, f2 decreases with t.
inline TInterval quadrant_t_interval(const Element& e, const ObjPoint& p) {
  if (e.is_point()) {
    return dominates(p, e.lo) ? TInterval{0.0, 0.0} : TInterval{1.0, 0.0};
  }
  const double span1 = e.hi.f1 - e.lo.f1;
  const double span2 = e.lo.f2 - e.hi.f2;
  double t_lo = (p.f1 - e.lo.f1) / span1;  // f1(t) >= p.f1
  double t_hi = (e.lo.f2 - p.f2) / span2;  // f2(t) >= p.f2
  t_lo = std::max(0.0, t_lo);
  t_hi = std::min(1.0, t_hi);
  if (t_hi < t_lo) return TInterval{1.0, 0.0};
  return TInterval{t_lo, t_hi};
}

// Sub-intervals of e dominated by the region d + R^2_{>=0} for a single
// element d.  At most two intervals (band above the segment, quadrant of
// the right endpoint); they are returned merged when adjacent.
inline void dominated_t_intervals(const Element& e, const Element& d,
                                  std::vector<TInterval>& out) {
  if (d.is_point()) {
    TInterval q = quadrant_t_interval(e, d.lo);
    if (!q.empty()) out.push_back(q);
    return;
  }
  // Quadrant of d's right endpoint.
  TInterval q = quadrant_t_interval(e, d.hi);
  // Band {d.lo.f1 <= x <= d.hi.f1, y >= d(x)}.
  TInterval band{1.0, 0.0};
  if (e.is_point()) {
    const ObjPoint p = e.lo;
    if (nearly_le(d.lo.f1, p.f1) && nearly_le(p.f1, d.hi.f1) &&
        nearly_le(d.f2_at(p.f1), p.f2)) {
      band = TInterval{0.0, 0.0};
    }
  } else {
    const double span1 = e.hi.f1 - e.lo.f1;
    double t1 = (d.lo.f1 - e.lo.f1) / span1;
    double t2 = (d.hi.f1 - e.lo.f1) / span1;
    t1 = std::max(0.0, t1);
    t2 = std::min(1.0, t2);
    if (t1 <= t2) {
      // g(t) = e.f2(t) - d(e.f1(t)) >= 0, linear in t.
      const double g1 = e.at(t1).f2 - d.f2_at(e.at(t1).f1);
      const double g2 = e.at(t2).f2 - d.f2_at(e.at(t2).f1);
      const double scale = 1e-6 * (1.0 + std::abs(e.lo.f2) + std::abs(d.lo.f2));
      double a = t1, b = t2;
      if (g1 >= -scale && g2 >= -scale) {
        // whole x-overlap dominated
      } else if (g1 < -scale && g2 < -scale) {
        b = a - 1.0;  // none
      } else {
        double tc = t1 + (t2 - t1) * (g1 / (g1 - g2));
        if (g1 >= -scale) {
          b = tc;
        } else {
          a = tc;
        }
      }
      if (a <= b) band = TInterval{a, b};
    }
  }
  // Merge band and quadrant when overlapping/adjacent.
  if (!band.empty() && !q.empty() && band.hi >= q.lo - 1e-12) {
    out.push_back(TInterval{std::min(band.lo, q.lo), std::max(band.hi, q.hi)});
  } else {
    if (!band.empty()) out.push_back(band);
    if (!q.empty()) out.push_back(q);
  }
}

inline void normalize_intervals(std::vector<TInterval>& iv, double merge_gap = 1e-9) {
  std::sort(iv.begin(), iv.end(),
            [](const TInterval& a, const TInterval& b) { return a.lo < b.lo; });
  std::vector<TInterval> merged;
  for (const TInterval& t : iv) {
    if (t.empty()) continue;
    if (!merged.empty() && t.lo <= merged.back().hi + merge_gap) {
      merged.back().hi = std::max(merged.back().hi, t.hi);
    } else {
      merged.push_back(t);
    }
  }
  iv = std::move(merged);
}

// Complement of the (normalized) intervals within [0,1].
inline std::vector<TInterval> complement_intervals(const std::vector<TInterval>& iv,
                                                   double min_len = 1e-9) {
  std::vector<TInterval> out;
  double cur = 0.0;
  for (const TInterval& t : iv) {
    if (t.lo - cur > min_len) out.push_back(TInterval{cur, t.lo});
    cur = std::max(cur, t.hi);
  }
  if (1.0 - cur > min_len) out.push_back(TInterval{cur, 1.0});
  else if (out.empty() && iv.empty()) out.push_back(TInterval{0.0, 1.0});
  return out;
}

}  // namespace detail

// Piece of e spanned by [t.lo, t.hi]; collapses near-zero spans to a point.
inline Element subelement(const Element& e, const TInterval& t) {
  if (e.is_point()) return e;
  ObjPoint a = e.at(std::max(0.0, t.lo));
  ObjPoint b = e.at(std::min(1.0, t.hi));
  const bool flat1 = b.f1 - a.f1 <= kFeasTol * (1.0 + std::abs(a.f1) + std::abs(b.f1));
  const bool flat2 = a.f2 - b.f2 <= kFeasTol * (1.0 + std::abs(a.f2) + std::abs(b.f2));
  if (flat1 || flat2) {
    // Degenerate sliver: keep only the nondominated endpoint.  A vertical
    // sliver keeps the bottom point, a horizontal one the left point.
    return Element::point(flat1 ? b : a);
  }
  return Element::segment(a, b);
}

}  // namespace bobb

#endif  // BOBB_GEOMETRY_HPP
