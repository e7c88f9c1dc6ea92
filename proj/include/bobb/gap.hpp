#ifndef BOBB_GAP_HPP
#define BOBB_GAP_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "bobb/geometry.hpp"
#include "bobb/pareto_store.hpp"

namespace bobb {

// Duality gap snapshot: G is the Hausdorff surrogate in objective units,
// Gbar its normalized percentage, HV the hypervolume gap percentage.
struct GapReport {
  double G = 0.0;
  double Gbar = 0.0;
  double HV = 0.0;
};

struct Rect {
  double f1_lo = 0, f1_hi = 0, f2_lo = 0, f2_hi = 0;
  double width() const { return f1_hi - f1_lo; }
  double height() const { return f2_hi - f2_lo; }
};

namespace gap_detail {

inline double dist_point_point(const ObjPoint& a, const ObjPoint& b) {
  return std::hypot(a.f1 - b.f1, a.f2 - b.f2);
}

inline double dist_point_segment(const ObjPoint& p, const ObjPoint& a, const ObjPoint& b) {
  double vx = b.f1 - a.f1, vy = b.f2 - a.f2;
  double len2 = vx * vx + vy * vy;
  if (len2 <= 0.0) return dist_point_point(p, a);
  double t = ((p.f1 - a.f1) * vx + (p.f2 - a.f2) * vy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return dist_point_point(p, ObjPoint{a.f1 + t * vx, a.f2 + t * vy});
}

// Distance from p to the region of one element, d + R^2_{>=0}.
inline double dist_point_region(const ObjPoint& p, const Element& d) {
  if (d.is_point()) {
    return std::hypot(std::max(d.lo.f1 - p.f1, 0.0), std::max(d.lo.f2 - p.f2, 0.0));
  }
  // inside?
  if (p.f1 >= d.hi.f1 && p.f2 >= d.hi.f2) return 0.0;
  if (p.f1 >= d.lo.f1 && p.f1 <= d.hi.f1 && p.f2 >= d.f2_at(p.f1)) return 0.0;
  // boundary: the segment, the vertical ray above lo, the horizontal ray
  // right of hi
  double best = dist_point_segment(p, d.lo, d.hi);
  best = std::min(best, std::hypot(std::max(d.lo.f1 - p.f1, 0.0),
                                   std::max(d.lo.f2 - p.f2, 0.0)));  // corner at lo going up
  if (p.f2 >= d.lo.f2) best = std::min(best, std::abs(d.lo.f1 - p.f1));  // vertical ray
  if (p.f1 >= d.hi.f1) best = std::min(best, std::abs(d.hi.f2 - p.f2));  // horizontal ray
  return best;
}

inline double dist_point_region_union(const ObjPoint& p, const std::vector<Element>& region) {
  double best = kInf;
  for (const Element& e : region) best = std::min(best, dist_point_region(p, e));
  return best;
}

// Perpendicular feet of q on the segment pieces of elems, as candidates.
inline void add_feet(const ObjPoint& q, const std::vector<Element>& elems,
                     std::vector<ObjPoint>& out) {
  for (const Element& e : elems) {
    if (e.is_point()) continue;
    double vx = e.hi.f1 - e.lo.f1, vy = e.hi.f2 - e.lo.f2;
    double len2 = vx * vx + vy * vy;
    double t = ((q.f1 - e.lo.f1) * vx + (q.f2 - e.lo.f2) * vy) / len2;
    if (t > 0.0 && t < 1.0)
      out.push_back(ObjPoint{e.lo.f1 + t * vx, e.lo.f2 + t * vy});
  }
}

// One-sided Hausdorff sup_{a in boundary(A)} d(a, region(B)) by candidate
// evaluation: A's breakpoints, feet of B's breakpoints on A, and a uniform
// safety-net sampling of A's curve at `resolution` steps across its span.
inline double directed_hausdorff(const std::vector<Element>& a, const std::vector<Element>& b,
                                 int resolution) {
  std::vector<ObjPoint> cands;
  double total_span = 0.0;
  for (const Element& e : a) {
    cands.push_back(e.lo);
    if (!e.is_point()) {
      cands.push_back(e.hi);
      total_span += e.hi.f1 - e.lo.f1;
    }
  }
  for (const Element& e : b) {
    add_feet(e.lo, a, cands);
    if (!e.is_point()) add_feet(e.hi, a, cands);
  }
  for (const Element& e : a) {
    if (e.is_point() || total_span <= 0.0) continue;
    int steps = std::max(2, static_cast<int>(resolution * (e.hi.f1 - e.lo.f1) / total_span));
    for (int s = 1; s < steps; ++s) {
      double t = static_cast<double>(s) / steps;
      cands.push_back(e.at(t));
    }
  }
  double best = 0.0;
  for (const ObjPoint& p : cands) best = std::max(best, dist_point_region_union(p, b));
  return best;
}

}  // namespace gap_detail

// Hausdorff surrogate between the global dual bound and the primal bound:
// G = max over store elements S of d_H(db region, S + R^2_{>=0}), evaluated
// at candidate points.  Gbar is the percentage form, clamped to [0, 100];
// y1/y2 are the lexicographic endpoint images spanning the objective range.
inline std::pair<double, double> hausdorff_gap(const ParetoStore& db, const ParetoStore& store,
                                               const ObjPoint& y1, const ObjPoint& y2,
                                               int resolution = 1000) {
  if (db.empty() || store.empty()) throw std::invalid_argument("hausdorff_gap: empty input");
  const std::vector<Element>& dbe = db.elements();
  double g = 0.0;
  for (const Element& s : store.elements()) {
    std::vector<Element> sv{s};
    double d1 = gap_detail::directed_hausdorff(dbe, sv, resolution);
    double d2 = gap_detail::directed_hausdorff(sv, dbe, resolution);
    g = std::max(g, std::max(d1, d2));
  }
  double span = std::max(y2.f1 - y1.f1, y1.f2 - y2.f2);
  double gbar = 100.0;
  if (span > 0.0) gbar = 100.0 * std::abs(span - g) / span;
  gbar = std::clamp(gbar, 0.0, 100.0);
  return {g, gbar};
}

// Area of (region of elems) intersected with the rectangle, exact sweep over
// the envelope breakpoints.  elems must be mutually nondominated and sorted
// (a ParetoStore's element list).
inline double region_area_in_rect(const std::vector<Element>& elems, const Rect& rect) {
  if (elems.empty() || rect.width() <= 0.0 || rect.height() <= 0.0) return 0.0;
  double area = 0.0;
  // integrate (top - max(G(x), bottom))^+ where G is the staircase envelope
  double prev_level = kInf;  // envelope before the first element
  double x = rect.f1_lo;
  auto add_strip = [&](double x0, double x1, double yl, double yr) {
    // envelope linear from yl at x0 to yr at x1
    double a = std::max(x0, rect.f1_lo), b = std::min(x1, rect.f1_hi);
    if (b <= a) return;
    auto height = [&](double xx) {
      double t = x1 > x0 ? (xx - x0) / (x1 - x0) : 0.0;
      double g = yl + t * (yr - yl);
      return std::max(0.0, rect.f2_hi - std::max(g, rect.f2_lo));
    };
    // the integrand is piecewise linear with kinks where g crosses the
    // rectangle's top/bottom; split at those crossings
    std::vector<double> cuts{a, b};
    if (std::abs(yr - yl) > 0.0) {
      for (double level : {rect.f2_lo, rect.f2_hi}) {
        double t = (level - yl) / (yr - yl);
        double xx = x0 + t * (x1 - x0);
        if (xx > a && xx < b) cuts.push_back(xx);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      double w = cuts[i + 1] - cuts[i];
      area += 0.5 * (height(cuts[i]) + height(cuts[i + 1])) * w;
    }
  };
  for (const Element& e : elems) {
    if (e.lo.f1 > x) {
      if (prev_level < kInf) add_strip(x, e.lo.f1, prev_level, prev_level);
      x = e.lo.f1;
    }
    if (!e.is_point()) {
      double from = std::max(x, e.lo.f1);
      if (e.hi.f1 > from) {
        add_strip(from, e.hi.f1, e.f2_at(from), e.hi.f2);
        x = e.hi.f1;
      }
    }
    prev_level = std::min(prev_level, e.hi.f2);
  }
  if (prev_level < kInf && rect.f1_hi > x) add_strip(x, rect.f1_hi, prev_level, prev_level);
  return area;
}

// Hypervolume gap percentage between the dual-bound region and the primal
// region inside the objective-space rectangle.
inline double hypervolume_gap(const ParetoStore& db, const ParetoStore& store, const Rect& os) {
  double hv_db = region_area_in_rect(db.elements(), os);
  if (hv_db <= 0.0) throw std::invalid_argument("hypervolume_gap: dual region has zero area");
  double hv_u = region_area_in_rect(store.elements(), os);
  double hv = 100.0 * (hv_db - hv_u) / hv_db;
  return std::clamp(hv, 0.0, 100.0);
}

}  // namespace bobb

#endif  // BOBB_GAP_HPP
