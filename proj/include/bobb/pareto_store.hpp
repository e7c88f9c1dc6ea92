#ifndef BOBB_PARETO_STORE_HPP
#define BOBB_PARETO_STORE_HPP

#include <algorithm>
#include <utility>
#include <vector>

#include "bobb/geometry.hpp"

namespace bobb {

// Archive of mutually nondominated points and strictly decreasing segments,
// kept sorted by f1.  The dominated region of the store,
// U = union of (element + R^2_{>=0}), always equals the dominated region of
// everything ever inserted.  Insertion returns exactly the nondominated
// portion of the input and trims away stored parts the input dominates.
class ParetoStore {
 public:
  ParetoStore() = default;

  const std::vector<Element>& elements() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  void clear() { elems_.clear(); }

  // Parameter intervals of e NOT dominated by the store.
  std::vector<TInterval> undominated_intervals(const Element& e) const {
    std::vector<TInterval> dom;
    for (const Element& s : elems_) detail::dominated_t_intervals(e, s, dom);
    detail::normalize_intervals(dom);
    if (e.is_point()) {
      std::vector<TInterval> out;
      if (dom.empty()) out.push_back(TInterval{0.0, 0.0});
      return out;
    }
    return detail::complement_intervals(dom);
  }

  bool is_dominated(const Element& e) const {
    std::vector<TInterval> dom;
    for (const Element& s : elems_) {
      detail::dominated_t_intervals(e, s, dom);
    }
    detail::normalize_intervals(dom);
    if (e.is_point()) return !dom.empty();
    if (dom.empty()) return false;
    // Closed cover of [0,1].
    double cover = 0.0;
    for (const TInterval& t : dom) {
      if (t.lo > cover + 1e-9) return false;
      cover = std::max(cover, t.hi);
    }
    return cover >= 1.0 - 1e-9;
  }

  bool is_dominated(const ObjPoint& p) const { return is_dominated(Element::point(p)); }

  // Inserts e; returns the (possibly trimmed) pieces actually added.
  std::vector<Element> insert(const Element& e) {
    std::vector<TInterval> keep = undominated_intervals(e);
    std::vector<Element> pieces;
    for (const TInterval& t : keep) {
      Element piece = subelement(e, t);
      // A sliver may collapse onto a dominated endpoint; re-check.
      bool redundant = false;
      if (piece.is_point()) {
        std::vector<TInterval> dom;
        for (const Element& s : elems_) detail::dominated_t_intervals(piece, s, dom);
        redundant = !dom.empty();
      }
      if (!redundant) pieces.push_back(piece);
    }
    if (pieces.empty()) return pieces;

    // Trim existing elements against the inserted pieces.
    std::vector<Element> rebuilt;
    rebuilt.reserve(elems_.size() + pieces.size());
    for (const Element& s : elems_) {
      std::vector<TInterval> dom;
      for (const Element& p : pieces) detail::dominated_t_intervals(s, p, dom);
      detail::normalize_intervals(dom);
      if (dom.empty()) {
        rebuilt.push_back(s);
        continue;
      }
      if (s.is_point()) continue;  // dominated point drops out
      for (const TInterval& t : detail::complement_intervals(dom)) {
        Element piece = subelement(s, t);
        if (piece.is_point()) {
          // Endpoint slivers of trimmed segments may be dominated; drop them.
          std::vector<TInterval> pd;
          for (const Element& p : pieces) detail::dominated_t_intervals(piece, p, pd);
          if (!pd.empty()) continue;
        }
        rebuilt.push_back(piece);
      }
    }
    for (const Element& p : pieces) rebuilt.push_back(p);
    std::sort(rebuilt.begin(), rebuilt.end(), [](const Element& a, const Element& b) {
      if (a.lo.f1 != b.lo.f1) return a.lo.f1 < b.lo.f1;
      return a.lo.f2 > b.lo.f2;
    });
    elems_ = std::move(rebuilt);
    return pieces;
  }

  std::vector<Element> insert(const ObjPoint& p) { return insert(Element::point(p)); }

 private:
  std::vector<Element> elems_;
};

// Store built by inserting every element; the result is order independent
// up to region equality.
inline ParetoStore nd_filter(const std::vector<Element>& elems) {
  ParetoStore store;
  for (const Element& e : elems) store.insert(e);
  return store;
}

}  // namespace bobb

#endif  // BOBB_PARETO_STORE_HPP
