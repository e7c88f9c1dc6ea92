#ifndef BOBB_LATTICE_ORACLE_HPP
#define BOBB_LATTICE_ORACLE_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bobb/instance.hpp"
#include "bobb/parametric.hpp"
#include "bobb/pareto_store.hpp"

namespace bobb {

struct LatticeTooLarge : std::runtime_error {
  explicit LatticeTooLarge(const std::string& what) : std::runtime_error(what) {}
};

inline long long lattice_size(const Instance& inst) {
  long long total = 1;
  for (int j = 0; j < inst.n_int; ++j) {
    long long width = std::llround(inst.upper[j] - inst.lower[j]) + 1;
    if (width <= 0) return 0;
    if (total > (1LL << 62) / width) return 1LL << 62;
    total *= width;
  }
  return total;
}

// Pareto front of the slice problem of one integer assignment: fix the
// integer block, leave continuous bounds global.  Empty when infeasible.
inline std::vector<Element> slice_front_elements(const Instance& inst,
                                                 std::span<const double> x_int) {
  if (inst.n_cont == 0) {
    std::vector<double> x(x_int.begin(), x_int.begin() + inst.n_int);
    if (!inst.satisfies_rows(x)) return {};
    return {Element::point(inst.image(x))};
  }
  LocalBounds lb = LocalBounds::of(inst);
  for (int j = 0; j < inst.n_int; ++j) {
    lb.lower[j] = x_int[j];
    lb.upper[j] = x_int[j];
  }
  ParametricResult pr = parametric_front(inst, lb);
  if (pr.status != LpStatus::kOptimal) return {};
  return pr.curve.to_elements();
}

// Brute-force Pareto set: union of slice fronts over the whole integer
// lattice, nd-filtered.  The exactness reference for the solver.
inline ParetoStore lattice_oracle_front(const Instance& inst, long long cap = 100000) {
  long long size = lattice_size(inst);
  if (size > cap)
    throw LatticeTooLarge("integer lattice has " + std::to_string(size) +
                          " points, cap is " + std::to_string(cap));
  ParetoStore store;
  std::vector<double> assign(inst.n_int, 0.0);
  std::function<void(int)> walk = [&](int j) {
    if (j == inst.n_int) {
      for (const Element& e : slice_front_elements(inst, assign)) store.insert(e);
      return;
    }
    for (double v = inst.lower[j]; v <= inst.upper[j] + 0.5; v += 1.0) {
      assign[j] = v;
      walk(j + 1);
    }
  };
  walk(0);
  return store;
}

}  // namespace bobb

#endif  // BOBB_LATTICE_ORACLE_HPP
