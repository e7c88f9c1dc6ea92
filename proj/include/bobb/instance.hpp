#ifndef BOBB_INSTANCE_HPP
#define BOBB_INSTANCE_HPP

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bobb/geometry.hpp"
#include "bobb/numerics.hpp"

namespace bobb {

// One <= constraint, sparse: sum_j terms[j] * x_j <= rhs.
struct Row {
  std::vector<std::pair<int, double>> terms;
  double rhs = 0.0;

  double activity(std::span<const double> x) const {
    double a = 0.0;
    for (const auto& [j, v] : terms) a += v * x[j];
    return a;
  }
};

inline Row dense_row(const std::vector<double>& coeffs, double rhs) {
  Row r;
  r.rhs = rhs;
  for (int j = 0; j < static_cast<int>(coeffs.size()); ++j) {
    if (coeffs[j] != 0.0) r.terms.emplace_back(j, coeffs[j]);
  }
  return r;
}

// A biobjective mixed-integer program in normalized form:
//   min (c1.x, c2.x)  s.t.  rows (all <=),  l <= x <= u,
// with integer variables occupying indices 0..n_int-1 and all bounds finite.
struct Instance {
  std::string name;
  int n_int = 0;
  int n_cont = 0;
  std::vector<double> c1, c2;
  std::vector<Row> rows;
  std::vector<double> lower, upper;

  int num_vars() const { return n_int + n_cont; }
  bool is_integer(int j) const { return j < n_int; }

  double eval1(std::span<const double> x) const {
    double v = 0.0;
    for (int j = 0; j < num_vars(); ++j) v += c1[j] * x[j];
    return v;
  }
  double eval2(std::span<const double> x) const {
    double v = 0.0;
    for (int j = 0; j < num_vars(); ++j) v += c2[j] * x[j];
    return v;
  }
  ObjPoint image(std::span<const double> x) const { return ObjPoint{eval1(x), eval2(x)}; }

  bool satisfies_rows(std::span<const double> x, double tol = kFeasTol) const {
    for (const Row& r : rows) {
      if (r.activity(x) > r.rhs + tol * (1.0 + std::abs(r.rhs))) return false;
    }
    return true;
  }
};

struct InstanceError : std::runtime_error {
  explicit InstanceError(const std::string& what) : std::runtime_error(what) {}
};

// Floor/ceil tightening of integer bounds; leaves continuous bounds alone.
inline void normalize_integer_bounds(Instance& inst) {
  for (int j = 0; j < inst.n_int; ++j) {
    inst.lower[j] = std::ceil(inst.lower[j] - kIntTol);
    inst.upper[j] = std::floor(inst.upper[j] + kIntTol);
  }
}

inline void validate_instance(const Instance& inst) {
  const int n = inst.num_vars();
  if (inst.n_int < 0 || inst.n_cont < 0 || n <= 0)
    throw InstanceError("instance has no variables");
  if (static_cast<int>(inst.c1.size()) != n || static_cast<int>(inst.c2.size()) != n)
    throw InstanceError("objective length does not match variable count");
  if (static_cast<int>(inst.lower.size()) != n || static_cast<int>(inst.upper.size()) != n)
    throw InstanceError("bound vectors do not match variable count");
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(inst.lower[j]) || !std::isfinite(inst.upper[j]))
      throw InstanceError("variable " + std::to_string(j) + " has an infinite bound");
    if (inst.lower[j] >= inst.upper[j] + kFeasTol)
      throw InstanceError("variable " + std::to_string(j) + " has lower bound >= upper bound");
  }
  for (const Row& r : inst.rows) {
    for (const auto& [j, v] : r.terms) {
      if (j < 0 || j >= n) throw InstanceError("row references unknown variable");
      if (!std::isfinite(v)) throw InstanceError("row coefficient not finite");
    }
    if (!std::isfinite(r.rhs)) throw InstanceError("row rhs not finite");
  }
}

// Per-node variable bounds; always full-length copies.
struct LocalBounds {
  std::vector<double> lower, upper;

  static LocalBounds of(const Instance& inst) { return LocalBounds{inst.lower, inst.upper}; }

  bool consistent() const {
    for (std::size_t j = 0; j < lower.size(); ++j) {
      if (lower[j] > upper[j] + kFeasTol) return false;
    }
    return true;
  }
};

}  // namespace bobb

#endif  // BOBB_INSTANCE_HPP
