#ifndef BOBB_OBJECTIVE_RULES_HPP
#define BOBB_OBJECTIVE_RULES_HPP

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "bobb/instance.hpp"
#include "bobb/milp.hpp"
#include "bobb/simplex.hpp"

namespace bobb {

enum class ObjRule { kO, kA, kB, kC, kD, kE };

inline ObjRule obj_rule_from_string(const std::string& s) {
  if (s == "o") return ObjRule::kO;
  if (s == "a") return ObjRule::kA;
  if (s == "b") return ObjRule::kB;
  if (s == "c") return ObjRule::kC;
  if (s == "d") return ObjRule::kD;
  if (s == "e") return ObjRule::kE;
  throw std::invalid_argument("unknown objective rule '" + s + "' (expected o|a|b|c|d|e)");
}

struct ObjRuleError : std::runtime_error {
  explicit ObjRuleError(const std::string& what) : std::runtime_error(what) {}
};

namespace obj_rule_detail {

// Rule (a) flip at one variable given its nonbasic state.
inline double flip_coeff(double c1, VarState state) {
  if (state == VarState::kAtUpper && c1 > 0) return -c1;  // not at lower
  if (state == VarState::kAtLower && c1 < 0) return -c1;  // not at upper
  return c1;
}

}  // namespace obj_rule_detail

// Second-objective generation for building biobjective instances out of a
// single-objective one.  Rules (a) and (e) need LP/MILP solves for f1 and
// may fail on a timeout.
inline std::vector<double> generate_objective(const Instance& inst, ObjRule rule, uint64_t seed,
                                              double milp_time_limit = 60.0) {
  const int n = inst.num_vars();
  std::vector<double> c2(n, 0.0);
  switch (rule) {
    case ObjRule::kO: {
      std::mt19937_64 rng(seed);
      for (int j = 0; j < n; ++j) {
        double a = std::abs(inst.c1[j]);
        std::uniform_real_distribution<double> u(-a, a);
        c2[j] = a == 0.0 ? 0.0 : u(rng);
      }
      break;
    }
    case ObjRule::kA: {
      BoundedSimplex splx(inst, LocalBounds::of(inst), {});
      LpResult res = splx.solve(inst.c1);
      if (res.status != LpStatus::kOptimal)
        throw ObjRuleError("rule a: LP relaxation of f1 unsolved");
      for (int j = 0; j < n; ++j) {
        VarState st = splx.var_state(j);
        c2[j] = st == VarState::kBasic ? inst.c1[j] : obj_rule_detail::flip_coeff(inst.c1[j], st);
      }
      break;
    }
    case ObjRule::kB: {
      for (int j = 0; j < n; ++j) c2[j] = inst.c1[j] == 0.0 ? 0.0 : 1.0 / inst.c1[j];
      break;
    }
    case ObjRule::kC: {
      for (int j = inst.n_int; j < n; ++j) c2[j] = 1.0;
      break;
    }
    case ObjRule::kD: {
      for (int j = 0; j < inst.n_int; ++j) c2[j] = 1.0;
      if (inst.n_cont > 0) c2[inst.n_int] = 1.0;  // lowest-index continuous
      break;
    }
    case ObjRule::kE: {
      BoundedSimplex splx(inst, LocalBounds::of(inst), {});
      LpResult lp = splx.solve(inst.c1);
      if (lp.status != LpStatus::kOptimal)
        throw ObjRuleError("rule e: LP relaxation of f1 unsolved");
      MilpResult milp = milp_solve(inst, {1.0, 0.0}, LocalBounds::of(inst), {}, milp_time_limit);
      if (milp.status != MilpStatus::kOptimal || !milp.incumbent)
        throw ObjRuleError("rule e: MILP for f1 not solved to optimality in time");
      const std::vector<double>& xm = *milp.incumbent;
      for (int j = 0; j < n; ++j) {
        bool qualifies = inst.is_integer(j) && std::abs(lp.x[j] - xm[j]) <= kIntTol;
        VarState st = splx.var_state(j);
        if (qualifies && st != VarState::kBasic) {
          c2[j] = obj_rule_detail::flip_coeff(inst.c1[j], st);
        } else {
          c2[j] = inst.c1[j];
        }
      }
      break;
    }
  }
  bool all_zero = true;
  for (double v : c2) {
    if (v != 0.0) all_zero = false;
  }
  if (all_zero) throw ObjRuleError("generated second objective is identically zero");
  return c2;
}

}  // namespace bobb

#endif  // BOBB_OBJECTIVE_RULES_HPP
