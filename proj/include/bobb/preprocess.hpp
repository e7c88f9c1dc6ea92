#ifndef BOBB_PREPROCESS_HPP
#define BOBB_PREPROCESS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "bobb/geometry.hpp"
#include "bobb/instance.hpp"
#include "bobb/milp.hpp"
#include "bobb/pareto_store.hpp"

namespace bobb {

struct PreprocessConfig {
  enum class Method { kEps, kWs, kNone };
  Method method = Method::kEps;
  int rho = -1;  // negative: compute automatically from instance size
  double milp_time_limit = 60.0;
};

// Auto rho as a function of instance size: small instances lean on small
// rho, large ones on larger values.
inline int rho_auto(const Instance& inst) {
  int r = static_cast<int>(std::llround(inst.num_vars() / 80.0));
  return std::clamp(r, 2, 5);
}

// Chord weights: the normal of the segment through the two endpoint images,
// scaled to lambda1 + lambda2 = 1, so level curves of f_lambda parallel the
// chord.  Degenerate chords fall back to equal weights.
inline std::pair<double, double> chord_weights(const ObjPoint& y1, const ObjPoint& y2) {
  double d1 = y2.f1 - y1.f1;
  double d2 = y1.f2 - y2.f2;
  double sum = d1 + d2;
  if (sum <= kFeasTol * (1.0 + std::abs(d1) + std::abs(d2))) return {0.5, 0.5};
  return {d2 / sum, d1 / sum};
}

// Scalarized MILP access used by the preprocessing algorithms; production
// wires this to milp_solve, tests may script it.
struct PreprocessHooks {
  // solve min w1*f1 + w2*f2 with the given extra rows
  std::function<MilpResult(std::pair<double, double>, const std::vector<Row>&)> solve_milp;
  // Pareto curve of the slice fixed at x's integer block
  std::function<std::vector<Element>(const std::vector<double>&)> slice_front;

  struct EpsTrace {
    int k;
    double eps;
    double h;
    bool found_new;
  };
  std::vector<EpsTrace>* eps_trace = nullptr;

  struct WsTrace {
    std::vector<double> lambdas;  // weights solved this round
    int tau = 0;
    int sigma = 0;
    int t_after = 0;
  };
  std::vector<WsTrace>* ws_trace = nullptr;
};

namespace preprocess_detail {

inline void absorb_pool(const MilpResult& res, const PreprocessHooks& hooks, ParetoStore& store) {
  for (const std::vector<double>& x : res.pool) {
    for (const Element& e : hooks.slice_front(x)) store.insert(e);
  }
}

}  // namespace preprocess_detail

// Epsilon-constraint preprocessing: solve the chord MILP, then sweep
// epsilon-constrained MILPs outward from the chord image toward each
// endpoint.  Step sizes start at a 60th of the remaining span, shrink by
// 1/(1+rho) on fresh finds and grow by max(5-rho,1) on stale ones.  Every
// pool solution contributes its slice front to the seed store.
inline ParetoStore preprocess_eps(const Instance& inst, const ObjPoint& y1_I,
                                  const ObjPoint& y2_I, int rho, const PreprocessHooks& hooks,
                                  std::vector<Row>* cuts_out = nullptr) {
  ParetoStore store;
  auto lambda = chord_weights(y1_I, y2_I);
  std::vector<Row> cuts;
  MilpResult chord = hooks.solve_milp(lambda, cuts);
  ObjPoint y_lam{};
  if (chord.incumbent) {
    y_lam = inst.image(*chord.incumbent);
    if (chord.dual_bound > -kInf) cuts.push_back(level_curve_cut(inst, lambda, chord.dual_bound));
    preprocess_detail::absorb_pool(chord, hooks, store);
  } else {
    // no chord image: fall back to the midpoint of the endpoints
    y_lam = ObjPoint{0.5 * (y1_I.f1 + y2_I.f1), 0.5 * (y1_I.f2 + y2_I.f2)};
  }

  for (int k = 1; k <= 2; ++k) {
    // k = 1 caps f1 and walks east toward y2; k = 2 caps f2, walking toward y1
    double target = k == 1 ? y2_I.f1 : y1_I.f2;
    double at_lam = k == 1 ? y_lam.f1 : y_lam.f2;
    double h = (target - at_lam) / 60.0;
    if (h <= kFeasTol * (1.0 + std::abs(target))) continue;  // nothing to sweep
    const double h_floor = 1e-3 * h;
    double eps = at_lam + h;
    long long guard = 0;
    while (eps < target && ++guard < 100000) {
      std::vector<Row> rows = cuts;
      std::vector<double> cap(inst.num_vars());
      for (int j = 0; j < inst.num_vars(); ++j) cap[j] = k == 1 ? inst.c1[j] : inst.c2[j];
      rows.push_back(dense_row(cap, eps));
      std::pair<double, double> w = k == 1 ? std::pair<double, double>{0.0, 1.0}
                                           : std::pair<double, double>{1.0, 0.0};
      MilpResult res = hooks.solve_milp(w, rows);
      bool found_new = false;
      if (res.incumbent) {
        ObjPoint y_star = inst.image(*res.incumbent);
        found_new = !store.is_dominated(Element::point(y_star));
      }
      if (found_new) {
        h = h / (1.0 + rho);
      } else {
        h = std::max(5.0 - rho, 1.0) * h;
      }
      h = std::max(h, h_floor);  // keeps epsilon advancing
      if (res.incumbent) preprocess_detail::absorb_pool(res, hooks, store);
      if (hooks.eps_trace) hooks.eps_trace->push_back({k, eps, h, found_new});
      eps += h;
    }
  }
  if (cuts_out) *cuts_out = cuts;
  return store;
}

// Weighted-sum preprocessing: rounds of scalarized MILPs over bisected
// weight sets; a round with fewer than sigma/5 fresh finds counts as
// unsuccessful, and rho+1 unsuccessful rounds end the procedure.
inline ParetoStore preprocess_ws(const Instance& inst, const ObjPoint& y1_I, const ObjPoint& y2_I,
                                 int rho, const PreprocessHooks& hooks,
                                 std::vector<Row>* cuts_out = nullptr) {
  ParetoStore store;
  auto chord = chord_weights(y1_I, y2_I);
  std::vector<double> lam_next{chord.first};
  std::vector<double> lam_used{0.0, 1.0};
  std::vector<Row> cuts;
  int t = 0;
  long long guard = 0;
  while (t <= rho && ++guard < 10000) {
    int tau = 0;
    int sigma = static_cast<int>(lam_next.size());
    PreprocessHooks::WsTrace trace;
    trace.sigma = sigma;
    std::vector<double> round = lam_next;
    lam_next.clear();
    for (double lam : round) {
      lam_used.push_back(lam);
      trace.lambdas.push_back(lam);
      MilpResult res = hooks.solve_milp({lam, 1.0 - lam}, cuts);
      if (res.dual_bound > -kInf && res.dual_bound < kInf) {
        cuts.push_back(level_curve_cut(inst, {lam, 1.0 - lam}, res.dual_bound));
      }
      if (res.incumbent) {
        ObjPoint y = inst.image(*res.incumbent);
        if (!store.is_dominated(Element::point(y))) ++tau;
        preprocess_detail::absorb_pool(res, hooks, store);
      }
    }
    std::sort(lam_used.begin(), lam_used.end());
    lam_used.erase(std::unique(lam_used.begin(), lam_used.end()), lam_used.end());
    for (std::size_t i = 0; i + 1 < lam_used.size(); ++i)
      lam_next.push_back(0.5 * (lam_used[i] + lam_used[i + 1]));
    if (tau < sigma / 5.0) ++t;
    if (hooks.ws_trace) {
      trace.tau = tau;
      trace.t_after = t;
      hooks.ws_trace->push_back(trace);
    }
  }
  if (cuts_out) *cuts_out = cuts;
  return store;
}

struct LexEndpoints {
  enum class Status { kFeasible, kInfeasible, kTimeout };
  Status status = Status::kTimeout;
  ObjPoint y1{}, y2{};                // northwest / southeast Pareto endpoints
  std::vector<double> x1, x2;         // preimages
  bool exact = true;                  // false when an endpoint MILP timed out
  bool feasible() const { return status == Status::kFeasible; }
};

// Lexicographic Pareto endpoints of the instance: minimize one objective,
// then the other subject to the first staying at its optimum (imposed as two
// <= rows with tolerance).
inline LexEndpoints lex_endpoints(const Instance& inst, double time_limit = kInf,
                                  std::span<const Row> extra_rows = {}, int* milps = nullptr) {
  LexEndpoints out;
  for (int k = 1; k <= 2; ++k) {
    std::pair<double, double> w_first = k == 1 ? std::pair<double, double>{1.0, 0.0}
                                               : std::pair<double, double>{0.0, 1.0};
    std::pair<double, double> w_second = k == 1 ? std::pair<double, double>{0.0, 1.0}
                                                : std::pair<double, double>{1.0, 0.0};
    if (milps) *milps += 2;
    MilpResult first = milp_solve(inst, w_first, LocalBounds::of(inst), extra_rows, time_limit);
    if (first.status == MilpStatus::kInfeasible) {
      out.status = LexEndpoints::Status::kInfeasible;
      return out;
    }
    if (!first.incumbent) {
      out.status = LexEndpoints::Status::kTimeout;
      out.exact = false;
      return out;
    }
    if (first.status != MilpStatus::kOptimal) out.exact = false;
    double opt = first.incumbent_value;
    // pin f_k to its optimum with a two-sided tolerance band
    std::vector<Row> rows(extra_rows.begin(), extra_rows.end());
    const std::vector<double>& ck = k == 1 ? inst.c1 : inst.c2;
    double band = kFeasTol * (1.0 + std::abs(opt));
    rows.push_back(dense_row(ck, opt + band));
    std::vector<double> neg(ck.size());
    for (std::size_t j = 0; j < ck.size(); ++j) neg[j] = -ck[j];
    rows.push_back(dense_row(neg, -(opt - band)));
    MilpResult second = milp_solve(inst, w_second, LocalBounds::of(inst), rows, time_limit);
    std::vector<double> x;
    if (second.incumbent) {
      x = *second.incumbent;
      if (second.status != MilpStatus::kOptimal) out.exact = false;
    } else {
      x = *first.incumbent;
      out.exact = false;
    }
    ObjPoint y = inst.image(x);
    if (k == 1) {
      out.y1 = y;
      out.x1 = x;
    } else {
      out.y2 = y;
      out.x2 = x;
    }
  }
  out.status = LexEndpoints::Status::kFeasible;
  return out;
}

// Production hook wiring: scalarized MILPs over the real instance.
inline PreprocessHooks make_milp_hooks(const Instance& inst, double time_limit,
                                       const std::function<std::vector<Element>(
                                           const std::vector<double>&)>& slice_front,
                                       int* milp_counter = nullptr) {
  PreprocessHooks hooks;
  hooks.slice_front = slice_front;
  hooks.solve_milp = [&inst, time_limit, milp_counter](std::pair<double, double> w,
                                                       const std::vector<Row>& extra) {
    if (milp_counter) ++*milp_counter;
    return milp_solve(inst, w, LocalBounds::of(inst), extra, time_limit);
  };
  return hooks;
}

}  // namespace bobb

#endif  // BOBB_PREPROCESS_HPP
