#ifndef BOBB_BB_HPP
#define BOBB_BB_HPP

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bobb/gap.hpp"
#include "bobb/geometry.hpp"
#include "bobb/instance.hpp"
#include "bobb/milp.hpp"
#include "bobb/parametric.hpp"
#include "bobb/pareto_store.hpp"
#include "bobb/preprocess.hpp"
#include "bobb/presolve.hpp"
#include "bobb/simplex.hpp"

namespace bobb {

struct FathomToggles {
  bool fr0 = true;
  bool fr1a = true;
  bool fr2a = true;
  bool fr1b = true;
  bool fr2b = true;
  bool fr3 = true;

  static FathomToggles all_off_except(const std::string& rule) {
    FathomToggles t{false, false, false, false, false, false};
    t.fr0 = true;  // optimality fathoming stays on; `rule` picks the dominance rule
    if (rule == "1a") t.fr1a = true;
    if (rule == "2a") t.fr2a = true;
    if (rule == "1b") t.fr1b = true;
    if (rule == "2b") t.fr2b = true;
    if (rule == "3") t.fr3 = true;
    return t;
  }
};

struct BbConfig {
  // presolve
  bool duality_fixing = true;
  bool singleton_fixing = false;
  bool dominating_columns = true;  // detect pairs
  bool dominating_cuts = false;    // add disjunction cuts from the pairs
  bool root_probing = false;
  bool branch_probing = true;
  bool pareto_branching = true;
  int probe_rounds = 3;
  // preprocessing
  PreprocessConfig preprocess;
  // objective-space gap splitting
  bool split_gaps = false;
  double theta = 0.1;
  int workers = 1;
  // gap tracking
  enum class GapMode { kNone, kHausdorff, kHv, kBoth };
  GapMode gap_mode = GapMode::kNone;
  int gap_every = 25;
  // limits
  double time_limit = kInf;
  double milp_time_limit = 60.0;
  FathomToggles rules;
  // JSON-lines event sink (node + checkpoint events)
  std::function<void(const std::string&)> event_sink;
};

enum class NodeStatus {
  kOpen,
  kFathomedInfeasible,
  kFathomedOptimality,
  kFathomedDominance,
  kBranched
};

inline const char* to_string(NodeStatus s) {
  switch (s) {
    case NodeStatus::kOpen: return "open";
    case NodeStatus::kFathomedInfeasible: return "fathomed-infeasible";
    case NodeStatus::kFathomedOptimality: return "fathomed-optimality";
    case NodeStatus::kFathomedDominance: return "fathomed-dominance";
    case NodeStatus::kBranched: return "branched";
  }
  return "?";
}

struct Node {
  long long id = 0;
  long long parent = -1;
  int depth = 0;
  LocalBounds bounds;
  std::vector<Row> local_rows;  // subtree-scoped rows: objective caps, level cuts
  double f1_cap = kInf, f2_cap = kInf;
  double priority = -kInf;  // chord LP value at creation
  NodeStatus status = NodeStatus::kOpen;
  // processing cache
  ObjPoint y1{}, y2{}, ylam{};
  bool y1_int = false, y2_int = false, ylam_int = false;
  std::pair<double, double> lambda{0.5, 0.5};
  std::vector<double> x1, x2, xlam;
  std::optional<DualBoundCurve> curve;
  std::vector<int> scores;  // per integer variable, reset per node
};

struct Checkpoint {
  long long nodes = 0;
  GapReport gap;
};

struct SolveStats {
  long long nodes = 0;
  long long lps = 0;
  long long milps = 0;
  double wall_s = 0.0;
  long long fathomed_infeasible = 0;
  long long fathomed_optimality = 0;
  long long fathomed_dominance = 0;
  long long branched = 0;
  std::map<std::string, long long> rule_fired;
  std::vector<Checkpoint> checkpoints;
  GapReport final_gap;
  bool final_gap_valid = false;
};

struct BbResult {
  ParetoStore front;
  SolveStats stats;
  bool infeasible = false;
  bool complete = false;
};

// Componentwise minimum of a point set.
inline ObjPoint ideal_of(std::initializer_list<ObjPoint> pts) {
  ObjPoint out{kInf, kInf};
  for (const ObjPoint& p : pts) {
    out.f1 = std::min(out.f1, p.f1);
    out.f2 = std::min(out.f2, p.f2);
  }
  return out;
}

// The two LP ideal points {ideal(y2, ylam), ideal(y1, ylam)}.
inline std::array<ObjPoint, 2> ideal_points_lp(const ObjPoint& y1, const ObjPoint& y2,
                                               const ObjPoint& ylam) {
  return {ideal_of({y2, ylam}), ideal_of({y1, ylam})};
}

// Chord-parallel line through `level_point` clipped to the quadrant anchored
// at `anchor`; degenerate clips collapse to the anchor point.
inline Element ideal_segment(const ObjPoint& anchor, const ObjPoint& level_point,
                             std::pair<double, double> lambda) {
  double l1 = lambda.first, l2 = lambda.second;
  if (l1 <= kCostTol || l2 <= kCostTol) return Element::point(anchor);
  double v = l1 * level_point.f1 + l2 * level_point.f2;
  ObjPoint left{anchor.f1, (v - l1 * anchor.f1) / l2};
  ObjPoint right{(v - l2 * anchor.f2) / l1, anchor.f2};
  if (right.f1 - left.f1 <= kFeasTol * (1.0 + std::abs(left.f1) + std::abs(right.f1)))
    return Element::point(anchor);
  return Element::segment(left, right);
}

// MILP images (or their dual-bound surrogates) available at a node.
struct MilpImages {
  std::optional<ObjPoint> y1, y2, ylam;
};

// D^I: the pair of mixed LP/MILP ideal points for the index set I.
inline std::array<ObjPoint, 2> mixed_ideal_points(const ObjPoint& y1, const ObjPoint& y2,
                                                  const ObjPoint& ylam, bool i1, bool i2,
                                                  bool ilam, const MilpImages& milp) {
  auto pick = [&](int which) -> ObjPoint {
    switch (which) {
      case 1: return i1 && milp.y1 ? *milp.y1 : y1;
      case 2: return i2 && milp.y2 ? *milp.y2 : y2;
      default: return ilam && milp.ylam ? *milp.ylam : ylam;
    }
  };
  // P^1 = {y2, ylam}: drop members indexed by I, add MILP images of I \ {1}
  auto build = [&](int k) {
    std::vector<ObjPoint> pts;
    if (k == 1) {
      if (!i2) pts.push_back(y2);
      if (!ilam) pts.push_back(ylam);
      if (i2) pts.push_back(pick(2));
      if (ilam) pts.push_back(pick(0));
    } else {
      if (!i1) pts.push_back(y1);
      if (!ilam) pts.push_back(ylam);
      if (i1) pts.push_back(pick(1));
      if (ilam) pts.push_back(pick(0));
    }
    ObjPoint out{kInf, kInf};
    for (const ObjPoint& p : pts) {
      out.f1 = std::min(out.f1, p.f1);
      out.f2 = std::min(out.f2, p.f2);
    }
    return out;
  };
  return {build(1), build(2)};
}

// Objective-space fathoming result: surviving f1 intervals of the node's
// dual curve with the f2 level at each interval's west edge.
struct OsFathomResult {
  struct Interval {
    double f1_lo, f1_hi;
    double f2_at_lo;
  };
  std::vector<Interval> intervals;
  double f1_cap = kInf, f2_cap = kInf;
  bool left_trimmed = false, right_trimmed = false;
};

class BbSolver {
 public:
  BbSolver(const Instance& inst, const BbConfig& cfg)
      : base_(inst), cfg_(cfg), work_(inst) {
    start_ = Clock::now();
    deadline_ = start_ + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(
                             std::isfinite(cfg.time_limit) ? cfg.time_limit : 1e9));
  }

  // Pareto curve of the slice problem of x's integer block, on the working
  // (presolved) instance without node-local rows: slice points are integer
  // feasible so global cuts keep them.
  std::vector<Element> slice_front(const std::vector<double>& x) {
    LocalBounds lb = LocalBounds::of(work_);
    for (int j = 0; j < work_.n_int; ++j) {
      double v = std::round(x[j]);
      lb.lower[j] = v;
      lb.upper[j] = v;
    }
    if (work_.n_cont == 0) {
      std::vector<double> xi(lb.lower.begin(), lb.lower.begin() + work_.n_int);
      if (!work_.satisfies_rows(xi)) return {};
      return {Element::point(work_.image(xi))};
    }
    ParametricResult pr = parametric_front(work_, lb, global_rows_);
    stats_.lps += 1;
    if (pr.status != LpStatus::kOptimal) return {};
    return pr.curve.to_elements();
  }

  BbResult run() {
    const auto t0 = Clock::now();
    BbResult out;
    presolve_root();

    LexEndpoints lex = lex_endpoints(work_, remaining_time(), global_rows_, &milp_count_);
    stats_.milps = milp_count_;
    if (lex.status == LexEndpoints::Status::kInfeasible) {
      out.infeasible = true;
      out.stats = stats_;
      out.stats.wall_s = elapsed_since(t0);
      return out;
    }
    if (lex.status == LexEndpoints::Status::kTimeout) {
      // ran out of time before the endpoints resolved: partial result
      out.complete = false;
      out.front = std::move(store_);
      out.stats = stats_;
      out.stats.wall_s = elapsed_since(t0);
      return out;
    }
    y1_I_ = lex.y1;
    y2_I_ = lex.y2;
    insert_assignment(lex.x1, store_);
    insert_assignment(lex.x2, store_);

    run_preprocessing();

    if (cfg_.root_probing) {
      LocalBounds rb = LocalBounds::of(work_);
      for (int j = 0; j < work_.n_int; ++j) {
        for (ProbeSide side : {ProbeSide::kLower, ProbeSide::kUpper}) {
          for (int round = 0; round < cfg_.probe_rounds; ++round) {
            if (!probe_variable(work_, store_, j, side, rb, global_rows_)) break;
            stats_.lps += 1;
          }
        }
      }
      work_.lower = rb.lower;
      work_.upper = rb.upper;
    }

    bool timed_out = false;
    if (cfg_.split_gaps) {
      timed_out = run_split_regions();
    } else {
      timed_out = run_region({}, store_);
    }

    out.front = std::move(store_);
    out.complete = !timed_out;
    stats_.wall_s = elapsed_since(t0);
    if (out.complete) {
      stats_.final_gap = GapReport{0.0, 100.0, 0.0};
      stats_.final_gap_valid = true;
    }
    out.stats = stats_;
    return out;
  }

  // ---- pieces exposed for tests ----

  const Instance& working_instance() const { return work_; }
  ParetoStore& store() { return store_; }
  const SolveStats& stats() const { return stats_; }
  std::span<const Row> global_rows() const { return global_rows_; }
  void set_endpoints(const ObjPoint& y1, const ObjPoint& y2) {
    y1_I_ = y1;
    y2_I_ = y2;
  }

  Node make_root() {
    Node root;
    root.id = next_id_++;
    root.bounds = LocalBounds::of(work_);
    root.scores.assign(work_.n_int, 0);
    return root;
  }

  // Alg. 1 node processing; updates the store and the node cache.
  NodeStatus process_node(Node& s, ParetoStore& store) {
    s.scores.assign(work_.n_int, 0);
    std::vector<Row> rows = combined_rows(s);

    BoundedSimplex splx(work_, s.bounds, rows);
    LpResult r1 = splx.solve(work_.c1);
    stats_.lps += 1;
    if (r1.status != LpStatus::kOptimal) return finish(s, NodeStatus::kFathomedInfeasible, "infeasible");
    splx.lex_improve(work_.c2);
    s.x1.assign(splx.full_solution().begin(), splx.full_solution().begin() + work_.num_vars());
    s.y1 = work_.image(s.x1);
    s.y1_int = integral(s.x1);

    splx.resolve(work_.c2);
    splx.lex_improve(work_.c1);
    stats_.lps += 1;
    s.x2.assign(splx.full_solution().begin(), splx.full_solution().begin() + work_.num_vars());
    s.y2 = work_.image(s.x2);
    s.y2_int = integral(s.x2);

    if (s.y1_int) insert_assignment(s.x1, store);
    if (s.y2_int) insert_assignment(s.x2, store);

    if (s.y1_int && s.y2_int && cfg_.rules.fr0) {
      bool fr0 = fr0_check(
          work_, s.bounds, rows, s.y1, s.y2,
          [&](const Element& e) { store.insert(e); },
          [&](std::span<const double> xa, std::span<const double> xb) { score_pivot(s, xa, xb); });
      if (fr0) return finish(s, NodeStatus::kFathomedOptimality, "0");
    }

    s.lambda = chord_weights(s.y1, s.y2);
    std::vector<double> clam(work_.num_vars());
    for (int j = 0; j < work_.num_vars(); ++j)
      clam[j] = s.lambda.first * work_.c1[j] + s.lambda.second * work_.c2[j];
    splx.resolve(clam);
    stats_.lps += 1;
    s.xlam.assign(splx.full_solution().begin(), splx.full_solution().begin() + work_.num_vars());
    s.ylam = work_.image(s.xlam);
    s.ylam_int = integral(s.xlam);
    if (s.ylam_int) insert_assignment(s.xlam, store);

    score_fractional(s, s.x1);
    score_fractional(s, s.x2);
    score_fractional(s, s.xlam);

    bool d1 = store.is_dominated(s.y1);
    bool d2 = store.is_dominated(s.y2);
    bool dl = store.is_dominated(s.ylam);

    if (d1 && d2 && dl) {
      auto ideals = ideal_points_lp(s.y1, s.y2, s.ylam);
      if (cfg_.rules.fr1a && store.is_dominated(ideals[0]) && store.is_dominated(ideals[1]))
        return finish(s, NodeStatus::kFathomedDominance, "1a");
      Element hseg = ideal_segment(ObjPoint{s.y1.f1, s.y2.f2}, s.ylam, s.lambda);
      if (cfg_.rules.fr2a && store.is_dominated(hseg))
        return finish(s, NodeStatus::kFathomedDominance, "2a");
      if (cfg_.rules.fr3) {
        bool fr3 = fr3_check(work_, s.bounds, rows, s.y1, s.y2, store, nullptr,
                             [&](std::span<const double> xa, std::span<const double> xb) {
                               score_pivot(s, xa, xb);
                             });
        if (fr3) return finish(s, NodeStatus::kFathomedDominance, "3");
      }
      return NodeStatus::kOpen;
    }

    // MILP branch (Alg. 1 lines 17-26)
    auto ideals = ideal_points_lp(s.y1, s.y2, s.ylam);
    bool i1 = false, i2 = false, ilam = false;
    if (!store.is_dominated(ideals[0])) {  // (P^1)^ideal fails: add {2, lambda}
      i2 = true;
      ilam = true;
    }
    if (!store.is_dominated(ideals[1])) {  // (P^2)^ideal fails: add {1, lambda}
      i1 = true;
      ilam = true;
    }

    MilpImages images;
    std::vector<std::vector<double>> optimal_xs;
    std::vector<Row> local_rows = rows;  // cuts added while looping feed later solves
    for (int k : {1, 2, 0}) {  // 0 stands for lambda
      if ((k == 1 && !i1) || (k == 2 && !i2) || (k == 0 && !ilam)) continue;
      std::pair<double, double> w = k == 1   ? std::pair<double, double>{1.0, 0.0}
                                    : k == 2 ? std::pair<double, double>{0.0, 1.0}
                                             : s.lambda;
      MilpResult res =
          milp_solve(work_, w, s.bounds, local_rows, std::min(cfg_.milp_time_limit, remaining_time()));
      ++milp_count_;
      stats_.milps = milp_count_;
      if (res.status == MilpStatus::kInfeasible) {
        // no integer point in the node at all
        return finish(s, NodeStatus::kFathomedInfeasible, "infeasible");
      }
      for (const auto& x : res.pool) insert_assignment(x, store);
      ObjPoint img;
      if (res.status == MilpStatus::kOptimal) {
        img = work_.image(*res.incumbent);
        optimal_xs.push_back(*res.incumbent);
      } else {
        // timeout surrogate: the dual-bound point on that objective
        double b = res.dual_bound;
        if (b <= -kInf / 2) continue;  // nothing usable
        if (k == 1) {
          img = ObjPoint{b, s.y2.f2};
        } else if (k == 2) {
          img = ObjPoint{s.y1.f1, b};
        } else {
          img = ObjPoint{s.ylam.f1,
                         (b - s.lambda.first * s.ylam.f1) / std::max(s.lambda.second, kCostTol)};
        }
      }
      if (k == 1) images.y1 = img;
      if (k == 2) images.y2 = img;
      if (k == 0) images.ylam = img;
      if (res.dual_bound > -kInf / 2 && res.dual_bound < kInf / 2) {
        Row cut = level_curve_cut(work_, w, res.dual_bound);
        local_rows.push_back(cut);
        s.local_rows.push_back(cut);  // subtree scope
      }
    }
    score_milp_disagreement(s, optimal_xs);

    auto dpts = mixed_ideal_points(s.y1, s.y2, s.ylam, i1, i2, ilam, images);
    if (cfg_.rules.fr1b && store.is_dominated(dpts[0]) && store.is_dominated(dpts[1]))
      return finish(s, NodeStatus::kFathomedDominance, "1b");
    if (ilam && cfg_.rules.fr2b) {
      ObjPoint anchor{images.y1 ? images.y1->f1 : s.y1.f1, images.y2 ? images.y2->f2 : s.y2.f2};
      if (images.ylam) {
        Element hseg = ideal_segment(anchor, *images.ylam, s.lambda);
        if (store.is_dominated(hseg)) return finish(s, NodeStatus::kFathomedDominance, "2b");
      }
    }
    return NodeStatus::kOpen;
  }

  // Surviving f1 intervals of the node's dual curve against the store.
  OsFathomResult os_fathom(Node& s, const ParetoStore& store) {
    OsFathomResult out;
    ensure_curve(s);
    if (!s.curve) return out;  // infeasible relaxation: no intervals
    std::vector<Element> pieces = s.curve->to_elements();
    if (pieces.empty()) return out;
    const double west = s.curve->breakpoints.front().f1;
    const double east = s.curve->breakpoints.back().f1;
    const double span = std::max(east - west, 1.0);
    struct Range {
      double lo, hi, f2lo;
    };
    std::vector<Range> ranges;
    for (const Element& e : pieces) {
      for (const TInterval& t : store.undominated_intervals(e)) {
        ObjPoint a = e.at(t.lo), b = e.at(t.hi);
        ranges.push_back({a.f1, b.f1, a.f2});
      }
    }
    if (ranges.empty()) return out;
    std::sort(ranges.begin(), ranges.end(), [](const Range& a, const Range& b) {
      return a.lo < b.lo;
    });
    const double merge_gap = 1e-7 * span;
    std::vector<Range> merged;
    for (const Range& r : ranges) {
      if (!merged.empty() && r.lo <= merged.back().hi + merge_gap) {
        merged.back().hi = std::max(merged.back().hi, r.hi);
      } else {
        merged.push_back(r);
      }
    }
    for (const Range& r : merged) out.intervals.push_back({r.lo, r.hi, r.f2lo});
    out.left_trimmed = merged.front().lo > west + merge_gap;
    out.right_trimmed = merged.back().hi < east - merge_gap;
    out.f1_cap = merged.back().hi;
    out.f2_cap = merged.front().f2lo;
    return out;
  }

  // Branching: Pareto branching over surviving intervals when there are at
  // least two, otherwise variable branching on the highest-score variable
  // (ties to the highest index) with probing on each child.
  std::vector<Node> branch(Node& s, const OsFathomResult& os, ParetoStore& store) {
    if (cfg_.pareto_branching && os.intervals.size() >= 2) {
      std::vector<Node> kids;
      for (std::size_t i = 0; i < os.intervals.size(); ++i) {
        const auto& iv = os.intervals[i];
        Node child = child_of(s);
        bool left_cut = i > 0 || os.left_trimmed;
        bool right_cut = i + 1 < os.intervals.size() || os.right_trimmed;
        if (left_cut) {
          // f1 >= lo and the store level caps f2 above the interval
          std::vector<double> neg(work_.num_vars());
          for (int j = 0; j < work_.num_vars(); ++j) neg[j] = -work_.c1[j];
          child.local_rows.push_back(dense_row(neg, -(iv.f1_lo - cap_slack(iv.f1_lo))));
          child.local_rows.push_back(dense_row(work_.c2, iv.f2_at_lo + cap_slack(iv.f2_at_lo)));
          child.f2_cap = std::min(child.f2_cap, iv.f2_at_lo);
        }
        if (right_cut) {
          child.local_rows.push_back(dense_row(work_.c1, iv.f1_hi + cap_slack(iv.f1_hi)));
          child.f1_cap = std::min(child.f1_cap, iv.f1_hi);
        }
        kids.push_back(std::move(child));
      }
      return kids;
    }

    // single interval: tighten the node caps before variable branching
    LocalBounds base = s.bounds;
    std::vector<Row> caps;
    if (os.intervals.size() == 1) {
      const auto& iv = os.intervals.front();
      if (os.left_trimmed) {
        std::vector<double> neg(work_.num_vars());
        for (int j = 0; j < work_.num_vars(); ++j) neg[j] = -work_.c1[j];
        caps.push_back(dense_row(neg, -(iv.f1_lo - cap_slack(iv.f1_lo))));
        caps.push_back(dense_row(work_.c2, iv.f2_at_lo + cap_slack(iv.f2_at_lo)));
      }
      if (os.right_trimmed) caps.push_back(dense_row(work_.c1, iv.f1_hi + cap_slack(iv.f1_hi)));
    }

    // candidates: unfixed integer variables, highest score first, highest
    // index on ties
    std::vector<int> order;
    for (int j = 0; j < work_.n_int; ++j) {
      if (base.upper[j] - base.lower[j] >= 1.0 - kIntTol) order.push_back(j);
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (s.scores[a] != s.scores[b]) return s.scores[a] > s.scores[b];
      return a > b;
    });
    if (order.empty())
      throw std::logic_error("branch: unfathomed node with no branching candidate");

    std::vector<Row> child_rows = s.local_rows;
    child_rows.insert(child_rows.end(), caps.begin(), caps.end());
    std::vector<Row> probe_rows(global_rows_.begin(), global_rows_.end());
    probe_rows.insert(probe_rows.end(), child_rows.begin(), child_rows.end());

    for (int var : order) {
      double v = branch_value(s, var, base);
      double fv = std::clamp(std::floor(v), base.lower[var], base.upper[var] - 1.0);
      LocalBounds lo_b = base, hi_b = base;
      lo_b.upper[var] = fv;
      hi_b.lower[var] = fv + 1.0;
      bool lo_ok = true, hi_ok = true;
      if (cfg_.branch_probing) {
        lo_ok = probe_child(var, lo_b, store, probe_rows);
        hi_ok = probe_child(var, hi_b, store, probe_rows);
      }
      if (lo_ok && hi_ok) {
        Node lo = child_of(s), hi = child_of(s);
        lo.bounds = lo_b;
        hi.bounds = hi_b;
        lo.local_rows = child_rows;
        hi.local_rows = child_rows;
        apply_caps(lo, os);
        apply_caps(hi, os);
        std::vector<Node> kids;
        kids.push_back(std::move(lo));
        kids.push_back(std::move(hi));
        return kids;
      }
      if (!lo_ok && !hi_ok) {
        return {};  // both sides die: the node has no integer point left
      }
      // adopt the surviving side's restriction and re-branch on the next var
      base = lo_ok ? lo_b : hi_b;
    }
    // every candidate collapsed to one side: hand back the tightened node
    Node child = child_of(s);
    child.bounds = base;
    child.local_rows = child_rows;
    apply_caps(child, os);
    std::vector<Node> kids;
    kids.push_back(std::move(child));
    return kids;
  }

  // nd-filter of every open node's curve plus the store itself (solved
  // regions back the bound where no node remains open).
  ParetoStore global_dual_bound(std::vector<Node*> open_nodes, const ParetoStore& store) {
    std::vector<Element> elems;
    for (Node* n : open_nodes) {
      ensure_curve(*n);
      if (!n->curve) continue;
      for (const Element& e : n->curve->to_elements()) elems.push_back(e);
    }
    for (const Element& e : store.elements()) elems.push_back(e);
    return nd_filter(elems);
  }

  GapReport gap_checkpoint(std::vector<Node*> open_nodes, const ParetoStore& store) {
    GapReport rep;
    rep.Gbar = 100.0;
    if (store.empty()) return rep;
    if (open_nodes.empty()) {
      rep.G = 0.0;
      rep.HV = 0.0;
      rep.Gbar = 100.0;
      return rep;
    }
    ParetoStore db = global_dual_bound(std::move(open_nodes), store);
    if (db.empty()) return rep;
    if (cfg_.gap_mode == BbConfig::GapMode::kHausdorff || cfg_.gap_mode == BbConfig::GapMode::kBoth) {
      auto [g, gbar] = hausdorff_gap(db, store, y1_I_, y2_I_);
      rep.G = g;
      rep.Gbar = gbar;
    }
    if (cfg_.gap_mode == BbConfig::GapMode::kHv || cfg_.gap_mode == BbConfig::GapMode::kBoth) {
      Rect os{y1_I_.f1, y2_I_.f1, y2_I_.f2, y1_I_.f2};
      // a zero-area dual region means nothing is left open inside the
      // rectangle: the gap is closed there
      if (os.width() > 0 && os.height() > 0 &&
          region_area_in_rect(db.elements(), os) > 0.0) {
        rep.HV = hypervolume_gap(db, store, os);
      }
    }
    return rep;
  }

  // Shrinks one subregion by its own lexicographic endpoint MILPs; nullopt
  // when the region carries no integer point.  Endpoint slices feed the
  // global store.
  std::optional<std::vector<Row>> shrink_region(const std::vector<Row>& region_rows) {
    std::vector<Row> all(global_rows_.begin(), global_rows_.end());
    all.insert(all.end(), region_rows.begin(), region_rows.end());
    LexEndpoints lex = lex_endpoints(work_, remaining_time(), all, &milp_count_);
    stats_.milps = milp_count_;
    if (!lex.feasible()) return std::nullopt;
    insert_assignment(lex.x1, store_);
    insert_assignment(lex.x2, store_);
    std::vector<Row> shrunk = region_rows;
    std::vector<double> neg1(work_.num_vars()), neg2(work_.num_vars());
    for (int j = 0; j < work_.num_vars(); ++j) {
      neg1[j] = -work_.c1[j];
      neg2[j] = -work_.c2[j];
    }
    shrunk.push_back(dense_row(neg1, -(lex.y1.f1 - cap_slack(lex.y1.f1))));
    shrunk.push_back(dense_row(work_.c1, lex.y2.f1 + cap_slack(lex.y2.f1)));
    shrunk.push_back(dense_row(work_.c2, lex.y1.f2 + cap_slack(lex.y1.f2)));
    shrunk.push_back(dense_row(neg2, -(lex.y2.f2 - cap_slack(lex.y2.f2))));
    return shrunk;
  }

  // Gap-based subregion caps from the preprocessing store (section 5.2):
  // consecutive elements further apart than theta times the f1 span split the
  // objective space at the gap midpoints.
  std::vector<std::vector<Row>> split_os(const ParetoStore& store, double theta) {
    std::vector<double> cuts;
    const double span = y2_I_.f1 - y1_I_.f1;
    const auto& es = store.elements();
    for (std::size_t i = 0; i + 1 < es.size(); ++i) {
      double gap = es[i + 1].lo.f1 - es[i].hi.f1;
      if (gap > theta * span) cuts.push_back(0.5 * (es[i].hi.f1 + es[i + 1].lo.f1));
    }
    std::vector<std::vector<Row>> regions;
    if (cuts.empty()) {
      regions.emplace_back();
      return regions;
    }
    std::vector<double> neg(work_.num_vars());
    for (int j = 0; j < work_.num_vars(); ++j) neg[j] = -work_.c1[j];
    for (std::size_t r = 0; r <= cuts.size(); ++r) {
      std::vector<Row> rows;
      if (r > 0) rows.push_back(dense_row(neg, -(cuts[r - 1] - cap_slack(cuts[r - 1]))));
      if (r < cuts.size()) rows.push_back(dense_row(work_.c1, cuts[r] + cap_slack(cuts[r])));
      regions.push_back(std::move(rows));
    }
    return regions;
  }

 private:
  using Clock = std::chrono::steady_clock;

  static double elapsed_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  }

  double remaining_time() const {
    double s = std::chrono::duration<double>(deadline_ - Clock::now()).count();
    return std::max(s, 0.0);
  }

  bool out_of_time() const { return Clock::now() >= deadline_; }

  static double cap_slack(double v) { return 1e-7 * (1.0 + std::abs(v)); }

  std::vector<Row> combined_rows(const Node& s) const {
    std::vector<Row> rows(global_rows_.begin(), global_rows_.end());
    rows.insert(rows.end(), s.local_rows.begin(), s.local_rows.end());
    return rows;
  }

  bool integral(std::span<const double> x) const {
    for (int j = 0; j < work_.n_int; ++j) {
      if (!is_integral(x[j])) return false;
    }
    return true;
  }

  void score_fractional(Node& s, std::span<const double> x) {
    for (int j = 0; j < work_.n_int; ++j) {
      if (!is_integral(x[j])) s.scores[j] += 1;
    }
  }

  void score_pivot(Node& s, std::span<const double> xa, std::span<const double> xb) {
    for (int j = 0; j < work_.n_int; ++j) {
      if (std::abs(xa[j] - xb[j]) > kIntTol) s.scores[j] += 1;
    }
  }

  void score_milp_disagreement(Node& s, const std::vector<std::vector<double>>& xs) {
    if (xs.size() < 2) return;
    for (int j = 0; j < work_.n_int; ++j) {
      for (std::size_t a = 0; a < xs.size(); ++a) {
        bool differs = false;
        for (std::size_t b = a + 1; b < xs.size(); ++b) {
          if (std::abs(xs[a][j] - xs[b][j]) > kIntTol) differs = true;
        }
        if (differs) {
          s.scores[j] += 1;
          break;
        }
      }
    }
  }

  NodeStatus finish(Node& s, NodeStatus st, const std::string& rule) {
    s.status = st;
    stats_.rule_fired[rule] += 1;
    switch (st) {
      case NodeStatus::kFathomedInfeasible: ++stats_.fathomed_infeasible; break;
      case NodeStatus::kFathomedOptimality: ++stats_.fathomed_optimality; break;
      case NodeStatus::kFathomedDominance: ++stats_.fathomed_dominance; break;
      default: break;
    }
    emit_node_event(s, rule);
    return st;
  }

  void emit_node_event(const Node& s, const std::string& rule) {
    if (!cfg_.event_sink) return;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "{\"event\":\"node\",\"id\":%lld,\"status\":\"%s\",\"rule\":\"%s\",\"time\":%.3f}",
                  s.id, to_string(s.status), rule.c_str(), elapsed_since(start_));
    cfg_.event_sink(buf);
  }

  void emit_checkpoint_event(const Checkpoint& c) {
    if (!cfg_.event_sink) return;
    char buf[256];
    std::snprintf(
        buf, sizeof(buf),
        "{\"event\":\"checkpoint\",\"nodes\":%lld,\"G\":%.12g,\"Gbar\":%.12g,\"HV\":%.12g}",
        c.nodes, c.gap.G, c.gap.Gbar, c.gap.HV);
    cfg_.event_sink(buf);
  }

  void presolve_root() {
    if (cfg_.duality_fixing) duality_fix(work_);
    if (cfg_.singleton_fixing) singleton_fix(work_);
    if (cfg_.dominating_columns) {
      auto pairs = dominating_pairs(work_);
      if (cfg_.dominating_cuts) {
        // tied pairs appear in both directions; cutting both would pin the
        // variables together, so only the lower-index direction is used
        std::set<std::pair<int, int>> taken;
        for (const auto& [j, i] : pairs) {
          if (taken.count({i, j})) continue;
          if (work_.upper[j] - work_.lower[j] > kFeasTol &&
              work_.upper[i] - work_.lower[i] > kFeasTol) {
            global_rows_.push_back(dominating_disjunction_cut(work_, j, i));
            taken.insert({j, i});
          }
        }
      }
    }
  }

  void run_preprocessing() {
    if (cfg_.preprocess.method == PreprocessConfig::Method::kNone) return;
    int rho = cfg_.preprocess.rho >= 0 ? cfg_.preprocess.rho : rho_auto(work_);
    PreprocessHooks hooks;
    hooks.slice_front = [this](const std::vector<double>& x) { return cached_slice(x); };
    hooks.solve_milp = [this](std::pair<double, double> w, const std::vector<Row>& extra) {
      std::vector<Row> rows(global_rows_.begin(), global_rows_.end());
      rows.insert(rows.end(), extra.begin(), extra.end());
      ++milp_count_;
      stats_.milps = milp_count_;
      return milp_solve(work_, w, LocalBounds::of(work_), rows,
                        std::min(cfg_.preprocess.milp_time_limit, remaining_time()));
    };
    std::vector<Row> cuts;
    ParetoStore seeded =
        cfg_.preprocess.method == PreprocessConfig::Method::kEps
            ? preprocess_eps(work_, y1_I_, y2_I_, rho, hooks, &cuts)
            : preprocess_ws(work_, y1_I_, y2_I_, rho, hooks, &cuts);
    for (const Element& e : seeded.elements()) store_.insert(e);
    for (const Row& r : cuts) global_rows_.push_back(r);
  }

  // Runs one region's node loop (empty region rows = whole problem).
  // Returns true when the time limit interrupted the loop.
  bool run_region(const std::vector<Row>& region_rows, ParetoStore& store) {
    struct QEntry {
      double priority;
      long long seq;
      std::size_t idx;
    };
    struct Cmp {
      bool operator()(const QEntry& a, const QEntry& b) const {
        if (a.priority != b.priority) return a.priority > b.priority;
        return a.seq > b.seq;
      }
    };
    std::vector<std::unique_ptr<Node>> nodes;
    std::priority_queue<QEntry, std::vector<QEntry>, Cmp> queue;
    auto push_node = [&](Node&& n) {
      nodes.push_back(std::make_unique<Node>(std::move(n)));
      queue.push(QEntry{nodes.back()->priority, nodes.back()->id, nodes.size() - 1});
    };

    Node root = make_root();
    root.local_rows = region_rows;
    push_node(std::move(root));

    long long processed_since_gap = 0;
    bool timed_out = false;
    while (!queue.empty()) {
      if (out_of_time()) {
        timed_out = true;
        break;
      }
      QEntry top = queue.top();
      queue.pop();
      Node& s = *nodes[top.idx];
      if (s.status != NodeStatus::kOpen) continue;
      ++stats_.nodes;
      NodeStatus st = process_node(s, store);
      if (st == NodeStatus::kOpen) {
        OsFathomResult os = os_fathom(s, store);
        if (os.intervals.empty()) {
          finish(s, NodeStatus::kFathomedDominance, "os");
        } else {
          std::vector<Node> kids = branch(s, os, store);
          if (kids.empty()) {
            finish(s, NodeStatus::kFathomedInfeasible, "probe");
          } else {
            s.status = NodeStatus::kBranched;
            ++stats_.branched;
            emit_node_event(s, "branch");
            for (Node& k : kids) push_node(std::move(k));
          }
        }
      }
      if (cfg_.gap_mode != BbConfig::GapMode::kNone && ++processed_since_gap >= cfg_.gap_every) {
        processed_since_gap = 0;
        record_checkpoint(nodes, store);
      }
    }
    if (cfg_.gap_mode != BbConfig::GapMode::kNone) {
      record_checkpoint(nodes, store);
      stats_.final_gap = stats_.checkpoints.back().gap;
      stats_.final_gap_valid = true;
    }
    return timed_out;
  }

  void record_checkpoint(std::vector<std::unique_ptr<Node>>& nodes, const ParetoStore& store) {
    std::vector<Node*> open;
    for (auto& n : nodes) {
      if (n->status == NodeStatus::kOpen) open.push_back(n.get());
    }
    Checkpoint c;
    c.nodes = stats_.nodes;
    c.gap = gap_checkpoint(std::move(open), store);
    stats_.checkpoints.push_back(c);
    emit_checkpoint_event(c);
  }

  bool run_split_regions() {
    std::vector<std::vector<Row>> regions = split_os(store_, cfg_.theta);
    if (regions.size() <= 1) return run_region({}, store_);
    bool timed_out = false;
    std::vector<ParetoStore> region_stores;
    for (auto& rows : regions) {
      auto shrunk = shrink_region(rows);
      if (!shrunk) continue;  // region holds no integer point
      region_stores.push_back(store_);  // private copy seeded with global content
      timed_out = run_region(*shrunk, region_stores.back()) || timed_out;
    }
    std::vector<Element> all;
    for (const ParetoStore& rs : region_stores) {
      for (const Element& e : rs.elements()) all.push_back(e);
    }
    store_ = nd_filter(all);
    return timed_out;
  }

  Node child_of(const Node& s) {
    Node c;
    c.id = next_id_++;
    c.parent = s.id;
    c.depth = s.depth + 1;
    c.bounds = s.bounds;
    c.local_rows = s.local_rows;
    c.f1_cap = s.f1_cap;
    c.f2_cap = s.f2_cap;
    c.priority = s.lambda.first * s.ylam.f1 + s.lambda.second * s.ylam.f2;
    c.scores.assign(work_.n_int, 0);
    return c;
  }

  void apply_caps(Node& child, const OsFathomResult& os) {
    if (os.intervals.size() != 1) return;
    const auto& iv = os.intervals.front();
    if (os.right_trimmed) child.f1_cap = std::min(child.f1_cap, iv.f1_hi);
    if (os.left_trimmed) child.f2_cap = std::min(child.f2_cap, iv.f2_at_lo);
  }

  double branch_value(const Node& s, int var, const LocalBounds& base) const {
    for (const std::vector<double>* x : {&s.xlam, &s.x1, &s.x2}) {
      if (static_cast<int>(x->size()) > var && !is_integral((*x)[var]) &&
          (*x)[var] >= base.lower[var] - kIntTol && (*x)[var] <= base.upper[var] + kIntTol)
        return (*x)[var];
    }
    for (const std::vector<double>* x : {&s.xlam, &s.x1, &s.x2}) {
      if (static_cast<int>(x->size()) > var && (*x)[var] >= base.lower[var] - kIntTol &&
          (*x)[var] <= base.upper[var] + kIntTol)
        return (*x)[var];
    }
    return 0.5 * (base.lower[var] + base.upper[var]);
  }

  // Probes both sides of the branching variable in a child; false when the
  // child's whole range dies.  When probing narrows the range to a single
  // value, that last slice is still checked (without moving bounds past each
  // other) so an empty subproblem is recognized before it is enqueued.
  bool probe_child(int var, LocalBounds& child, ParetoStore& store,
                   std::span<const Row> rows) {
    for (ProbeSide side : {ProbeSide::kLower, ProbeSide::kUpper}) {
      for (int round = 0; round < cfg_.probe_rounds; ++round) {
        if (child.lower[var] > child.upper[var] + kIntTol) return false;
        if (!probe_variable(work_, store, var, side, child, rows)) break;
        stats_.lps += 1;
      }
    }
    if (child.lower[var] > child.upper[var] + kIntTol) return false;
    if (child.upper[var] - child.lower[var] < 1.0 - kIntTol) {
      // singleton range: discard the child when its slice is infeasible or
      // fully dominated
      LocalBounds probe = child;
      probe.upper[var] = probe.lower[var];
      try {
        bool all_dom = true;
        ParametricHooks hooks;
        hooks.on_piece = [&](const Element& e, bool) {
          if (!store.is_dominated(e)) {
            all_dom = false;
            return false;
          }
          return true;
        };
        ParametricResult pr = parametric_front(work_, probe, rows, &hooks);
        stats_.lps += 1;
        if (pr.status != LpStatus::kOptimal) return false;
        if (pr.curve.single_point())
          return !store.is_dominated(Element::point(pr.curve.breakpoints[0]));
        return !(all_dom && pr.completed);
      } catch (const NumericalFailure&) {
        return true;  // inconclusive: keep the child
      }
    }
    return true;
  }

  // Slice fronts are computed once per integer assignment and re-inserted
  // freely: duplicate inserts are no-ops, and every store (preprocessing's
  // local one, region-private ones) must see the full content.
  const std::vector<Element>& cached_slice(const std::vector<double>& x) {
    std::vector<long long> key(work_.n_int);
    for (int j = 0; j < work_.n_int; ++j) key[j] = std::llround(x[j]);
    auto it = slice_cache_.find(key);
    if (it != slice_cache_.end()) return it->second;
    return slice_cache_.emplace(std::move(key), slice_front(x)).first->second;
  }

  void insert_assignment(const std::vector<double>& x, ParetoStore& store) {
    if (x.empty()) return;
    for (const Element& e : cached_slice(x)) store.insert(e);
  }

  void ensure_curve(Node& s) {
    if (s.curve) return;
    try {
      ParametricResult pr = parametric_front(work_, s.bounds, combined_rows(s));
      stats_.lps += 1;
      if (pr.status == LpStatus::kOptimal) s.curve = std::move(pr.curve);
    } catch (const NumericalFailure&) {
      s.curve.reset();
    }
  }

  Instance base_;
  BbConfig cfg_;
  Instance work_;
  std::vector<Row> global_rows_;
  ParetoStore store_;
  ObjPoint y1_I_{}, y2_I_{};
  SolveStats stats_;
  int milp_count_ = 0;
  long long next_id_ = 0;
  std::map<std::vector<long long>, std::vector<Element>> slice_cache_;
  Clock::time_point start_;
  Clock::time_point deadline_;
};

inline BbResult bb_solve(const Instance& inst, const BbConfig& cfg = {}) {
  BbSolver solver(inst, cfg);
  return solver.run();
}

}  // namespace bobb

#endif  // BOBB_BB_HPP
