// Acceptance suite: every criterion prints one PASS/FAIL line; the process
// exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bobb/bb.hpp"
#include "bobb/instance_io.hpp"
#include "bobb/lattice_oracle.hpp"
#include "bobb/preprocess.hpp"
#include "test_util.hpp"

using namespace bobb;
using namespace bobb::testutil;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Suite {
  std::vector<Instance> instances;
  std::vector<ParetoStore> oracles;
};

// The shared randomized toy suite: up to 6 integer variables with domain
// size at most 4, up to 4 continuous variables, up to 8 rows.
Suite build_suite(int count, unsigned seed) {
  Suite s;
  std::mt19937 rng(seed);
  while (static_cast<int>(s.instances.size()) < count) {
    Instance inst = random_instance(rng, 6, 4, 8, 3);
    ParetoStore oracle = lattice_oracle_front(inst);
    s.instances.push_back(std::move(inst));
    s.oracles.push_back(std::move(oracle));
  }
  return s;
}

// Runs the solver over the suite and compares fronts with the oracle:
// exact breakpoint match within 1e-6 plus 10^4-point sampling.
bool suite_matches(const Suite& s, const BbConfig& cfg, std::string& detail, int samples = 10000) {
  std::mt19937 sample_rng(4242);
  for (std::size_t i = 0; i < s.instances.size(); ++i) {
    BbResult res = bb_solve(s.instances[i], cfg);
    if (!res.complete) {
      detail = "instance " + std::to_string(i) + " did not finish";
      return false;
    }
    if (res.infeasible != s.oracles[i].empty()) {
      detail = "instance " + std::to_string(i) + " feasibility mismatch";
      return false;
    }
    if (res.infeasible) continue;
    if (!fronts_equal_exact(res.front.elements(), s.oracles[i].elements())) {
      detail = "instance " + std::to_string(i) + " breakpoint mismatch";
      return false;
    }
    if (count_region_mismatches(res.front.elements(), s.oracles[i].elements(), samples,
                                sample_rng) != 0) {
      detail = "instance " + std::to_string(i) + " region sampling mismatch";
      return false;
    }
  }
  return true;
}

// 60 variables, 60 rows, half integer: knapsack-style rows with conflicting
// objectives, shaped after the smaller literature family.
Instance structured_instance(unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> cost(1, 10);
  std::uniform_int_distribution<int> coef(1, 10);
  std::uniform_real_distribution<double> dens(0.0, 1.0);
  Instance inst;
  inst.name = "structured" + std::to_string(seed);
  inst.n_int = 30;
  inst.n_cont = 30;
  const int n = 60;
  for (int j = 0; j < n; ++j) {
    inst.lower.push_back(0.0);
    inst.upper.push_back(inst.n_int > j ? 1.0 : 5.0);
  }
  for (int j = 0; j < n; ++j) {
    double c = cost(rng);
    inst.c1.push_back(c);
    inst.c2.push_back(-(11.0 - c));  // anti-correlated: conflict on purpose
  }
  for (int r = 0; r < 60; ++r) {
    std::vector<double> a(n, 0.0);
    double maxact = 0.0;
    for (int j = 0; j < n; ++j) {
      if (dens(rng) < 0.2) {
        a[j] = coef(rng);
        maxact += a[j] * inst.upper[j];
      }
    }
    if (maxact == 0.0) {
      a[r % n] = 1.0;
      maxact = inst.upper[r % n];
    }
    inst.rows.push_back(dense_row(a, 0.5 * maxact));
  }
  return inst;
}

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail = "") {
  std::printf("%s criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

// ---- criterion 1 ----
void criterion1(const Suite& suite) {
  auto t0 = Clock::now();
  std::string detail;
  bool ok = suite_matches(suite, BbConfig{}, detail);
  double secs = seconds_since(t0);
  std::ostringstream extra;
  extra << "200 instances in " << static_cast<int>(secs) << "s";
  report(1, "oracle equivalence on 200 random instances", ok && secs < 300.0,
         ok ? extra.str() : detail);
}

// ---- criterion 2 ----
void criterion2(const Suite& suite) {
  std::string detail;
  bool ok = true;
  // each rule individually disabled
  for (const std::string rule : {"0", "1a", "2a", "1b", "2b", "3"}) {
    BbConfig cfg;
    if (rule == "0") cfg.rules.fr0 = false;
    if (rule == "1a") cfg.rules.fr1a = false;
    if (rule == "2a") cfg.rules.fr2a = false;
    if (rule == "1b") cfg.rules.fr1b = false;
    if (rule == "2b") cfg.rules.fr2b = false;
    if (rule == "3") cfg.rules.fr3 = false;
    if (!suite_matches(suite, cfg, detail, 2000)) {
      ok = false;
      detail = "rule " + rule + " disabled: " + detail;
      break;
    }
  }
  // each dominance rule as the only one enabled
  if (ok) {
    for (const std::string rule : {"1a", "2a", "1b", "2b", "3"}) {
      BbConfig cfg;
      cfg.rules = FathomToggles::all_off_except(rule);
      if (!suite_matches(suite, cfg, detail, 2000)) {
        ok = false;
        detail = "rule " + rule + " solo: " + detail;
        break;
      }
    }
  }
  report(2, "fathoming rules are individually redundant and individually sufficient", ok, detail);
}

// ---- criterion 3 ----
void criterion3(const Suite& suite) {
  std::string detail;
  bool ok = true;
  auto check = [&](const char* what, BbConfig cfg) {
    if (!ok) return;
    if (!suite_matches(suite, cfg, detail, 2000)) {
      ok = false;
      detail = std::string(what) + ": " + detail;
    }
  };
  BbConfig duality_off;
  duality_off.duality_fixing = false;
  check("duality fixing off", duality_off);
  BbConfig singleton_on;
  singleton_on.singleton_fixing = true;
  check("singleton fixing on", singleton_on);
  BbConfig cuts_on;
  cuts_on.dominating_cuts = true;
  check("dominating-column cuts on", cuts_on);
  BbConfig root_probe;
  root_probe.root_probing = true;
  check("root probing on", root_probe);
  BbConfig no_branch_probe;
  no_branch_probe.branch_probing = false;
  check("branch probing off", no_branch_probe);
  report(3, "presolve features preserve the Pareto set", ok, detail);
}

// ---- criterion 4 ----
void criterion4() {
  std::mt19937 rng(61);
  std::string detail;
  int checked = 0;
  bool ok = true;
  while (checked < 200 && ok) {
    Instance inst = random_instance(rng, 3, 3, 6, 3);
    ParametricResult pr;
    try {
      pr = parametric_front(inst, LocalBounds::of(inst));
    } catch (const NumericalFailure&) {
      continue;
    }
    if (pr.status != LpStatus::kOptimal) continue;
    ++checked;
    // oracle: 1000 interior weighted solves
    for (int g = 1; g <= 1000 && ok; ++g) {
      double lam = g / 1001.0;
      LpResult res = lp_solve(inst, {1.0 - lam, lam}, LocalBounds::of(inst));
      if (res.status != LpStatus::kOptimal) break;
      ObjPoint p = inst.image(res.x);
      bool found = false;
      for (const ObjPoint& b : pr.curve.breakpoints) {
        if (std::abs(b.f1 - p.f1) <= 1e-6 * (1 + std::abs(p.f1)) &&
            std::abs(b.f2 - p.f2) <= 1e-6 * (1 + std::abs(p.f2)))
          found = true;
      }
      for (std::size_t k = 0; k + 1 < pr.curve.breakpoints.size() && !found; ++k) {
        const ObjPoint& a = pr.curve.breakpoints[k];
        const ObjPoint& b = pr.curve.breakpoints[k + 1];
        if (p.f1 < a.f1 - 1e-6 || p.f1 > b.f1 + 1e-6) continue;
        double t = (p.f1 - a.f1) / (b.f1 - a.f1);
        double f2 = a.f2 + t * (b.f2 - a.f2);
        if (std::abs(f2 - p.f2) <= 1e-6 * (1 + std::abs(p.f2))) found = true;
      }
      if (!found) {
        ok = false;
        detail = "sweep point off the curve on instance " + std::to_string(checked);
      }
    }
    // every breakpoint supported at its mid-slope weight
    const auto& bp = pr.curve.breakpoints;
    for (std::size_t k = 0; k < bp.size() && ok; ++k) {
      double a_left =
          k == 0 ? 1e-7 : -(bp[k].f1 - bp[k - 1].f1) / (bp[k].f2 - bp[k - 1].f2);
      double a_right =
          k + 1 == bp.size() ? 1e7 : -(bp[k + 1].f1 - bp[k].f1) / (bp[k + 1].f2 - bp[k].f2);
      double alpha = 0.5 * (std::min(a_left, 1e7) + std::min(a_right, 1e7));
      LpResult res = lp_solve(inst, {1.0, alpha}, LocalBounds::of(inst));
      if (res.status != LpStatus::kOptimal ||
          std::abs(res.value - (bp[k].f1 + alpha * bp[k].f2)) >
              1e-6 * (1.0 + std::abs(res.value))) {
        ok = false;
        detail = "unsupported breakpoint on instance " + std::to_string(checked);
      }
    }
  }
  report(4, "parametric front equals the dense weight-sweep oracle", ok, detail);
}

// ---- criterion 5 ----
void criterion5() {
  bool ok = true;
  std::string detail;
  // worked example: HV = 75 on the [0,2]^2 toy
  {
    ParetoStore db, store;
    db.insert(ObjPoint{0, 0});
    store.insert(ObjPoint{1, 1});
    double hv = hypervolume_gap(db, store, Rect{0, 2, 0, 2});
    if (std::abs(hv - 75.0) > 1e-9) {
      ok = false;
      detail = "HV toy returned " + std::to_string(hv);
    }
  }
  // worked example: G = sqrt(2) on the quadrant toy
  {
    ParetoStore db, store;
    db.insert(ObjPoint{0, 0});
    store.insert(ObjPoint{1, 1});
    auto [g, gbar] = hausdorff_gap(db, store, ObjPoint{0, 10}, ObjPoint{10, 0});
    (void)gbar;
    if (std::abs(g - std::sqrt(2.0)) > 1e-9) {
      ok = false;
      detail = "G toy returned " + std::to_string(g);
    }
  }
  // HV checkpoint monotonicity on 20 random instances run to completion
  std::mt19937 rng(613);
  int done = 0;
  while (done < 20 && ok) {
    Instance inst = random_instance(rng, 6, 2, 6, 3);
    BbConfig cfg;
    cfg.gap_mode = BbConfig::GapMode::kBoth;
    cfg.gap_every = 2;
    cfg.preprocess.method = PreprocessConfig::Method::kNone;
    BbResult res = bb_solve(inst, cfg);
    if (res.infeasible || !res.complete) continue;
    ++done;
    for (std::size_t k = 1; k < res.stats.checkpoints.size(); ++k) {
      if (res.stats.checkpoints[k].gap.HV > res.stats.checkpoints[k - 1].gap.HV + 1e-7) {
        ok = false;
        detail = "HV increased at a checkpoint";
      }
    }
    if (!res.stats.checkpoints.empty() && res.stats.checkpoints.back().gap.HV > 1e-9) {
      ok = false;
      detail = "final HV nonzero on a finished tree";
    }
  }
  report(5, "gap arithmetic worked examples and HV monotonicity", ok, detail);
}

// ---- criterion 6 ----
void criterion6() {
  bool ok = true;
  std::string detail;
  Instance line = parse_instance(R"(NAME line
VARS 1 0
OBJ1 1
OBJ2 -1
BOUNDS
0 4
ROWS 0
)");
  struct Stub {
    const Instance* inst;
    std::vector<std::vector<double>> pts;
    MilpResult operator()(std::pair<double, double> w, const std::vector<Row>& extra) const {
      MilpResult res;
      double best = kInf;
      for (const auto& x : pts) {
        bool keep = true;
        for (const Row& r : extra) {
          if (r.activity(x) > r.rhs + 1e-9) keep = false;
        }
        if (!keep) continue;
        double v = w.first * inst->eval1(x) + w.second * inst->eval2(x);
        if (v < best - 1e-12) {
          best = v;
          res.incumbent = x;
        }
      }
      if (res.incumbent) {
        res.status = MilpStatus::kOptimal;
        res.incumbent_value = best;
        res.dual_bound = best;
        res.pool.push_back(*res.incumbent);
      }
      return res;
    }
  };
  Stub stub{&line, {{0}, {1}, {2}, {3}, {4}}};
  PreprocessHooks hooks;
  hooks.solve_milp = stub;
  hooks.slice_front = [&line](const std::vector<double>& x) {
    return std::vector<Element>{Element::point(line.image(x))};
  };
  std::vector<PreprocessHooks::EpsTrace> eps_trace;
  hooks.eps_trace = &eps_trace;
  preprocess_eps(line, ObjPoint{0, 0}, ObjPoint{4, -4}, 1, hooks);
  // divisor 60: the stub chord lands on (0,0), so the sweep starts at 4/60
  if (eps_trace.empty() || std::abs(eps_trace[0].eps - 4.0 / 60.0) > 1e-12) {
    ok = false;
    detail = "step initialization is not span/60";
  }
  // adaptive updates: fresh finds divide by (1+rho)=2, stale multiply by 4
  double h_before = 4.0 / 60.0;
  bool saw_fresh = false, saw_stale = false;
  for (std::size_t i = 0; i < eps_trace.size() && eps_trace[i].k == 1 && ok; ++i) {
    double expected = eps_trace[i].found_new ? h_before / 2.0 : 4.0 * h_before;
    expected = std::max(expected, 1e-3 * 4.0 / 60.0);
    if (std::abs(eps_trace[i].h - expected) > 1e-12) {
      ok = false;
      detail = "adaptive step update mismatch";
    }
    (eps_trace[i].found_new ? saw_fresh : saw_stale) = true;
    h_before = eps_trace[i].h;
  }
  if (ok && (!saw_fresh || !saw_stale)) {
    ok = false;
    detail = "trace did not exercise both adaptive branches";
  }
  // weighted-sum: midpoint bisection and the sigma/5 threshold
  std::vector<PreprocessHooks::WsTrace> ws_trace;
  PreprocessHooks whooks = hooks;
  whooks.eps_trace = nullptr;
  whooks.ws_trace = &ws_trace;
  Stub one{&line, {{2}}};
  whooks.solve_milp = one;
  preprocess_ws(line, ObjPoint{0, 0}, ObjPoint{4, -4}, 2, whooks);
  if (ws_trace.size() < 2 || ws_trace[0].lambdas != std::vector<double>{0.5} ||
      ws_trace[1].lambdas != std::vector<double>{0.25, 0.75}) {
    ok = false;
    detail = "weight bisection sequence mismatch";
  } else if (ws_trace[0].tau != 1 || ws_trace[0].t_after != 0 || ws_trace[1].tau != 0 ||
             ws_trace[1].t_after != 1 || ws_trace.back().t_after != 3) {
    ok = false;
    detail = "sigma/5 success accounting mismatch";
  }
  report(6, "preprocessing constants and adaptive updates", ok, detail);
}

// ---- criterion 7 ----
void criterion7() {
  bool ok = true;
  std::string detail;
  std::ostringstream note;
  for (unsigned seed : {1u, 2u, 3u}) {
    Instance inst = structured_instance(seed);
    auto t0 = Clock::now();
    BbConfig cfg;
    cfg.time_limit = 600.0;
    BbResult res = bb_solve(inst, cfg);
    double secs = seconds_since(t0);
    if (!res.complete || res.infeasible) {
      ok = false;
      detail = "structured instance " + std::to_string(seed) + " not solved in 600s";
      break;
    }
    long long dom = res.stats.fathomed_dominance;
    long long total = dom + res.stats.fathomed_infeasible + res.stats.fathomed_optimality;
    double frac = total > 0 ? static_cast<double>(dom) / total : 0.0;
    note << "seed " << seed << ": " << static_cast<int>(secs) << "s, " << res.stats.nodes
         << " nodes, " << static_cast<int>(100 * frac) << "% dominance; ";
    if (frac < 0.9) {
      ok = false;
      detail = "dominance fathoming fraction below 90% on seed " + std::to_string(seed);
      break;
    }
  }
  report(7, "structured 60x60 family solves with dominance-driven fathoming", ok,
         ok ? note.str() : detail);
}

// ---- criterion 8 ----
void criterion8() {
  std::mt19937 rng(617);
  bool ok = true;
  std::string detail;
  for (int i = 0; i < 5 && ok; ++i) {
    Instance inst = random_instance(rng, 5, 3, 6, 3);
    BbConfig cfg;
    cfg.gap_mode = BbConfig::GapMode::kBoth;
    BbResult a = bb_solve(inst, cfg);
    BbResult b = bb_solve(inst, cfg);
    if (write_front(a.front) != write_front(b.front)) {
      ok = false;
      detail = "front bytes differ";
    }
    if (a.stats.nodes != b.stats.nodes || a.stats.lps != b.stats.lps ||
        a.stats.milps != b.stats.milps ||
        a.stats.checkpoints.size() != b.stats.checkpoints.size()) {
      ok = false;
      detail = "stats differ between identical runs";
    }
  }
  report(8, "identical config and seed reproduce byte-identical outputs", ok, detail);
}

}  // namespace

int main() {
  std::printf("building the shared 200-instance suite...\n");
  auto t0 = Clock::now();
  Suite suite = build_suite(200, 20240817);
  std::printf("suite ready in %.1fs\n", seconds_since(t0));

  criterion1(suite);
  criterion2(suite);
  criterion3(suite);
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();

  if (failures == 0) {
    std::printf("ALL CRITERIA PASS\n");
  } else {
    std::printf("%d CRITERIA FAILED\n", failures);
  }
  return failures == 0 ? 0 : 1;
}
