// bobb: exact Pareto-set solver for biobjective mixed-integer linear
// programs, plus instance generation and a brute-force oracle checker.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "bobb/bb.hpp"
#include "bobb/instance_io.hpp"
#include "bobb/lattice_oracle.hpp"
#include "bobb/objective_rules.hpp"
#include "json.hpp"

namespace {

constexpr int kExitComplete = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitInputError = 2;
constexpr int kExitTimeLimit = 3;
constexpr int kExitRuleOracle = 4;
constexpr int kExitLatticeTooLarge = 5;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

struct SolveArgs {
  std::string instance_path;
  double time_limit = 1e9;
  double milp_time_limit = 60.0;
  std::string preprocess = "eps";
  std::string rho = "auto";
  bool split_gaps = false;
  double theta = 0.1;
  std::string gap = "";
  bool root_probing = false;
  bool no_branch_probing = false;
  unsigned seed = 0;
  int workers = 1;
  std::string out_front = "front.txt";
  std::string out_stats = "";
  std::string out_events = "";
};

int run_solve(const SolveArgs& a) {
  bobb::Instance inst;
  try {
    inst = bobb::parse_instance(read_file(a.instance_path));
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  }

  bobb::BbConfig cfg;
  cfg.time_limit = a.time_limit;
  cfg.milp_time_limit = a.milp_time_limit;
  cfg.preprocess.milp_time_limit = a.milp_time_limit;
  if (a.preprocess == "eps") {
    cfg.preprocess.method = bobb::PreprocessConfig::Method::kEps;
  } else if (a.preprocess == "ws") {
    cfg.preprocess.method = bobb::PreprocessConfig::Method::kWs;
  } else if (a.preprocess == "none") {
    cfg.preprocess.method = bobb::PreprocessConfig::Method::kNone;
  } else {
    std::cerr << "input error: unknown preprocess method '" << a.preprocess << "'\n";
    return kExitInputError;
  }
  if (a.rho == "auto") {
    cfg.preprocess.rho = -1;
  } else {
    try {
      cfg.preprocess.rho = std::stoi(a.rho);
    } catch (const std::exception&) {
      std::cerr << "input error: --rho expects 'auto' or an integer\n";
      return kExitInputError;
    }
    if (cfg.preprocess.rho < 0) {
      std::cerr << "input error: rho must be nonnegative\n";
      return kExitInputError;
    }
  }
  cfg.split_gaps = a.split_gaps;
  cfg.theta = a.theta;
  cfg.root_probing = a.root_probing;
  cfg.branch_probing = !a.no_branch_probing;
  cfg.workers = a.workers;
  if (a.gap == "hausdorff") cfg.gap_mode = bobb::BbConfig::GapMode::kHausdorff;
  if (a.gap == "hv") cfg.gap_mode = bobb::BbConfig::GapMode::kHv;
  if (a.gap == "both") cfg.gap_mode = bobb::BbConfig::GapMode::kBoth;

  std::ofstream events;
  if (!a.out_events.empty()) {
    events.open(a.out_events);
    cfg.event_sink = [&events](const std::string& line) { events << line << "\n"; };
  }

  bobb::BbResult res = bobb::bb_solve(inst, cfg);

  if (res.infeasible) {
    std::cerr << "instance is infeasible\n";
    return kExitInfeasible;
  }
  write_file(a.out_front, bobb::write_front(res.front));

  if (!a.out_stats.empty()) {
    nlohmann::ordered_json j;
    j["instance"] = inst.name;
    j["complete"] = res.complete;
    j["elements"] = res.front.size();
    j["nodes"] = res.stats.nodes;
    j["lps"] = res.stats.lps;
    j["milps"] = res.stats.milps;
    j["wall_s"] = res.stats.wall_s;
    j["fathomed"] = {{"infeasible", res.stats.fathomed_infeasible},
                     {"optimality", res.stats.fathomed_optimality},
                     {"dominance", res.stats.fathomed_dominance}};
    nlohmann::ordered_json rules = nlohmann::ordered_json::object();
    for (const auto& [rule, count] : res.stats.rule_fired) rules[rule] = count;
    j["rule_fired"] = rules;
    if (res.stats.final_gap_valid) {
      j["gap"] = {{"G", res.stats.final_gap.G},
                  {"Gbar", res.stats.final_gap.Gbar},
                  {"HV", res.stats.final_gap.HV}};
    }
    nlohmann::ordered_json cps = nlohmann::ordered_json::array();
    for (const auto& c : res.stats.checkpoints) {
      cps.push_back({{"nodes", c.nodes}, {"G", c.gap.G}, {"Gbar", c.gap.Gbar}, {"HV", c.gap.HV}});
    }
    j["checkpoints"] = cps;
    write_file(a.out_stats, j.dump(2) + "\n");
  }
  return res.complete ? kExitComplete : kExitTimeLimit;
}

int run_generate(const std::string& path, const std::string& rule, unsigned seed,
                 double milp_limit, const std::string& out_path) {
  bobb::Instance inst;
  bobb::ObjRule r;
  try {
    inst = bobb::parse_instance(read_file(path));
    r = bobb::obj_rule_from_string(rule);
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  }
  try {
    inst.c2 = bobb::generate_objective(inst, r, seed, milp_limit);
  } catch (const bobb::ObjRuleError& e) {
    std::cerr << "generation failed: " << e.what() << "\n";
    return kExitRuleOracle;
  }
  inst.name += "_rule_" + rule;
  write_file(out_path.empty() ? path + ".rule_" + rule : out_path, bobb::write_instance(inst));
  return kExitComplete;
}

int run_oracle(const std::string& path, long long cap, const std::string& out_path) {
  bobb::Instance inst;
  try {
    inst = bobb::parse_instance(read_file(path));
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  }
  try {
    bobb::ParetoStore front = bobb::lattice_oracle_front(inst, cap);
    if (front.empty()) {
      std::cerr << "instance is infeasible\n";
      return kExitInfeasible;
    }
    write_file(out_path, bobb::write_front(front));
  } catch (const bobb::LatticeTooLarge& e) {
    std::cerr << "oracle refused: " << e.what() << "\n";
    return kExitLatticeTooLarge;
  }
  return kExitComplete;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bobb: exact biobjective mixed-integer programming solver"};
  app.require_subcommand(1);

  SolveArgs sa;
  CLI::App* solve = app.add_subcommand("solve", "compute the complete Pareto set");
  solve->add_option("instance", sa.instance_path, "BOMILP-v1 instance file")->required();
  solve->add_option("--time-limit", sa.time_limit, "overall limit in seconds");
  solve->add_option("--milp-time-limit", sa.milp_time_limit, "per-MILP limit in seconds");
  solve->add_option("--preprocess", sa.preprocess, "eps|ws|none (default eps)");
  solve->add_option("--rho", sa.rho, "preprocessing intensity: auto or an integer");
  solve->add_flag("--split-gaps", sa.split_gaps, "split the objective space at large gaps");
  solve->add_option("--theta", sa.theta, "gap fraction triggering a split")
      ->check(CLI::Range(1e-9, 0.999999));
  solve->add_option("--gap", sa.gap, "track gaps: hausdorff|hv|both");
  solve->add_flag("--root-probing", sa.root_probing, "probe all integers after preprocessing");
  solve->add_flag("--no-branch-probing", sa.no_branch_probing, "disable probing at branching");
  solve->add_option("--seed", sa.seed, "random seed (recorded for reproducibility)");
  solve->add_option("--workers", sa.workers, "worker pool size for split regions");
  solve->add_option("--out-front", sa.out_front, "front output path");
  solve->add_option("--out-stats", sa.out_stats, "stats JSON output path");
  solve->add_option("--out-events", sa.out_events, "JSON-lines event log path");

  std::string gen_path, gen_rule = "o", gen_out;
  unsigned gen_seed = 0;
  double gen_milp_limit = 60.0;
  CLI::App* gen = app.add_subcommand("generate", "derive a second objective (rules o|a|b|c|d|e)");
  gen->add_option("instance", gen_path, "BOMILP-v1 instance file")->required();
  gen->add_option("--rule", gen_rule, "generation rule")->required();
  gen->add_option("--seed", gen_seed, "seed for rule o");
  gen->add_option("--milp-time-limit", gen_milp_limit, "per-MILP limit for rules a/e");
  gen->add_option("--out", gen_out, "output path (default <instance>.rule_<r>)");

  std::string ora_path, ora_out = "oracle_front.txt";
  long long ora_cap = 100000;
  CLI::App* ora = app.add_subcommand("oracle", "brute-force front by slice enumeration");
  ora->add_option("instance", ora_path, "BOMILP-v1 instance file")->required();
  ora->add_option("--cap", ora_cap, "largest admissible integer lattice");
  ora->add_option("--out-front", ora_out, "front output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run_solve(sa);
    if (gen->parsed()) return run_generate(gen_path, gen_rule, gen_seed, gen_milp_limit, gen_out);
    if (ora->parsed()) return run_oracle(ora_path, ora_cap, ora_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
