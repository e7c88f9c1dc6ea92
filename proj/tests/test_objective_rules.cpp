#include <random>

#include "bobb/instance_io.hpp"
#include "bobb/objective_rules.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace bobb;

namespace {

Instance four_var() {
  return parse_instance(R"(NAME four
VARS 2 2
OBJ1 2 -4 1 3
OBJ2 0 0 0 1
BOUNDS
0 2
0 2
0 2
0 2
ROWS 1
1 1 1 1 <= 5
)");
}

}  // namespace

TEST_CASE("rule c sums the continuous variables") {
  auto c2 = generate_objective(four_var(), ObjRule::kC, 1);
  CHECK(c2 == std::vector<double>{0, 0, 1, 1});
}

TEST_CASE("rule d sums the integers plus the first continuous") {
  auto c2 = generate_objective(four_var(), ObjRule::kD, 1);
  CHECK(c2 == std::vector<double>{1, 1, 1, 0});
}

TEST_CASE("rule b takes reciprocals and maps zeros to zero") {
  Instance inst = four_var();
  inst.c1 = {2, -4, 0, 1};
  auto c2 = generate_objective(inst, ObjRule::kB, 1);
  CHECK(c2[0] == doctest::Approx(0.5));
  CHECK(c2[1] == doctest::Approx(-0.25));
  CHECK(c2[2] == 0.0);
  CHECK(c2[3] == doctest::Approx(1.0));
}

TEST_CASE("rule o stays within the coefficient envelope for every seed") {
  Instance inst = four_var();
  inst.c1 = {2, -4, 1, 3};
  for (uint64_t seed = 0; seed < 200; ++seed) {
    auto c2 = generate_objective(inst, ObjRule::kO, seed);
    for (int j = 0; j < inst.num_vars(); ++j) {
      CHECK(c2[j] >= -std::abs(inst.c1[j]) - 1e-12);
      CHECK(c2[j] <= std::abs(inst.c1[j]) + 1e-12);
    }
  }
}

TEST_CASE("rule o is deterministic per seed") {
  Instance inst = four_var();
  auto a = generate_objective(inst, ObjRule::kO, 7);
  auto b = generate_objective(inst, ObjRule::kO, 7);
  auto c = generate_objective(inst, ObjRule::kO, 8);
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("rule a copies where the sign condition fails") {
  // row: x0 + x1 >= 2; optimum x = (0, 2): x0 nonbasic at lower with c1 > 0
  // (copy), x1 nonbasic at upper with c1 < 0 (copy).
  Instance inst = parse_instance(R"(NAME rulea
VARS 0 2
OBJ1 1 -1
OBJ2 0 1
BOUNDS
0 2
0 2
ROWS 1
-1 -1 <= -2
)");
  auto c2 = generate_objective(inst, ObjRule::kA, 1);
  CHECK(c2[0] == doctest::Approx(1.0));
  CHECK(c2[1] == doctest::Approx(-1.0));
}

TEST_CASE("rule a flip conditions") {
  // flip when c1 > 0 away from the lower bound, or c1 < 0 away from the upper
  CHECK(obj_rule_detail::flip_coeff(2.0, VarState::kAtUpper) == -2.0);
  CHECK(obj_rule_detail::flip_coeff(2.0, VarState::kAtLower) == 2.0);
  CHECK(obj_rule_detail::flip_coeff(-3.0, VarState::kAtLower) == 3.0);
  CHECK(obj_rule_detail::flip_coeff(-3.0, VarState::kAtUpper) == -3.0);
  CHECK(obj_rule_detail::flip_coeff(0.0, VarState::kAtLower) == 0.0);
}

TEST_CASE("rule a output only copies or negates") {
  std::mt19937 rng(503);
  for (int i = 0; i < 20; ++i) {
    Instance inst = testutil::random_instance(rng, 3, 3, 5, 3);
    std::vector<double> c2;
    try {
      c2 = generate_objective(inst, ObjRule::kA, 1);
    } catch (const ObjRuleError&) {
      continue;
    }
    for (int j = 0; j < inst.num_vars(); ++j) {
      CHECK((c2[j] == inst.c1[j] || c2[j] == -inst.c1[j]));
    }
  }
}

TEST_CASE("rule e flips only integers agreeing between LP and MILP") {
  std::mt19937 rng(501);
  int checked = 0;
  for (int i = 0; i < 30; ++i) {
    Instance inst = testutil::random_instance(rng, 4, 2, 5, 3);
    std::vector<double> c2;
    try {
      c2 = generate_objective(inst, ObjRule::kE, 1);
    } catch (const ObjRuleError&) {
      continue;
    }
    ++checked;
    // continuous coefficients are never flipped by rule e
    for (int j = inst.n_int; j < inst.num_vars(); ++j) CHECK(c2[j] == inst.c1[j]);
    // flipped entries only ever negate the original
    for (int j = 0; j < inst.num_vars(); ++j) {
      CHECK((c2[j] == inst.c1[j] || c2[j] == -inst.c1[j]));
    }
  }
  CHECK(checked >= 10);
}

TEST_CASE("an all-zero second objective is rejected") {
  Instance inst = four_var();
  inst.c1 = {0, 0, 0, 0};
  CHECK_THROWS_AS(generate_objective(inst, ObjRule::kO, 1), ObjRuleError);
  CHECK_THROWS_AS(generate_objective(inst, ObjRule::kB, 1), ObjRuleError);
}
