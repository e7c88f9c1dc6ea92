#include <functional>
#include <random>
#include <sstream>

#include "bobb/instance_io.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace bobb;

namespace {

const char* kToy = R"(# toy instance
NAME toy
VARS 1 1
OBJ1 1 0
OBJ2 0 1
BOUNDS
0 2
0 2
ROWS 1
1 1 <= 3
)";

}  // namespace

TEST_CASE("parse echoes a simple <= row") {
  Instance inst = parse_instance(kToy);
  CHECK(inst.name == "toy");
  CHECK(inst.n_int == 1);
  CHECK(inst.n_cont == 1);
  REQUIRE(inst.rows.size() == 1);
  CHECK(inst.rows[0].rhs == 3.0);
  REQUIRE(inst.rows[0].terms.size() == 2);
  CHECK(inst.rows[0].terms[0].second == 1.0);
}

TEST_CASE("fractional integer lower bound is ceiled") {
  std::string text = kToy;
  text.replace(text.find("0 2\n"), 4, "0.4 2\n");
  Instance inst = parse_instance(text);
  CHECK(inst.lower[0] == 1.0);
  CHECK(inst.upper[0] == 2.0);
}

TEST_CASE(">= rows are stored sign flipped") {
  std::string text = R"(NAME flip
VARS 1 0
OBJ1 1
OBJ2 -1
BOUNDS
0 5
ROWS 1
1 >= 1
)";
  Instance inst = parse_instance(text);
  REQUIRE(inst.rows.size() == 1);
  CHECK(inst.rows[0].terms[0].second == -1.0);
  CHECK(inst.rows[0].rhs == -1.0);
}

TEST_CASE("equality rows split into two <= rows") {
  std::string text = R"(NAME eq
VARS 1 1
OBJ1 1 0
OBJ2 0 1
BOUNDS
0 3
0 3
ROWS 1
1 2 = 4
)";
  Instance inst = parse_instance(text);
  REQUIRE(inst.rows.size() == 2);
  CHECK(inst.rows[0].rhs == 4.0);
  CHECK(inst.rows[1].rhs == -4.0);
  CHECK(inst.rows[1].terms[0].second == -1.0);
}

TEST_CASE("parse errors carry line numbers") {
  CHECK_THROWS_AS(parse_instance("VARS 1 0\n"), ParseError);
  try {
    parse_instance("NAME x\nVARS 1 0\nOBJ1 zzz\nOBJ2 1\nBOUNDS\n0 1\nROWS 0\n");
    FAIL("expected throw");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
  }
  // infinite bound
  CHECK_THROWS_AS(
      parse_instance("NAME x\nVARS 1 0\nOBJ1 1\nOBJ2 1\nBOUNDS\n0 inf\nROWS 0\n"), ParseError);
  // count mismatch: objective shorter than declared vars swallows BOUNDS keyword
  CHECK_THROWS(parse_instance("NAME x\nVARS 2 1\nOBJ1 1 1\nOBJ2 1 1 1\nBOUNDS\n0 1\n0 1\n0 1\nROWS 0\n"));
  // maximization rejected
  CHECK_THROWS_AS(
      parse_instance("NAME x\nVARS 1 0\nOBJ1 max 1\nOBJ2 1\nBOUNDS\n0 1\nROWS 0\n"), ParseError);
  // crossed bounds
  CHECK_THROWS_AS(
      parse_instance("NAME x\nVARS 0 1\nOBJ1 1\nOBJ2 1\nBOUNDS\n2 1\nROWS 0\n"), InstanceError);
}

TEST_CASE("write then parse is the identity") {
  std::mt19937 rng(11);
  for (int i = 0; i < 50; ++i) {
    Instance inst = testutil::random_instance(rng);
    inst.name = "roundtrip";
    Instance back = parse_instance(write_instance(inst));
    CHECK(back.name == inst.name);
    CHECK(back.n_int == inst.n_int);
    CHECK(back.n_cont == inst.n_cont);
    CHECK(back.c1 == inst.c1);
    CHECK(back.c2 == inst.c2);
    CHECK(back.lower == inst.lower);
    CHECK(back.upper == inst.upper);
    REQUIRE(back.rows.size() == inst.rows.size());
    for (std::size_t r = 0; r < inst.rows.size(); ++r) {
      CHECK(back.rows[r].rhs == inst.rows[r].rhs);
      CHECK(back.rows[r].terms == inst.rows[r].terms);
    }
  }
}

TEST_CASE("normalization preserves the feasible set") {
  // Random raw files with mixed senses and fractional integer bounds: every
  // sampled point with integral integer part is feasible for the raw
  // inequalities iff it satisfies the normalized rows.
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> coef(-3, 3), rhsd(-4, 8), sense(0, 2);
  std::uniform_real_distribution<double> fb(0.0, 0.6);
  for (int round = 0; round < 200; ++round) {
    int n_int = 1 + static_cast<int>(rng() % 2);
    int n_cont = static_cast<int>(rng() % 2);
    int n = n_int + n_cont;
    int m = 1 + static_cast<int>(rng() % 3);
    std::vector<std::vector<double>> A(m, std::vector<double>(n));
    std::vector<double> b(m);
    std::vector<int> s(m);
    for (int r = 0; r < m; ++r) {
      for (int j = 0; j < n; ++j) A[r][j] = coef(rng);
      b[r] = rhsd(rng);
      s[r] = sense(rng);
    }
    std::ostringstream text;
    text << "NAME norm\nVARS " << n_int << " " << n_cont << "\nOBJ1";
    for (int j = 0; j < n; ++j) text << " 1";
    text << "\nOBJ2";
    for (int j = 0; j < n; ++j) text << " -1";
    text << "\nBOUNDS\n";
    std::vector<double> lo(n), hi(n);
    for (int j = 0; j < n; ++j) {
      lo[j] = fb(rng);
      hi[j] = 2.0 + fb(rng);
      text << lo[j] << " " << hi[j] << "\n";
    }
    text << "ROWS " << m << "\n";
    const char* ops[] = {"<=", ">=", "="};
    for (int r = 0; r < m; ++r) {
      for (int j = 0; j < n; ++j) text << A[r][j] << " ";
      text << ops[s[r]] << " " << b[r] << "\n";
    }
    Instance inst = parse_instance(text.str());

    auto raw_feasible = [&](const std::vector<double>& x) {
      for (int j = 0; j < n; ++j) {
        if (x[j] < lo[j] - 1e-9 || x[j] > hi[j] + 1e-9) return false;
      }
      for (int j = 0; j < n_int; ++j) {
        if (!is_integral(x[j])) return false;
      }
      for (int r = 0; r < m; ++r) {
        double act = 0;
        for (int j = 0; j < n; ++j) act += A[r][j] * x[j];
        if (s[r] == 0 && act > b[r] + 1e-9) return false;
        if (s[r] == 1 && act < b[r] - 1e-9) return false;
        if (s[r] == 2 && std::abs(act - b[r]) > 1e-9) return false;
      }
      return true;
    };
    auto norm_feasible = [&](const std::vector<double>& x) {
      for (int j = 0; j < n; ++j) {
        if (x[j] < inst.lower[j] - 1e-9 || x[j] > inst.upper[j] + 1e-9) return false;
      }
      for (int j = 0; j < n_int; ++j) {
        if (!is_integral(x[j])) return false;
      }
      return inst.satisfies_rows(x, 1e-9);
    };

    // sample integral lattice plus quarter-step continuous values
    std::vector<double> x(n, 0.0);
    std::function<void(int)> walk = [&](int j) {
      if (j == n) {
        CHECK(raw_feasible(x) == norm_feasible(x));
        return;
      }
      if (j < n_int) {
        for (int v = 0; v <= 3; ++v) {
          x[j] = v;
          walk(j + 1);
        }
      } else {
        for (double v = 0.0; v <= 3.0; v += 0.5) {
          x[j] = v;
          walk(j + 1);
        }
      }
    };
    walk(0);
  }
}
