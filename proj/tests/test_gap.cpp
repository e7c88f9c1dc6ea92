#include <random>

#include "bobb/gap.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace bobb;

TEST_CASE("hausdorff gap on the quadrant toy") {
  ParetoStore db, store;
  db.insert(ObjPoint{0, 0});
  store.insert(ObjPoint{1, 1});
  auto [g, gbar] = hausdorff_gap(db, store, ObjPoint{0, 10}, ObjPoint{10, 0});
  CHECK(g == doctest::Approx(std::sqrt(2.0)));
  CHECK(gbar == doctest::Approx(100.0 * (10.0 - std::sqrt(2.0)) / 10.0));
}

TEST_CASE("identical regions have zero hausdorff distance") {
  ParetoStore db, store;
  Element seg = Element::segment(ObjPoint{0, 4}, ObjPoint{4, 0});
  db.insert(seg);
  store.insert(seg);
  auto [g, gbar] = hausdorff_gap(db, store, ObjPoint{0, 4}, ObjPoint{4, 0});
  CHECK(g == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(gbar == doctest::Approx(100.0));
}

TEST_CASE("gap takes the maximum over store elements") {
  ParetoStore db, store;
  db.insert(ObjPoint{0, 0});
  store.insert(ObjPoint{0.5, 9});  // far element drives the max
  store.insert(ObjPoint{9, 0.5});
  auto [g, gbar] = hausdorff_gap(db, store, ObjPoint{0, 10}, ObjPoint{10, 0});
  CHECK(g == doctest::Approx(std::hypot(9.0, 0.5)));
  (void)gbar;
}

TEST_CASE("empty inputs are rejected") {
  ParetoStore db, store;
  db.insert(ObjPoint{0, 0});
  CHECK_THROWS_AS(hausdorff_gap(db, store, ObjPoint{0, 1}, ObjPoint{1, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(hausdorff_gap(store, db, ObjPoint{0, 1}, ObjPoint{1, 0}),
                  std::invalid_argument);
}

TEST_CASE("hypervolume on the rectangle toy") {
  ParetoStore db, store;
  db.insert(ObjPoint{0, 0});
  store.insert(ObjPoint{1, 1});
  Rect os{0, 2, 0, 2};
  CHECK(hypervolume_gap(db, store, os) == doctest::Approx(75.0));
}

TEST_CASE("equal regions give zero hypervolume gap") {
  ParetoStore db, store;
  db.insert(Element::segment(ObjPoint{0, 2}, ObjPoint{2, 0}));
  store.insert(Element::segment(ObjPoint{0, 2}, ObjPoint{2, 0}));
  Rect os{0, 2, 0, 2};
  CHECK(hypervolume_gap(db, store, os) == doctest::Approx(0.0));
}

TEST_CASE("empty primal contribution gives 100 percent") {
  ParetoStore db, store;
  db.insert(ObjPoint{0, 0});
  store.insert(ObjPoint{5, 5});  // outside [0,2]^2
  Rect os{0, 2, 0, 2};
  CHECK(hypervolume_gap(db, store, os) == doctest::Approx(100.0));
}

TEST_CASE("zero dual area is an error") {
  ParetoStore db, store;
  db.insert(ObjPoint{5, 5});
  store.insert(ObjPoint{6, 6});
  Rect os{0, 2, 0, 2};
  CHECK_THROWS_AS(hypervolume_gap(db, store, os), std::invalid_argument);
}

TEST_CASE("region area matches monte carlo on random stores") {
  std::mt19937 rng(211);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int round = 0; round < 10; ++round) {
    ParetoStore store;
    for (int i = 0; i < 25; ++i) {
      double x = u(rng), y = u(rng);
      if (i % 2 == 0) {
        store.insert(ObjPoint{x, y});
      } else {
        double dx = 0.5 + 0.2 * u(rng), dy = 0.5 + 0.2 * u(rng);
        store.insert(Element::segment(ObjPoint{x, y + dy}, ObjPoint{x + dx, y}));
      }
    }
    Rect os{0, 12, 0, 12};
    double exact = region_area_in_rect(store.elements(), os);
    int hits = 0, n = 200000;
    std::uniform_real_distribution<double> sx(os.f1_lo, os.f1_hi), sy(os.f2_lo, os.f2_hi);
    for (int s = 0; s < n; ++s) {
      ObjPoint p{sx(rng), sy(rng)};
      if (testutil::naive_dominated(p, store.elements())) ++hits;
    }
    double mc = 144.0 * hits / n;
    CHECK(exact == doctest::Approx(mc).epsilon(0.02));
  }
}

TEST_CASE("gbar and hv stay within [0,100] on random inputs") {
  std::mt19937 rng(223);
  std::uniform_real_distribution<double> u(0.0, 8.0);
  for (int round = 0; round < 30; ++round) {
    ParetoStore db, store;
    db.insert(ObjPoint{u(rng) * 0.2, u(rng) * 0.2});
    for (int i = 0; i < 6; ++i) {
      double x = u(rng), y = u(rng);
      store.insert(ObjPoint{x + 0.5, y + 0.5});
    }
    auto [g, gbar] = hausdorff_gap(db, store, ObjPoint{0, 9}, ObjPoint{9, 0});
    CHECK(g >= 0.0);
    CHECK(gbar >= 0.0);
    CHECK(gbar <= 100.0);
    double hv = hypervolume_gap(db, store, Rect{0, 9, 0, 9});
    CHECK(hv >= 0.0);
    CHECK(hv <= 100.0);
  }
}
