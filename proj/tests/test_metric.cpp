#include <random>

#include "doctest.h"
#include "fairstream/metric.hpp"
#include "test_support.hpp"

using namespace fairstream;
using fairstream::testing::P;

TEST_CASE("distance: identity, 1-D and 3-4-5") {
  CHECK(distance(P(0, 0, 1), P(1, 0, 1)) == 0.0);
  CHECK(distance(P(0, 0, 1), P(1, 3, 1)) == 3.0);
  CHECK(distance(Point{0, {0, 0}, 1}, Point{1, {3, 4}, 1}) == 5.0);
}

TEST_CASE("distance: dimension mismatch is an input error") {
  CHECK_THROWS_AS(distance(Point{0, {0, 0}, 1}, Point{1, {1}, 1}), InputError);
}

TEST_CASE("distance: custom callback metric") {
  auto manhattan = DistanceMetric::custom([](std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s;
  });
  CHECK(manhattan.kind() == DistanceMetric::Kind::custom);
  CHECK(distance(Point{0, {0, 0}, 1}, Point{1, {3, 4}, 1}, manhattan) == 7.0);
  CHECK_THROWS_AS(DistanceMetric::custom(nullptr), InputError);
}

TEST_CASE("distance: triangle inequality and symmetry on random triples") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int t = 0; t < 500; ++t) {
    Point a{0, {u(rng), u(rng), u(rng)}, 1}, b{1, {u(rng), u(rng), u(rng)}, 1}, c{2, {u(rng), u(rng), u(rng)}, 1};
    CHECK(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-12);
    CHECK(distance(a, b) == distance(b, a));
    CHECK(distance(a, b) >= 0.0);
  }
}

TEST_CASE("clustering_cost examples") {
  const auto s = testing::stream1d({{0, 1}, {3, 1}});
  CenterSet c;
  c.add(s[0]);
  CHECK(clustering_cost(s, c) == 3.0);

  // Exhaustive min-max over the five points, computed independently.
  const auto s5 = testing::stream1d({{0, 1}, {1, 1}, {10, 1}, {11, 1}, {20, 1}});
  CenterSet c3;
  c3.add(s5[1]);
  c3.add(s5[2]);
  c3.add(s5[4]);
  CHECK(testing::naive_cost(s5, c3.centers()) == 1.0);
  CHECK(clustering_cost(s5, c3) == 1.0);
  CHECK(serial::clustering_cost(s5, c3) == 1.0);

  CenterSet all;
  for (const auto& p : s5) all.add(p);
  CHECK(clustering_cost(s5, all) == 0.0);
}

TEST_CASE("clustering_cost rejects empty inputs") {
  const auto s = testing::stream1d({{0, 1}});
  CHECK_THROWS_AS(clustering_cost(s, CenterSet{}), InputError);
  CenterSet c;
  c.add(s[0]);
  CHECK_THROWS_AS(clustering_cost(std::span<const Point>{}, c), InputError);
}

TEST_CASE("clustering_cost is zero iff every point coincides with a center") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> u(0, 4);
  for (int t = 0; t < 200; ++t) {
    std::vector<Point> s;
    for (int i = 0; i < 6; ++i) s.push_back(P(i, u(rng), 1));
    CenterSet c;
    for (int i = 0; i < 3; ++i) c.add(s[i]);
    bool covered = true;
    for (const auto& p : s) {
      bool hit = false;
      for (const auto& q : c.centers()) hit = hit || p.coords == q.coords;
      covered = covered && hit;
    }
    CHECK((clustering_cost(s, c) == 0.0) == covered);
  }
}

TEST_CASE("FairnessSpec invariants") {
  FairnessSpec spec({1, 2});
  CHECK(spec.k() == 3);
  CHECK(spec.groups() == 2);
  CHECK_THROWS_AS(FairnessSpec({0, 0}), InputError);
  CHECK_THROWS_AS(FairnessSpec({-1, 2}), InputError);
  CHECK_THROWS_AS(FairnessSpec(std::vector<int>{}), InputError);
}

TEST_CASE("CenterSet tallies groups and rejects duplicate ids") {
  CenterSet c;
  c.add(P(0, 0, 1));
  c.add(P(1, 1, 2));
  c.add(P(2, 2, 2));
  CHECK(c.per_group_counts(2) == std::vector<int>{1, 2});
  CHECK_THROWS_AS(c.add(P(1, 5, 1)), InputError);
}

TEST_CASE("check_fairness") {
  const FairnessSpec spec({1, 2});
  CenterSet at_cap;
  at_cap.add(P(0, 0, 1));
  at_cap.add(P(1, 1, 2));
  at_cap.add(P(2, 2, 2));
  CHECK(check_fairness(at_cap, spec).ok());

  CenterSet over;
  over.add(P(0, 0, 1));
  over.add(P(1, 1, 1));
  const auto report = check_fairness(over, spec);
  REQUIRE(report.groups.size() == 1);
  CHECK(report.groups[0].group == 1);
  CHECK(report.groups[0].count == 2);
  CHECK_FALSE(report.budget_exceeded);

  CenterSet one_each;
  one_each.add(P(0, 0, 1));
  one_each.add(P(1, 1, 2));
  CHECK(check_fairness(one_each, FairnessSpec({1, 1})).ok());

  CenterSet stray;
  stray.add(P(0, 0, 3));
  CHECK(check_fairness(stray, spec).out_of_range_group);
}

TEST_CASE("check_fairness is monotone under center removal") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> g(1, 2);
  const FairnessSpec spec({2, 1});
  for (int t = 0; t < 200; ++t) {
    std::vector<Point> pts;
    for (int i = 0; i < 5; ++i) pts.push_back(P(i, i, g(rng)));
    CenterSet full;
    for (const auto& p : pts) full.add(p);
    const auto before = check_fairness(full, spec);
    for (std::size_t drop = 0; drop < pts.size(); ++drop) {
      CenterSet less;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i != drop) less.add(pts[i]);
      }
      const auto after = check_fairness(less, spec);
      for (const auto& v : after.groups) {
        bool existed = false;
        for (const auto& w : before.groups) existed = existed || w.group == v.group;
        CHECK(existed);
      }
      CHECK((!after.budget_exceeded || before.budget_exceeded));
    }
  }
}
