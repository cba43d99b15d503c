#include <random>

#include "doctest.h"
#include "fairstream/oracle.hpp"
#include "fairstream/semi_solver.hpp"
#include "test_support.hpp"

using namespace fairstream;
using fairstream::testing::P;
using fairstream::testing::stream1d;
using fairstream::testing::xs;

TEST_CASE("process_semi: over-cap branch with replacement") {
  SemiInstance inst(0.4, FairnessSpec({1, 2}));
  CHECK(inst.lambda() == 0.8);
  inst.process(P(0, 0, 1));
  inst.process(P(1, 100, 1));
  REQUIRE(inst.gamma1().size() == 2);

  inst.process(P(2, 0.4, 2));
  CHECK(inst.gamma2().empty());
  REQUIRE(inst.replacements().size() == 1);
  CHECK(inst.replacements()[0].replaced == 0);
  CHECK(inst.replacements()[0].replacement.id == 2);

  inst.process(P(3, 50, 2));
  REQUIRE(inst.gamma2().size() == 1);
  CHECK(inst.gamma2().members()[0].id == 3);
  CHECK(inst.replacements().size() == 1);
}

TEST_CASE("process_semi: within-cap branch uses the 3λ/2 rule") {
  SemiInstance inst(0.5, FairnessSpec({1, 1}));
  inst.process(P(0, 0, 1));
  inst.process(P(1, 0.5, 2));
  CHECK(inst.gamma2().empty());
  inst.process(P(2, 10, 2));
  CHECK(inst.gamma2().size() == 1);
  CHECK(inst.replacements().empty());
}

TEST_CASE("process_semi: group order is enforced") {
  SemiInstance inst(1.0, FairnessSpec({1, 1}));
  inst.process(P(0, 0, 1));
  inst.process(P(1, 5, 2));
  CHECK_THROWS_AS(inst.process(P(2, 9, 1)), StreamOrderError);
}

TEST_CASE("finalize_semi: worked example with a replacement") {
  const auto s = stream1d({{0, 1}, {100, 1}, {0.4, 2}, {50, 2}});
  const FairnessSpec spec({1, 2});
  CHECK(brute_force_opt(s, spec).r_opt == 0.4);

  SemiInstance inst(0.4, spec);
  for (const auto& p : s) inst.process(p);
  const auto out = inst.finalize();
  REQUIRE(out.is_feasible());
  CHECK(xs(out.centers()) == std::vector<double>{0.4, 50, 100});
  CHECK(clustering_cost(s, out.centers()) == 0.4);
}

TEST_CASE("finalize_semi: within-cap example") {
  const auto s = stream1d({{0, 1}, {0.5, 2}, {10, 2}});
  SemiInstance inst(0.5, FairnessSpec({1, 1}));
  for (const auto& p : s) inst.process(p);
  const auto out = inst.finalize();
  REQUIRE(out.is_feasible());
  CHECK(xs(out.centers()) == std::vector<double>{0, 10});
  CHECK(clustering_cost(s, out.centers()) == 0.5);
}

TEST_CASE("finalize_semi: missing replacements are infeasible") {
  SemiInstance inst(0.5, FairnessSpec({1, 1}));
  for (const auto& p : stream1d({{0, 1}, {10, 1}, {50, 2}})) inst.process(p);
  const auto out = inst.finalize();
  REQUIRE_FALSE(out.is_feasible());
  CHECK(out.reason() == InfeasibleReason::fairness_violated);
}

TEST_CASE("semi properties at r̂ = r_opt on group-ordered random instances") {
  std::mt19937_64 rng(99);
  int replaced_runs = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto inst = testing::random_instance(rng, 4 + trial % 9, 1 + trial % 2, 4);
    const auto stream = testing::sorted_by_group(inst.points);
    const FairnessSpec spec(inst.caps);
    const double r_opt = brute_force_opt(stream, spec).r_opt;
    SemiInstance solver(r_opt, spec);
    for (const auto& p : stream) solver.process(p);

    CHECK(solver.gamma1().size() + solver.gamma2().size() <= static_cast<std::size_t>(spec.k()));
    CHECK(static_cast<int>(solver.gamma2().size()) <= spec.cap(2));
    CHECK(solver.replacements().size() <= solver.gamma1().size());
    for (const auto& r : solver.replacements()) {
      const auto& members = solver.gamma1().members();
      const auto it = std::find_if(members.begin(), members.end(), [&](const Point& m) { return m.id == r.replaced; });
      REQUIRE(it != members.end());
      CHECK(distance(*it, r.replacement) <= r_opt);
    }
    if (!solver.replacements().empty()) ++replaced_runs;

    const auto out = solver.finalize();
    REQUIRE(out.is_feasible());
    CHECK(out.centers().count(1) <= spec.cap(1));
    CHECK(out.centers().count(2) <= spec.cap(2));
    CHECK(clustering_cost(stream, out.centers()) <= 3.0 * r_opt + 1e-9);
  }
  CHECK(replaced_runs > 0);
}
