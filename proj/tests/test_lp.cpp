#include "minionlab/lp.hpp"

#include "minionlab/relaxations.hpp"
#include "minionlab/structures.hpp"

#include <doctest.h>

using namespace minionlab;

TEST_CASE("interval feasibility") {
    LinearSystem sys;
    int x = sys.add_var(false);
    sys.add({{x, 1}}, Rel::ge, 0);
    sys.add({{x, 1}}, Rel::le, 1);
    LpResult res = lp_feasible(sys);
    REQUIRE(res.feasible);
    CHECK(res.point[0] >= 0);
    CHECK(res.point[0] <= 1);
}

TEST_CASE("empty interval") {
    LinearSystem sys;
    int x = sys.add_var(false);
    sys.add({{x, 1}}, Rel::ge, 1);
    sys.add({{x, 1}}, Rel::le, 0);
    CHECK(!lp_feasible(sys).feasible);
}

TEST_CASE("free variables reach negative values") {
    LinearSystem sys;
    int x = sys.add_var(false);
    sys.add({{x, 1}}, Rel::le, -5);
    sys.add({{x, 1}}, Rel::ge, -5);
    LpResult res = lp_feasible(sys);
    REQUIRE(res.feasible);
    CHECK(res.point[0] == Rational(-5));
}

TEST_CASE("solutions are exact rationals") {
    LinearSystem sys;
    int x = sys.add_var(true);
    sys.add({{x, 3}}, Rel::eq, 1);
    LpResult res = lp_feasible(sys);
    REQUIRE(res.feasible);
    CHECK(res.point[0] == Rational(1, 3));
}

TEST_CASE("nonnegativity flags are enforced") {
    LinearSystem sys;
    int x = sys.add_var(true);
    sys.add({{x, 1}}, Rel::le, -1);
    CHECK(!lp_feasible(sys).feasible);
}

TEST_CASE("systems with several variables") {
    // x + y = 1, x - y = 1/2 has the unique solution (3/4, 1/4)
    LinearSystem sys;
    int x = sys.add_var(true);
    int y = sys.add_var(true);
    sys.add({{x, 1}, {y, 1}}, Rel::eq, 1);
    sys.add({{x, 1}, {y, -1}}, Rel::eq, Rational(1, 2));
    LpResult res = lp_feasible(sys);
    REQUIRE(res.feasible);
    CHECK(res.point[0] == Rational(3, 4));
    CHECK(res.point[1] == Rational(1, 4));
}

TEST_CASE("degenerate and redundant rows") {
    LinearSystem sys;
    int x = sys.add_var(true);
    sys.add({{x, 1}}, Rel::eq, 1);
    sys.add({{x, 2}}, Rel::eq, 2);  // redundant
    sys.add({}, Rel::eq, 0);        // trivial
    LpResult res = lp_feasible(sys);
    REQUIRE(res.feasible);
    CHECK(res.point[0] == 1);

    LinearSystem contradictory;
    (void)contradictory.add_var(true);
    contradictory.add({}, Rel::eq, 1);  // 0 = 1
    CHECK(!lp_feasible(contradictory).feasible);
}

TEST_CASE("basic distribution lp of a pair") {
    Structure c3 = zoo("cycle", 3);
    Structure k2 = zoo("clique", 2);
    BasicLp lp = build_basic_lp(c3, k2);

    // without pinning the uniform point is feasible
    CHECK(lp_feasible(lp.system).feasible);

    // pinning one edge assignment propagates a parity contradiction around
    // the odd cycle
    LinearSystem pinned = lp.system;
    Assignment pin{0, 0, 0};
    pinned.add({{lp.weight_var.at(pin), 1}}, Rel::eq, 1);
    CHECK(!lp_feasible(pinned).feasible);
}

TEST_CASE("pinned lp stays feasible on the even cycle") {
    Structure c4 = zoo("cycle", 4);
    Structure k2 = zoo("clique", 2);
    BasicLp lp = build_basic_lp(c4, k2);
    for (const auto& [assignment, var] : lp.weight_var) {
        LinearSystem pinned = lp.system;
        pinned.add({{var, 1}}, Rel::eq, 1);
        CHECK(lp_feasible(pinned).feasible);
    }
}
