#include "minionlab/relaxations.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace minionlab;

TEST_CASE("clp accepts the even cycle") {
    ClpReport rep = clp_relax(zoo("cycle", 4), zoo("clique", 2));
    CHECK(rep.accepted);
    CHECK(!rep.emptied.has_value());
}

TEST_CASE("clp rejects odd cycles into the edge") {
    for (int n : {3, 5}) {
        ClpReport rep = clp_relax(zoo("cycle", n), zoo("clique", 2));
        CHECK(!rep.accepted);
        REQUIRE(rep.emptied.has_value());
        CHECK(oracle::all_homomorphisms(zoo("cycle", n), zoo("clique", 2)).empty());
    }
}

TEST_CASE("clp is unchanged by the exact shortcuts") {
    RelaxConfig plain;
    plain.use_shortcuts = false;
    std::vector<std::pair<Structure, Structure>> pairs = {
        {zoo("cycle", 3), zoo("clique", 2)},
        {zoo("cycle", 4), zoo("clique", 2)},
        {zoo("path", 3), zoo("clique", 2)},
        {zoo("one_in_three"), zoo("nae")},
    };
    for (const auto& [x, y] : pairs) {
        ClpReport fast = clp_relax(x, y);
        ClpReport slow = clp_relax(x, y, plain);
        CHECK(fast.accepted == slow.accepted);
        CHECK(fast.surviving == slow.surviving);
    }
}

TEST_CASE("clp fixed point is order independent") {
    std::vector<std::pair<Structure, Structure>> pairs = {
        {zoo("cycle", 5), zoo("clique", 2)},
        {zoo("cycle", 4), zoo("clique", 2)},
        {zoo("one_in_three"), zoo("one_in_three")},
    };
    for (const auto& [x, y] : pairs) {
        ClpReport base = clp_relax(x, y);
        for (std::uint64_t seed : {1ull, 2ull}) {
            RelaxConfig shuffled;
            shuffled.permute_order = true;
            shuffled.order_seed = seed;
            ClpReport rep = clp_relax(x, y, shuffled);
            CHECK(rep.accepted == base.accepted);
            CHECK(rep.surviving == base.surviving);
        }
    }
}

TEST_CASE("clp subsumes plain arc consistency") {
    // a looped vertex cannot map into the irreflexive edge: arc consistency
    // wipes the tuple out, and so must the relaxation
    Structure loopy(Signature({{"E", 2}}), 1, {{{0, 0}}});
    ClpReport rep = clp_relax(loopy, zoo("clique", 2));
    CHECK(!rep.accepted);
}

TEST_CASE("clp completeness on pairs with homomorphisms") {
    std::vector<std::pair<Structure, Structure>> pairs = {
        {zoo("clique", 2), zoo("cycle", 4)},
        {zoo("cycle", 6), zoo("clique", 2)},
        {zoo("cycle", 5), zoo("clique", 3)},
        {zoo("one_in_three"), zoo("nae")},
    };
    for (const auto& [x, y] : pairs) {
        REQUIRE(oracle::hom_exists(x, y));
        CHECK(clp_relax(x, y).accepted);
    }
}

TEST_CASE("k-consistency on the worked examples") {
    CHECK(k_consistency(zoo("path", 3), zoo("clique", 2), 2).consistent);
    CHECK(oracle::hom_exists(zoo("path", 3), zoo("clique", 2)));

    CHECK(!k_consistency(zoo("cycle", 5), zoo("clique", 2), 2).consistent);
    CHECK(!oracle::k_consistent(zoo("cycle", 5), zoo("clique", 2), 2));
}

TEST_CASE("k-consistency agrees with the independent fixed point") {
    Rng rng(99);
    for (int trial = 0; trial < 15; ++trial) {
        Structure x = oracle::random_graph_structure(rng, 5);
        Structure y = oracle::random_graph_structure(rng, 3);
        for (int k = 1; k <= 3; ++k)
            CHECK(k_consistency(x, y, k).consistent ==
                  oracle::k_consistent(x, y, k));
    }
}

TEST_CASE("k-consistency is complete for actual homomorphisms") {
    std::vector<std::pair<Structure, Structure>> pairs = {
        {zoo("cycle", 6), zoo("clique", 2)},
        {zoo("cycle", 5), zoo("clique", 3)},
        {zoo("clique", 3), zoo("clique", 3)},
        {zoo("path", 4), zoo("clique", 2)},
        {zoo("one_in_three"), zoo("nae")},
    };
    for (const auto& [x, y] : pairs) {
        REQUIRE(oracle::hom_exists(x, y));
        for (int k = 1; k <= 3; ++k)
            CHECK(k_consistency(x, y, k).consistent);
    }
}

TEST_CASE("rejection at some k persists at larger k") {
    Structure c5 = zoo("cycle", 5);
    Structure k2 = zoo("clique", 2);
    bool seen_reject = false;
    for (int k = 1; k <= 3; ++k) {
        bool consistent = k_consistency(c5, k2, k).consistent;
        if (seen_reject)
            CHECK(!consistent);
        if (!consistent)
            seen_reject = true;
    }
    CHECK(seen_reject);
}

TEST_CASE("k-consistency caps") {
    ConsistencyCaps caps;
    caps.max_domain = 4;
    CHECK_THROWS_AS(k_consistency(zoo("cycle", 5), zoo("clique", 2), 2, caps),
                    Error);
}
