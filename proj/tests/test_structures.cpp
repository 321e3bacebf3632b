#include "minionlab/structures.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace minionlab;

TEST_CASE("signature invariants") {
    CHECK_THROWS_AS(Signature({}), Error);
    CHECK_THROWS_AS(Signature({{"E", 0}}), Error);
    CHECK_THROWS_AS(Signature({{"E", 2}, {"E", 3}}), Error);
    Signature sig({{"E", 2}, {"R", 3}});
    CHECK(sig.index_of("R") == 1);
    CHECK(!sig.index_of("Q").has_value());
}

TEST_CASE("structure validation and tuple normalization") {
    Signature sig({{"E", 2}});
    CHECK_THROWS_AS(Structure(sig, 2, {{{0, 2}}}), Error);
    CHECK_THROWS_AS(Structure(sig, 2, {{{0}}}), Error);
    Structure s(sig, 2, {{{1, 0}, {0, 1}, {0, 1}}});
    CHECK(s.relation(0).size() == 2);  // deduplicated
    CHECK(s.relation(0)[0] == Tuple{0, 1});
}

TEST_CASE("zoo structures") {
    Structure z = zoo("one_in_three");
    CHECK(z.domain_size() == 2);
    CHECK(z.relation(0).size() == 3);
    std::set<Tuple> expected{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (const Tuple& t : z.relation(0))
        CHECK(expected.count(t) == 1);

    Structure nae = zoo("nae");
    CHECK(nae.relation(0).size() == 6);
    for (const Tuple& t : nae.relation(0)) {
        bool constant = t[0] == t[1] && t[1] == t[2];
        CHECK(!constant);
    }

    Structure k2 = zoo("clique", 2);
    CHECK(k2.domain_size() == 2);
    CHECK(k2.relation(0) == std::vector<Tuple>{{0, 1}, {1, 0}});

    CHECK_THROWS_AS(zoo("mystery"), Error);
    CHECK_THROWS_AS(zoo("cycle", 2), Error);

    CHECK(parse_zoo_ref("zoo:K3") == zoo("clique", 3));
    CHECK(parse_zoo_ref("zoo:C5") == zoo("cycle", 5));
    CHECK(parse_zoo_ref("zoo:P4") == zoo("path", 4));
    CHECK(parse_zoo_ref("zoo:Z") == zoo("one_in_three"));
    CHECK(parse_zoo_ref("zoo:NAE") == zoo("nae"));
}

TEST_CASE("find_homomorphism on the worked examples") {
    Structure k2 = zoo("clique", 2);
    Structure k3 = zoo("clique", 3);
    Structure c5 = zoo("cycle", 5);

    auto identity = find_homomorphism(k2, k2);
    REQUIRE(identity.status == HomStatus::found);
    CHECK(is_valid_homomorphism(*identity.hom));

    // odd cycle into one edge: none, matching the 2^5 enumeration
    auto none = find_homomorphism(c5, k2);
    CHECK(none.status == HomStatus::none_proven);
    CHECK(oracle::all_homomorphisms(c5, k2).empty());

    // odd cycle into the triangle: found, matching the 3^5 enumeration
    auto found = find_homomorphism(c5, k3);
    REQUIRE(found.status == HomStatus::found);
    CHECK(is_valid_homomorphism(*found.hom));
    CHECK(!oracle::all_homomorphisms(c5, k3).empty());

    CHECK_THROWS_AS(find_homomorphism(c5, zoo("one_in_three")), Error);
}

TEST_CASE("hom search agrees with enumeration on small instances") {
    Rng rng(20240811);
    for (int trial = 0; trial < 60; ++trial) {
        Structure x = oracle::random_graph_structure(rng, 5);
        Structure y = oracle::random_graph_structure(rng, 3);
        auto res = find_homomorphism(x, y);
        bool exists = oracle::hom_exists(x, y);
        if (exists) {
            REQUIRE(res.status == HomStatus::found);
            CHECK(is_valid_homomorphism(*res.hom));
        } else {
            CHECK(res.status == HomStatus::none_proven);
        }
    }
    for (int trial = 0; trial < 30; ++trial) {
        Structure x = oracle::random_ternary_structure(rng, 5);
        Structure y = oracle::random_ternary_structure(rng, 3);
        auto res = find_homomorphism(x, y);
        CHECK((res.status == HomStatus::found) == oracle::hom_exists(x, y));
    }
}

TEST_CASE("budget exhaustion is reported") {
    Structure c7 = zoo("cycle", 7);
    Structure k3 = zoo("clique", 3);
    auto res = find_homomorphism(c7, k3, 1);
    CHECK(res.status == HomStatus::budget_exceeded);
}

TEST_CASE("pinned search") {
    Structure c4 = zoo("cycle", 4);
    Structure k2 = zoo("clique", 2);
    auto res = find_homomorphism(c4, k2, kDefaultHomBudget, {{0, 1}});
    REQUIRE(res.status == HomStatus::found);
    CHECK(res.hom->map[0] == 1);
    // pinning adjacent vertices to the same colour kills the search
    auto bad = find_homomorphism(c4, k2, kDefaultHomBudget, {{0, 1}, {1, 1}});
    CHECK(bad.status == HomStatus::none_proven);
}

TEST_CASE("direct power of the edge") {
    Structure k2 = zoo("clique", 2);
    Structure p = direct_power(k2, 2);
    REQUIRE(p.domain_size() == 4);
    // vertices encode (a, b) as a + 2b; edges pair complementary tuples
    std::set<Tuple> expected{{0, 3}, {3, 0}, {1, 2}, {2, 1}};
    std::set<Tuple> got(p.relation(0).begin(), p.relation(0).end());
    CHECK(got == expected);
}

TEST_CASE("direct power of the triangle") {
    Structure k3 = zoo("clique", 3);
    Structure p = direct_power(k3, 2);
    REQUIRE(p.domain_size() == 9);
    // (a,b) ~ (c,d) exactly when a != c and b != d
    const auto& rel = p.relation(0);
    for (int v = 0; v < 9; ++v)
        for (int w = 0; w < 9; ++w) {
            auto tv = power_vertex_to_tuple(v, 3, 2);
            auto tw = power_vertex_to_tuple(w, 3, 2);
            bool adjacent = tv[0] != tw[0] && tv[1] != tw[1];
            bool listed = std::binary_search(rel.begin(), rel.end(), Tuple{v, w});
            CHECK(adjacent == listed);
        }
}

TEST_CASE("first power is the structure itself") {
    for (const char* name : {"zoo:K3", "zoo:C5", "zoo:Z"}) {
        Structure y = parse_zoo_ref(name);
        CHECK(direct_power(y, 1) == y);
    }
}

TEST_CASE("power size cap") {
    PowerCaps caps;
    caps.max_domain = 8;
    CHECK_THROWS_AS(direct_power(zoo("clique", 3), 3, caps), Error);
}

TEST_CASE("polymorphism search node cap") {
    PolymorphismCaps caps;
    caps.max_search_nodes = 2;
    CHECK_THROWS_AS(enumerate_polymorphisms(zoo("clique", 3), zoo("clique", 3), 2,
                                            caps),
                    Error);
}

TEST_CASE("polymorphism counts on the worked examples") {
    Structure k3 = zoo("clique", 3);
    auto unary = enumerate_polymorphisms(k3, k3, 1);
    CHECK(unary.functions.size() == 6);  // the permutations of three elements
    auto brute = oracle::all_polymorphisms(k3, k3, 1);
    std::sort(brute.begin(), brute.end());
    CHECK(unary.functions == brute);

    Structure k2 = zoo("clique", 2);
    auto binary = enumerate_polymorphisms(k2, k2, 2);
    CHECK(binary.functions.size() == 4);
    auto brute2 = oracle::all_polymorphisms(k2, k2, 2);
    std::sort(brute2.begin(), brute2.end());
    CHECK(binary.functions == brute2);
}

TEST_CASE("unary polymorphisms always include the identity") {
    for (const char* name : {"zoo:K2", "zoo:K3", "zoo:C5", "zoo:Z", "zoo:NAE"}) {
        Structure y = parse_zoo_ref(name);
        auto set = enumerate_polymorphisms(y, y, 1);
        std::vector<int> identity(y.domain_size());
        for (int i = 0; i < y.domain_size(); ++i)
            identity[i] = i;
        CHECK(std::binary_search(set.functions.begin(), set.functions.end(),
                                 identity));
    }
}

TEST_CASE("polymorphism enumeration is minor-closed") {
    Structure k2 = zoo("clique", 2);
    auto binary = enumerate_polymorphisms(k2, k2, 2);
    auto ternary = enumerate_polymorphisms(k2, k2, 3);
    auto unary = enumerate_polymorphisms(k2, k2, 1);

    auto contains = [](const std::vector<std::vector<int>>& fns,
                       const std::vector<int>& f) {
        return std::binary_search(fns.begin(), fns.end(), f);
    };
    // every pi : [2] -> [3] image of a binary polymorphism is ternary
    for (const auto& f : binary.functions)
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                CHECK(contains(ternary.functions,
                               function_minor(f, 2, 2, {a, b}, 3)));
    // collapsing to arity 1
    for (const auto& f : binary.functions)
        CHECK(contains(unary.functions, function_minor(f, 2, 2, {0, 0}, 1)));
}

TEST_CASE("bipartiteness with witnesses") {
    CHECK(is_bipartite(zoo("clique", 2)).bipartite);

    auto c5 = is_bipartite(zoo("cycle", 5));
    REQUIRE(!c5.bipartite);
    REQUIRE(c5.odd_walk.size() >= 3);
    // closed odd walk along edges
    const Structure g = zoo("cycle", 5);
    const auto& rel = g.relation(0);
    CHECK((c5.odd_walk.size() - 1) % 2 == 1);
    CHECK(c5.odd_walk.front() == c5.odd_walk.back());
    for (std::size_t i = 0; i + 1 < c5.odd_walk.size(); ++i)
        CHECK(std::binary_search(rel.begin(), rel.end(),
                                 Tuple{c5.odd_walk[i], c5.odd_walk[i + 1]}));
    CHECK(!oracle::two_colorable(g));

    CHECK(!is_bipartite(zoo("clique", 3)).bipartite);
    CHECK(!oracle::two_colorable(zoo("clique", 3)));

    Structure c6 = zoo("cycle", 6);
    auto colored = is_bipartite(c6);
    REQUIRE(colored.bipartite);
    for (const Tuple& e : c6.relation(0))
        CHECK(colored.coloring[e[0]] != colored.coloring[e[1]]);
}

TEST_CASE("is_bipartite rejects non-graphs") {
    // directed: a single arc without its reverse
    Structure directed(Signature({{"E", 2}}), 2, {{{0, 1}}});
    CHECK_THROWS_AS(is_bipartite(directed), Error);
    // reflexive: loops are rejected, not coerced
    Structure loopy(Signature({{"E", 2}}), 2, {{{0, 0}, {0, 1}, {1, 0}}});
    CHECK_THROWS_AS(is_bipartite(loopy), Error);
    // wrong signature
    CHECK_THROWS_AS(is_bipartite(zoo("one_in_three")), Error);
}

TEST_CASE("bipartiteness matches 2-colouring enumeration on random graphs") {
    Rng rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        Structure g = oracle::random_graph_structure(rng, 6);
        if (!is_graph(g))
            continue;
        CHECK(is_bipartite(g).bipartite == oracle::two_colorable(g));
    }
}
