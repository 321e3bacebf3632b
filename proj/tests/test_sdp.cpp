#include "minionlab/sdp.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace minionlab;

namespace {
const double kSdpTol = 1e-6;

// Hand-built refutation of the triangle-into-edge system: the aggregated
// functional forces z^T G z = -3 for z = sum_x (chi_{x,0} - chi_{x,1}),
// contradicting semidefiniteness. One multiplier block per vertex and per
// edge of the triangle.
std::vector<double> hand_farkas_k3_k2(const SdpSystem& sys, const Structure& k3) {
    std::vector<double> lambda(sys.constraints.size(), 0.0);
    auto bump = [&](auto&& predicate, double value) {
        for (std::size_t k = 0; k < sys.constraints.size(); ++k)
            if (predicate(sys.constraints[k])) {
                lambda[k] += value;
                return;
            }
        FAIL("hand certificate: constraint not found");
    };

    const auto& edges = k3.relation(0);
    // diagonal blocks: one edge tuple per vertex, at the position holding it
    for (int v = 0; v < 3; ++v) {
        int xt = -1, pos = -1;
        for (int t = 0; t < static_cast<int>(edges.size()) && xt < 0; ++t)
            for (int i = 0; i < 2; ++i)
                if (edges[t][i] == v) {
                    xt = t;
                    pos = i;
                    break;
                }
        for (auto [y, yp, w] : {std::tuple{0, 0, -1.0}, std::tuple{1, 1, -1.0},
                                std::tuple{0, 1, 2.0}}) {
            bump(
                [&](const SdpConstraint& c) {
                    return c.family == SdpConstraint::Family::gram_product &&
                           c.xt == xt && c.i == pos && c.j == pos && c.y == y &&
                           c.yp == yp && c.rel == 0;
                },
                w);
        }
        bump(
            [&](const SdpConstraint& c) {
                return c.family == SdpConstraint::Family::tuple_sum && c.xt == xt &&
                       c.rel == 0;
            },
            -1.0);
    }
    // off-diagonal blocks: each unordered pair once, via its sorted tuple
    for (int t = 0; t < static_cast<int>(edges.size()); ++t) {
        if (edges[t][0] > edges[t][1])
            continue;
        for (auto [y, yp, w] : {std::tuple{0, 0, -2.0}, std::tuple{1, 1, -2.0},
                                std::tuple{0, 1, 2.0}, std::tuple{1, 0, 2.0}}) {
            bump(
                [&](const SdpConstraint& c) {
                    return c.family == SdpConstraint::Family::gram_product &&
                           c.xt == t && c.i == 0 && c.j == 1 && c.y == y &&
                           c.yp == yp && c.rel == 0;
                },
                w);
        }
        bump(
            [&](const SdpConstraint& c) {
                return c.family == SdpConstraint::Family::tuple_sum && c.xt == t &&
                       c.rel == 0;
            },
            2.0);
    }
    return lambda;
}
} // namespace

TEST_CASE("integral witnesses for pairs with homomorphisms") {
    for (auto [xr, yr] : std::vector<std::pair<const char*, const char*>>{
             {"zoo:C4", "zoo:K2"}, {"zoo:C5", "zoo:K3"}, {"zoo:Z", "zoo:NAE"}}) {
        Structure x = parse_zoo_ref(xr);
        Structure y = parse_zoo_ref(yr);
        REQUIRE(oracle::hom_exists(x, y));
        SdpReport rep = sdp_relax(x, y, kSdpTol);
        REQUIRE(rep.status == SdpStatus::feasible);
        CHECK(rep.integral_shortcut);
        CHECK(rep.witness->max_residual == 0.0);  // integral point is exact
    }
}

TEST_CASE("triangle into edge is refuted with a checkable certificate") {
    Structure k3 = zoo("clique", 3);
    Structure k2 = zoo("clique", 2);
    REQUIRE(oracle::all_homomorphisms(k3, k2).empty());

    SdpReport rep = sdp_relax(k3, k2, kSdpTol);
    REQUIRE(rep.status == SdpStatus::infeasible);
    REQUIRE(rep.certificate.has_value());
    // re-check the solver's certificate independently of the solver
    SdpSystem sys = build_sdp_system(k3, k2);
    double margin = check_sdp_farkas(sys, rep.certificate->lambda);
    CHECK(margin > 0.0);
    CHECK(margin == doctest::Approx(rep.certificate->proven_margin));
}

TEST_CASE("the hand-derived refutation of the triangle checks out") {
    Structure k3 = zoo("clique", 3);
    Structure k2 = zoo("clique", 2);
    SdpSystem sys = build_sdp_system(k3, k2);
    std::vector<double> lambda = hand_farkas_k3_k2(sys, k3);
    double margin = check_sdp_farkas(sys, lambda);
    // aggregated rhs is 3 with an exactly negative semidefinite gram part
    CHECK(margin == doctest::Approx(3.0));
}

TEST_CASE("numeric path finds a witness when the shortcut is disabled") {
    SdpSolveConfig solve;
    solve.try_integral_shortcut = false;
    Structure c4 = zoo("cycle", 4);
    Structure k2 = zoo("clique", 2);
    SdpReport rep = sdp_relax(c4, k2, kSdpTol, {}, solve);
    REQUIRE(rep.status == SdpStatus::feasible);
    CHECK(!rep.integral_shortcut);
    REQUIRE(rep.witness.has_value());
    SdpSystem sys = build_sdp_system(c4, k2);
    CHECK(sdp_residual(sys, rep.witness->gram, rep.witness->v) <= kSdpTol);
    CHECK(rep.witness->min_eigenvalue >= -kSdpTol);
}

TEST_CASE("solver never refutes a pair with an integral solution") {
    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        Structure x = oracle::random_graph_structure(rng, 4);
        Structure y = oracle::random_graph_structure(rng, 3);
        if (!oracle::hom_exists(x, y))
            continue;
        SdpReport rep = sdp_relax(x, y, kSdpTol);
        CHECK(rep.status == SdpStatus::feasible);
    }
}

TEST_CASE("system shape") {
    Structure k3 = zoo("clique", 3);
    Structure k2 = zoo("clique", 2);
    SdpSystem sys = build_sdp_system(k3, k2);
    CHECK(sys.gram_size == 1 + 3 * 2);
    CHECK(sys.num_v == 6 * 2);  // six ordered edges, two target edges

    SdpCaps caps;
    caps.max_index_set = 3;
    CHECK_THROWS_AS(build_sdp_system(k3, k2, caps), Error);
}
