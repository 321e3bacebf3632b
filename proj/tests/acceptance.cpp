// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line and
// enforces its wall-clock budget; the process exits nonzero if anything
// fails. Expected values come from the brute-force oracles in oracles.hpp.
#include "minionlab/advantage.hpp"
#include "minionlab/quantum.hpp"
#include "minionlab/relaxations.hpp"
#include "minionlab/sdp.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace minionlab;

namespace {

constexpr double kAlgTol = 1e-9;
constexpr double kSdpTol = 1e-6;

struct Runner {
    int failures = 0;

    void criterion(int number, const std::string& name, double budget_seconds,
                   const std::function<bool(std::string&)>& body) {
        std::string detail;
        auto start = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = body(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        if (elapsed > budget_seconds) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + std::string("over budget ") +
                      std::to_string(budget_seconds) + " s";
        }
        std::printf("%s criterion %2d: %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL",
                    number, name.c_str(), elapsed, detail.empty() ? "" : " -- ",
                    detail.c_str());
        std::fflush(stdout);
        if (!ok)
            ++failures;
    }
};

std::vector<Structure> acceptance_zoo() {
    return {zoo("clique", 2),    zoo("clique", 3), zoo("cycle", 4),
            zoo("cycle", 5),     zoo("cycle", 7),  zoo("path", 4),
            zoo("one_in_three"), zoo("nae")};
}

// valid certificate over a random common eigenbasis labelled by
// homomorphisms: commuting with all three conditions holding
Certificate synthetic_certificate(const Structure& x, const Structure& y,
                                  SpaceConfig config, Rng& rng) {
    auto homs = oracle::all_homomorphisms(x, y);
    Matrix basis = random_unitary(rng, config.dimension, config.field);
    std::vector<std::vector<Matrix>> p(
        x.domain_size(),
        std::vector<Matrix>(y.domain_size(),
                            Matrix::Zero(config.dimension, config.dimension)));
    for (int b = 0; b < config.dimension; ++b) {
        const auto& hom =
            homs[rng.uniform_int(0, static_cast<int>(homs.size()) - 1)];
        Matrix v = basis.col(b);
        for (int xv = 0; xv < x.domain_size(); ++xv)
            p[xv][hom[xv]] += v * v.adjoint();
    }
    return Certificate{x, y, config, std::move(p)};
}

bool check_axiom_suite(std::string& detail) {
    struct Entry {
        std::string name;
        std::function<CheckReport(std::uint64_t)> run;
    };
    std::vector<Entry> entries;
    entries.push_back({"dictator", [](std::uint64_t seed) {
                           return check_minion_axioms(dictator_minion(), 500, seed);
                       }});
    entries.push_back({"sdp-real", [](std::uint64_t seed) {
                           return check_minion_axioms(sdp_minion(Field::real), 500,
                                                      seed);
                       }});
    entries.push_back({"sdp-complex", [](std::uint64_t seed) {
                           return check_minion_axioms(sdp_minion(Field::complex),
                                                      500, seed);
                       }});
    entries.push_back({"skeletal", [](std::uint64_t seed) {
                           return check_minion_axioms(skeletal_minion(), 500, seed);
                       }});
    for (int d = 1; d <= 4; ++d)
        entries.push_back({"quantum-d" + std::to_string(d),
                           [d](std::uint64_t seed) {
                               return check_minion_axioms(
                                   quantum_minion(SpaceConfig{Field::complex, d}),
                                   500, seed);
                           }});
    std::uint64_t seed = 1001;
    for (const auto& e : entries) {
        CheckReport rep = e.run(seed++);
        if (!rep.ok()) {
            detail = e.name + ": " + std::to_string(rep.failures.size()) +
                     " failures, worst " + std::to_string(rep.worst_residual);
            return false;
        }
    }
    detail = std::to_string(entries.size()) + " minions x 500 samples";
    return true;
}

bool check_hopf(std::string& detail) {
    Rng rng(2002);
    HopfPartition partition{SpaceConfig{Field::complex, 2}};
    for (int trial = 0; trial < 10000; ++trial) {
        Matrix u = random_unitary(rng, 2, Field::complex);
        Vector v = u.col(0), w = u.col(1);
        SpherePoint pv = hopf_map(v), pw = hopf_map(w);
        if (std::abs(pv.t + pw.t) > kAlgTol || std::abs(pv.z + pw.z) > kAlgTol) {
            detail = "antipodality violated at trial " + std::to_string(trial);
            return false;
        }
        if (partition.contains(v) == partition.contains(w)) {
            detail = "selected class failed at trial " + std::to_string(trial);
            return false;
        }
    }
    detail = "10000 orthogonal pairs";
    return true;
}

bool check_xi_dictator(std::string& detail) {
    std::function<DictatorElement(const QElement&)> map = [](const QElement& q) {
        return xi_dictator(q);
    };
    int done = 0;
    std::uint64_t seed = 3003;
    for (Field field : {Field::complex, Field::real}) {
        for (int d = 1; d <= 2; ++d) {
            auto rep = check_minor_preserving(
                map, quantum_minion(SpaceConfig{field, d}), dictator_minion(), 250,
                seed++, 0.0);
            done += rep.samples;
            if (!rep.ok()) {
                detail = "failures at d=" + std::to_string(d);
                return false;
            }
        }
    }
    detail = std::to_string(done) + " samples, exact";
    return done == 1000;
}

bool check_xi_sdp_skeletal(std::string& detail) {
    std::uint64_t seed = 4004;
    int done = 0;
    for (int d = 1; d <= 4; ++d) {
        SpaceConfig config{Field::complex, d};
        auto source = quantum_minion(config, 6);
        Vector probe = Vector::Zero(d);
        probe(0) = 1.0;
        std::function<SdpElement(const QElement&)> to_sdp =
            [probe](const QElement& q) { return xi_sdp(q, probe); };
        auto sdp_rep = check_minor_preserving(
            to_sdp, source, sdp_minion(Field::complex), 250, seed++, kAlgTol);
        if (!sdp_rep.ok()) {
            detail = "probe map failed at d=" + std::to_string(d);
            return false;
        }
        std::function<SkeletalElement(const QElement&)> to_skeletal =
            [](const QElement& q) { return xi_skeletal(q); };
        auto skel_rep = check_minor_preserving(to_skeletal, source,
                                               skeletal_minion(), 250, seed++, 0.0);
        if (!skel_rep.ok()) {
            detail = "column map failed at d=" + std::to_string(d);
            return false;
        }
        done += sdp_rep.samples + skel_rep.samples;
    }
    detail = std::to_string(done / 2) + " samples per map";
    return done == 2000;
}

bool check_theta(std::string& detail) {
    std::function<SdpElement(const SdpElement&)> map = [](const SdpElement& m) {
        return theta(m, kAlgTol);
    };
    auto rep = check_minor_preserving(map, sdp_minion(Field::complex),
                                      sdp_minion(Field::real), 300, 5005, kAlgTol);
    if (!rep.ok()) {
        detail = std::to_string(rep.failures.size()) + " failures";
        return false;
    }
    detail = "300 samples, worst residual " + std::to_string(rep.worst_residual);
    return true;
}

bool check_round_trip(std::string& detail) {
    auto run_cert = [&](const Certificate& cert) {
        if (!verify_certificate(cert, kAlgTol).pass()) {
            detail = "certificate failed verification";
            return false;
        }
        auto f = cert_to_free_hom(cert, kAlgTol);
        // the converse construction re-runs the relation test on every
        // constrained tuple and throws on any failure
        Certificate back = free_hom_to_cert(f, cert.x, cert.y, kAlgTol);
        double dev = 0.0;
        for (int xv = 0; xv < cert.x.domain_size(); ++xv)
            for (int yv = 0; yv < cert.y.domain_size(); ++yv)
                dev = std::max(dev, op_norm(cert.p[xv][yv] - back.p[xv][yv]));
        if (dev > 1e-8) {
            detail = "projector deviation " + std::to_string(dev);
            return false;
        }
        return true;
    };

    auto structures = acceptance_zoo();
    int classical = 0;
    for (const Structure& x : structures) {
        if (x.domain_size() > 5)
            continue;
        for (const Structure& y : structures) {
            if (y.domain_size() > 5 || !x.similar_to(y))
                continue;
            auto res = find_homomorphism(x, y);
            if (res.status != HomStatus::found)
                continue;
            for (int d = 1; d <= 4; ++d) {
                Certificate cert =
                    cert_from_classical(*res.hom, SpaceConfig{Field::complex, d});
                if (!run_cert(cert))
                    return false;
                ++classical;
            }
        }
    }

    Rng rng(6006);
    std::vector<std::pair<Structure, Structure>> pool;
    for (const Structure& x : structures)
        for (const Structure& y : structures)
            if (x.similar_to(y) && x.domain_size() <= 5 && y.domain_size() <= 5 &&
                oracle::hom_exists(x, y))
                pool.push_back({x, y});
    for (int s = 0; s < 50; ++s) {
        const auto& [x, y] =
            pool[rng.uniform_int(0, static_cast<int>(pool.size()) - 1)];
        SpaceConfig config{Field::complex, rng.uniform_int(1, 4)};
        if (!run_cert(synthetic_certificate(x, y, config, rng)))
            return false;
    }
    detail = std::to_string(classical) + " classical + 50 synthetic";
    return true;
}

bool check_adversarial(std::string& detail) {
    Rng rng(7007);
    int per_condition[3] = {17, 17, 16};
    const char* names[3] = {"Q1", "Q2", "Q3"};
    for (int cond = 0; cond < 3; ++cond) {
        for (int s = 0; s < per_condition[cond]; ++s) {
            Certificate cert = [&]() -> Certificate {
                if (cond == 0) {
                    // drop one basis vector from some projector: the
                    // completeness sum loses a rank-one piece
                    Structure x = zoo("cycle", 4);
                    Structure y = zoo("clique", 2);
                    int d = rng.uniform_int(2, 4);
                    Certificate c = synthetic_certificate(
                        x, y, SpaceConfig{Field::complex, d}, rng);
                    for (int xv = 0; xv < x.domain_size(); ++xv)
                        for (int yv = 0; yv < y.domain_size(); ++yv) {
                            Matrix basis = range_basis(c.p[xv][yv]);
                            if (basis.cols() > 0) {
                                c.p[xv][yv] -=
                                    basis.col(0) * basis.col(0).adjoint();
                                return c;
                            }
                        }
                    return c;
                }
                if (cond == 1) {
                    // a full binary relation keeps the product condition
                    // vacuous while the bases across the edge disagree
                    Structure x(Signature({{"E", 2}}), 2, {{{0, 1}, {1, 0}}});
                    std::vector<Tuple> all;
                    for (int a = 0; a < 2; ++a)
                        for (int b = 0; b < 2; ++b)
                            all.push_back({a, b});
                    Structure y(Signature({{"E", 2}}), 2, {all});
                    double angle = rng.uniform(0.05, M_PI / 4);
                    Matrix id2 = Matrix::Identity(2, 2);
                    Matrix rot(2, 2);
                    rot << std::cos(angle), -std::sin(angle), std::sin(angle),
                        std::cos(angle);
                    Certificate c{x, y, SpaceConfig{Field::complex, 2}, {}};
                    c.p.assign(2, std::vector<Matrix>(2, Matrix::Zero(2, 2)));
                    c.p[0][0] = id2.col(0) * id2.col(0).adjoint();
                    c.p[0][1] = id2.col(1) * id2.col(1).adjoint();
                    c.p[1][0] = rot.col(0) * rot.col(0).adjoint();
                    c.p[1][1] = rot.col(1) * rot.col(1).adjoint();
                    return c;
                }
                // constant labelling on a common eigenbasis: the ordered
                // product over a non-related tuple keeps full rank
                Structure x = zoo("cycle", 3);
                Structure y = zoo("clique", 2);
                int d = rng.uniform_int(2, 4);
                Matrix basis = random_unitary(rng, d, Field::complex);
                Certificate c{x, y, SpaceConfig{Field::complex, d}, {}};
                c.p.assign(3, std::vector<Matrix>(2, Matrix::Zero(d, d)));
                for (int b = 0; b < d; ++b) {
                    Matrix v = basis.col(b);
                    for (int xv = 0; xv < 3; ++xv)
                        c.p[xv][0] += v * v.adjoint();
                }
                return c;
            }();

            CertificateReport rep = verify_certificate(cert, kAlgTol);
            auto failed = rep.failed_conditions();
            if (failed.size() != 1 || failed[0] != names[cond]) {
                detail = std::string("expected only ") + names[cond] + " to fail";
                return false;
            }
            double residual = cond == 0   ? rep.q1.residual
                              : cond == 1 ? rep.q2.residual
                                          : rep.q3.residual;
            if (residual < 1e-3) {
                detail = std::string(names[cond]) + " residual below the plant";
                return false;
            }
        }
    }
    detail = "50 planted violations, each named";
    return true;
}

bool check_relaxation_completeness(std::string& detail) {
    auto structures = acceptance_zoo();
    int pairs = 0;
    for (const Structure& x : structures) {
        for (const Structure& y : structures) {
            if (!x.similar_to(y) || x.domain_size() > 8)
                continue;
            if (!oracle::hom_exists(x, y))
                continue;
            ++pairs;
            SdpReport sdp = sdp_relax(x, y, kSdpTol);
            if (sdp.status != SdpStatus::feasible) {
                detail = "sdp not feasible on a homomorphic pair";
                return false;
            }
            if (!clp_relax(x, y).accepted) {
                detail = "clp rejected a homomorphic pair";
                return false;
            }
            for (int k = 1; k <= 3; ++k)
                if (!k_consistency(x, y, k).consistent) {
                    detail = "k-consistency rejected a homomorphic pair";
                    return false;
                }
        }
    }
    detail = std::to_string(pairs) + " homomorphic pairs, zero false rejections";
    return pairs > 0;
}

bool check_relaxation_rejection(std::string& detail) {
    Structure c3 = zoo("cycle", 3), c5 = zoo("cycle", 5);
    Structure k2 = zoo("clique", 2), k3 = zoo("clique", 3);

    for (const Structure* x : {&c3, &c5, &k3})
        if (oracle::hom_exists(*x, k2)) {
            detail = "oracle unexpectedly found a homomorphism";
            return false;
        }

    if (clp_relax(c3, k2).accepted || clp_relax(c5, k2).accepted) {
        detail = "clp accepted an odd cycle into the edge";
        return false;
    }
    if (k_consistency(c5, k2, 2).consistent) {
        detail = "2-consistency accepted the five-cycle into the edge";
        return false;
    }
    SdpReport rep = sdp_relax(k3, k2, kSdpTol);
    if (rep.status != SdpStatus::infeasible || !rep.certificate) {
        detail = "sdp did not refute the triangle into the edge";
        return false;
    }
    SdpSystem sys = build_sdp_system(k3, k2);
    double margin = check_sdp_farkas(sys, rep.certificate->lambda);
    if (margin <= 0) {
        detail = "returned certificate fails the independent check";
        return false;
    }
    detail = "farkas margin " + std::to_string(margin);
    return true;
}

// random instance in the 1-in-3 signature; half the draws plant a
// satisfying assignment so that both outcomes of the relaxation occur
Structure random_shadow_instance(Rng& rng) {
    int n = rng.uniform_int(2, 6);
    bool plant = rng.uniform() < 0.5;
    std::vector<int> sigma(n, 0);
    if (plant) {
        do {
            for (int& s : sigma)
                s = rng.uniform_int(0, 1);
        } while (std::count(sigma.begin(), sigma.end(), 1) == 0 ||
                 std::count(sigma.begin(), sigma.end(), 0) == 0);
    }
    std::set<Tuple> rel;
    int want = rng.uniform_int(1, 2 * n);
    for (int guard = 0; static_cast<int>(rel.size()) < want && guard < 400;
         ++guard) {
        Tuple t{rng.uniform_int(0, n - 1), rng.uniform_int(0, n - 1),
                rng.uniform_int(0, n - 1)};
        if (plant && sigma[t[0]] + sigma[t[1]] + sigma[t[2]] != 1)
            continue;
        rel.insert(t);
    }
    return Structure(Signature({{"R", 3}}), n,
                     {{rel.begin(), rel.end()}});
}

bool check_theorem26_shadow(std::string& detail) {
    Rng rng(9009);
    Structure z = zoo("one_in_three");
    Structure nae = zoo("nae");
    int accepted = 0;
    for (int trial = 0; trial < 30; ++trial) {
        Structure x = random_shadow_instance(rng);
        if (!clp_relax(x, z).accepted)
            continue;
        ++accepted;
        if (!oracle::hom_exists(x, nae)) {
            detail = "accepted instance without a homomorphism into the "
                     "relaxed template, trial " +
                     std::to_string(trial);
            return false;
        }
    }
    detail = std::to_string(accepted) + "/30 accepted, zero violations";
    return accepted > 0 && accepted < 30;
}

bool check_dictator_search(std::string& detail) {
    auto unsat = bounded_dictator_search(zoo("clique", 2), zoo("clique", 2), 3);
    if (unsat.satisfiable) {
        detail = "expected unsat on the edge at arity 3";
        return false;
    }
    // the returned conflict is exhaustively inconsistent
    std::vector<std::pair<int, int>> vars;
    for (const MinorIdentity& id : unsat.conflict) {
        vars.push_back({id.arity, id.function});
        vars.push_back({id.pi.target_arity(), id.minor_function});
    }
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    std::vector<int> choice(vars.size(), 0);
    auto var_index = [&](int arity, int fn) {
        return static_cast<int>(
            std::lower_bound(vars.begin(), vars.end(), std::pair{arity, fn}) -
            vars.begin());
    };
    while (true) {
        bool ok = true;
        for (const MinorIdentity& id : unsat.conflict)
            if (choice[var_index(id.pi.target_arity(), id.minor_function)] !=
                id.pi(choice[var_index(id.arity, id.function)])) {
                ok = false;
                break;
            }
        if (ok) {
            detail = "conflict admits an assignment";
            return false;
        }
        int pos = static_cast<int>(choice.size()) - 1;
        while (pos >= 0 && ++choice[pos] == vars[pos].first)
            choice[pos--] = 0;
        if (pos < 0)
            break;
    }

    auto sat = bounded_dictator_search(zoo("clique", 3), zoo("clique", 3), 3);
    if (!sat.satisfiable || !sat.assignment) {
        detail = "expected an assignment on the triangle at arity 3";
        return false;
    }
    if (!verify_dictator_assignment(zoo("clique", 3), zoo("clique", 3),
                                    *sat.assignment)) {
        detail = "returned assignment fails the exhaustive identity check";
        return false;
    }
    detail = "conflict of size " + std::to_string(unsat.conflict.size()) +
             "; triangle assignment verified";
    return true;
}

bool check_classifier_table(std::string& detail) {
    struct Row {
        const char* name;
        bool bipartite;
    };
    const Row rows[] = {{"zoo:K2", true},  {"zoo:K3", false}, {"zoo:C4", true},
                        {"zoo:C5", false}, {"zoo:C7", false}, {"zoo:P4", true}};
    int checked = 0;
    for (const Row& row : rows) {
        Structure g = parse_zoo_ref(row.name);
        for (int d : {1, 2, 3, 5}) {
            Verdict expected = d <= 2          ? Verdict::no_advantage
                               : row.bipartite ? Verdict::no_advantage
                                               : Verdict::advantage;
            AdvantageVerdict v = classify_graph(g, d);
            if (v.verdict != expected || !v.justification) {
                detail = std::string(row.name) + " at d=" + std::to_string(d);
                return false;
            }
            ++checked;
        }
    }
    detail = std::to_string(checked) + " table entries";
    return true;
}

} // namespace

int main() {
    Runner runner;
    runner.criterion(1, "minion axiom suite", 60.0, check_axiom_suite);
    runner.criterion(2, "orthogonal pairs split by the sphere partition", 5.0,
                     check_hopf);
    runner.criterion(3, "distinguished-coordinate map preserves minors", 10.0,
                     check_xi_dictator);
    runner.criterion(4, "probe and column maps preserve minors", 30.0,
                     check_xi_sdp_skeletal);
    runner.criterion(5, "real-part embedding preserves minors", 10.0, check_theta);
    runner.criterion(6, "certificate round trip", 60.0, check_round_trip);
    runner.criterion(7, "adversarial certificates name the broken condition",
                     30.0, check_adversarial);
    runner.criterion(8, "relaxation completeness", 120.0,
                     check_relaxation_completeness);
    runner.criterion(9, "relaxation rejection with certificates", 60.0,
                     check_relaxation_rejection);
    runner.criterion(10, "accepted instances map into the relaxed template",
                     120.0, check_theorem26_shadow);
    runner.criterion(11, "dictator search dichotomy", 60.0, check_dictator_search);
    runner.criterion(12, "graph classifier table", 1.0, check_classifier_table);
    if (runner.failures) {
        std::printf("%d criterion(s) failed\n", runner.failures);
        return 1;
    }
    std::printf("all 12 criteria passed\n");
    return 0;
}
