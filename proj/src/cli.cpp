#include "minionlab/cli.hpp"

#include "minionlab/json_io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace minionlab {

namespace {

constexpr int kExitPositive = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitUsage = 3;
constexpr int kExitData = 4;

struct GlobalOptions {
    double tol = 1e-9;
    double sdp_tol = 1e-6;
    std::uint64_t seed = 0;
    std::size_t cap_power = 100'000;
    std::size_t cap_sdp = 400;
    std::string format = "json";
};

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open file " + path);
    Json j;
    in >> j;
    return j;
}

Structure load_structure(const std::string& ref, const GlobalOptions&) {
    if (ref.rfind("zoo:", 0) == 0)
        return parse_zoo_ref(ref);
    return structure_from_json(load_json(ref));
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void emit(const Json& report, const GlobalOptions& opts, std::ostream& out,
          const std::string& text_summary) {
    if (opts.format == "text")
        out << text_summary << "\n";
    else
        out << report.dump(2) << "\n";
}

std::complex<double> parse_component(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos)
        return {std::stod(s), 0.0};
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
}

Vector parse_vector(const std::string& s, int expected_dim) {
    std::vector<std::complex<double>> comps;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ';'))
        comps.push_back(parse_component(part));
    if (expected_dim > 0 && static_cast<int>(comps.size()) != expected_dim)
        throw Error("vector literal has wrong dimension");
    Vector v(static_cast<int>(comps.size()));
    for (std::size_t i = 0; i < comps.size(); ++i)
        v(static_cast<int>(i)) = comps[i];
    return v;
}

int exit_code_for_verdict(Verdict v) {
    switch (v) {
    case Verdict::advantage:
        return kExitPositive;
    case Verdict::no_advantage:
        return kExitNegative;
    default:
        return kExitUnknown;
    }
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"desk-scale toolkit for relational structures, minions, "
                 "quantum homomorphism certificates and CSP relaxations"};
    app.require_subcommand(1);

    GlobalOptions opts;
    if (const char* env_seed = std::getenv("MINIONLAB_SEED"))
        opts.seed = std::strtoull(env_seed, nullptr, 10);
    app.add_option("--tol", opts.tol, "algebraic tolerance");
    app.add_option("--sdp-tol", opts.sdp_tol, "relaxation tolerance");
    app.add_option("--seed", opts.seed, "random seed (fallback: MINIONLAB_SEED)");
    app.add_option("--cap-power", opts.cap_power, "power domain size cap");
    app.add_option("--cap-sdp", opts.cap_sdp, "relaxation index set cap");
    app.add_option("--format", opts.format, "output format: json or text")
        ->check(CLI::IsMember({"json", "text"}));

    int exit_code = kExitPositive;

    // hom X Y
    std::string hom_x, hom_y;
    std::uint64_t hom_budget = kDefaultHomBudget;
    auto* hom = app.add_subcommand("hom", "search for a homomorphism X -> Y");
    hom->add_option("X", hom_x)->required();
    hom->add_option("Y", hom_y)->required();
    hom->add_option("--budget", hom_budget, "search node budget");
    hom->callback([&] {
        Structure x = load_structure(hom_x, opts);
        Structure y = load_structure(hom_y, opts);
        HomSearchResult res = find_homomorphism(x, y, hom_budget);
        std::string text = res.status == HomStatus::found ? "found"
                           : res.status == HomStatus::none_proven
                               ? "none-proven"
                               : "budget-exceeded";
        emit(hom_result_to_json(res), opts, out, text);
        exit_code = res.status == HomStatus::found        ? kExitPositive
                    : res.status == HomStatus::none_proven ? kExitNegative
                                                            : kExitUnknown;
    });

    // power Y L
    std::string power_y;
    int power_l = 1;
    auto* power = app.add_subcommand("power", "direct power Y^l");
    power->add_option("Y", power_y)->required();
    power->add_option("L", power_l)->required();
    power->callback([&] {
        Structure y = load_structure(power_y, opts);
        Structure p = direct_power(y, power_l, {opts.cap_power});
        emit(structure_to_json(p), opts, out,
             "power domain " + std::to_string(p.domain_size()));
    });

    // poly Y L [--target Y']
    std::string poly_y, poly_target;
    int poly_l = 1;
    auto* poly = app.add_subcommand("poly", "enumerate polymorphisms");
    poly->add_option("Y", poly_y)->required();
    poly->add_option("L", poly_l)->required();
    poly->add_option("--target", poly_target,
                     "target structure for the promise case (default Y)");
    poly->callback([&] {
        Structure y = load_structure(poly_y, opts);
        Structure target = poly_target.empty() ? y : load_structure(poly_target, opts);
        PolymorphismCaps caps;
        caps.power.max_domain = opts.cap_power;
        PolymorphismSet set = enumerate_polymorphisms(y, target, poly_l, caps);
        Json fns = Json::array();
        for (const auto& f : set.functions)
            fns.push_back(f);
        emit(Json{{"arity", set.arity},
                  {"count", set.functions.size()},
                  {"functions", std::move(fns)}},
             opts, out, std::to_string(set.functions.size()) + " polymorphisms");
    });

    // zoo NAME [PARAM]
    std::string zoo_name;
    int zoo_param = 0;
    auto* zoo_cmd = app.add_subcommand("zoo", "emit a named example structure");
    zoo_cmd->add_option("NAME", zoo_name)->required();
    zoo_cmd->add_option("PARAM", zoo_param);
    zoo_cmd->callback([&] {
        Structure s = zoo_param > 0 ? zoo(zoo_name, zoo_param)
                                    : parse_zoo_ref(zoo_name);
        emit(structure_to_json(s), opts, out,
             "domain " + std::to_string(s.domain_size()));
    });

    // bipartite G
    std::string bip_g;
    auto* bip = app.add_subcommand("bipartite", "2-colour or find an odd walk");
    bip->add_option("G", bip_g)->required();
    bip->callback([&] {
        Structure g = load_structure(bip_g, opts);
        BipartiteReport rep = is_bipartite(g);
        emit(bipartite_to_json(rep), opts, out,
             rep.bipartite ? "bipartite" : "odd cycle");
        exit_code = rep.bipartite ? kExitPositive : kExitNegative;
    });

    // qcert verify|from-hom|roundtrip
    auto* qcert = app.add_subcommand("qcert", "quantum homomorphism certificates");
    qcert->require_subcommand(1);

    std::string qv_file;
    bool qv_mr = false;
    auto* qverify = qcert->add_subcommand("verify", "check the three conditions");
    qverify->add_option("CERT", qv_file)->required();
    qverify->add_flag("--skip-commutation", qv_mr,
                      "verifier mode without the commutation condition");
    qverify->callback([&] {
        Certificate c = certificate_from_json(load_json(qv_file));
        CertificateReport rep = verify_certificate(c, opts.tol, !qv_mr);
        emit(certificate_report_to_json(rep), opts, out,
             rep.pass() ? "pass" : "fail");
        exit_code = rep.pass() ? kExitPositive : kExitNegative;
    });

    std::string qf_x, qf_y, qf_out;
    int qf_dim = 1;
    std::string qf_field = "complex";
    auto* qfrom = qcert->add_subcommand(
        "from-hom", "classical certificate from a found homomorphism");
    qfrom->add_option("X", qf_x)->required();
    qfrom->add_option("Y", qf_y)->required();
    qfrom->add_option("--dim", qf_dim, "space dimension");
    qfrom->add_option("--field", qf_field)->check(CLI::IsMember({"real", "complex"}));
    qfrom->add_option("--out", qf_out, "write the certificate to this file");
    qfrom->callback([&] {
        Structure x = load_structure(qf_x, opts);
        Structure y = load_structure(qf_y, opts);
        HomSearchResult res = find_homomorphism(x, y);
        if (res.status != HomStatus::found) {
            emit(hom_result_to_json(res), opts, out, "no homomorphism");
            exit_code = kExitNegative;
            return;
        }
        SpaceConfig config{qf_field == "real" ? Field::real : Field::complex,
                           qf_dim};
        Certificate cert = cert_from_classical(*res.hom, config);
        Json j = certificate_to_json(cert);
        if (!qf_out.empty()) {
            std::ofstream f(qf_out);
            f << j.dump(2) << "\n";
        }
        emit(j, opts, out, "certificate written");
    });

    std::string qr_file;
    auto* qround = qcert->add_subcommand(
        "roundtrip", "certificate -> free homomorphism -> certificate");
    qround->add_option("CERT", qr_file)->required();
    qround->callback([&] {
        Certificate c = certificate_from_json(load_json(qr_file));
        std::vector<QElement> f = cert_to_free_hom(c, opts.tol);
        Certificate back = free_hom_to_cert(f, c.x, c.y, opts.tol);
        double dev = 0.0;
        for (int x = 0; x < c.x.domain_size(); ++x)
            for (int y = 0; y < c.y.domain_size(); ++y)
                dev = std::max(dev, op_norm(c.p[x][y] - back.p[x][y]));
        bool ok = dev <= 10 * opts.tol;
        emit(Json{{"max_projector_deviation", dev},
                  {"tolerance", 10 * opts.tol},
                  {"pass", ok}},
             opts, out, "deviation " + fmt17(dev));
        exit_code = ok ? kExitPositive : kExitNegative;
    });

    // freetest FILE
    std::string ft_file;
    auto* freetest = app.add_subcommand(
        "freetest", "free-structure relation membership for a tuple of elements");
    freetest->add_option("FILE", ft_file)->required();
    freetest->callback([&] {
        Json j = load_json(ft_file);
        Structure y = structure_from_json(j.at("y"));
        std::string rel_name = j.at("relation").get<std::string>();
        auto rel = y.signature().index_of(rel_name);
        if (!rel)
            throw Error("freetest: unknown relation " + rel_name);
        std::vector<QElement> tuple;
        for (const auto& e : j.at("elements"))
            tuple.push_back(qelement_from_json(e));
        FreeRelationReport rep = free_relation_test(tuple, y, *rel, opts.tol);
        emit(free_relation_report_to_json(rep), opts, out,
             rep.related ? "related" : "not related: " + rep.failure);
        exit_code = rep.related ? kExitPositive : kExitNegative;
    });

    // hopf V0 V1
    std::string hopf_a, hopf_b;
    auto* hopf = app.add_subcommand("hopf", "sphere image of a 2d vector; "
                                            "components as re[,im]");
    hopf->add_option("V0", hopf_a)->required();
    hopf->add_option("V1", hopf_b)->required();
    hopf->callback([&] {
        Vector v(2);
        v(0) = parse_component(hopf_a);
        v(1) = parse_component(hopf_b);
        SpherePoint p = hopf_map(v);
        bool upper = sphere_in_upper_part(p);
        emit(Json{{"t", p.t},
                  {"z", Json::array({p.z.real(), p.z.imag()})},
                  {"in_upper_part", upper}},
             opts, out,
             "t=" + fmt17(p.t) + " z=" + fmt17(p.z.real()) + "+" +
                 fmt17(p.z.imag()) + "i " + (upper ? "upper" : "lower"));
    });

    // xi d|s|c FILE
    auto* xi = app.add_subcommand("xi", "maps out of the quantum minion");
    xi->require_subcommand(1);
    std::string xi_file, xi_probe;

    auto* xid = xi->add_subcommand("d", "distinguished coordinate (dim <= 2)");
    xid->add_option("QELEM", xi_file)->required();
    xid->callback([&] {
        QElement q = qelement_from_json(load_json(xi_file));
        DictatorElement e = xi_dictator(q, opts.tol);
        emit(dictator_to_json(e), opts, out,
             "e_" + std::to_string(e.index + 1) + ";" + std::to_string(e.arity));
    });

    auto* xis = xi->add_subcommand("s", "probe projection rows");
    xis->add_option("QELEM", xi_file)->required();
    xis->add_option("--probe", xi_probe,
                    "unit probe vector, components re[,im] joined by ';' "
                    "(default: first basis vector)");
    xis->callback([&] {
        QElement q = qelement_from_json(load_json(xi_file));
        Vector probe;
        if (xi_probe.empty()) {
            probe = Vector::Zero(q.dimension());
            probe(0) = 1.0;
        } else {
            probe = parse_vector(xi_probe, q.dimension());
        }
        SdpElement e = xi_sdp(q, probe, opts.tol);
        emit(sdp_element_to_json(e), opts, out, "rows " + std::to_string(e.arity()));
    });

    auto* xic = xi->add_subcommand("c", "unit columns per stored basis vector");
    xic->add_option("QELEM", xi_file)->required();
    xic->callback([&] {
        QElement q = qelement_from_json(load_json(xi_file));
        SkeletalElement e = xi_skeletal(q, opts.tol);
        emit(skeletal_to_json(e), opts, out, "cols " + std::to_string(e.columns.cols()));
    });

    // relax sdp|clp X Y
    auto* relax = app.add_subcommand("relax", "relaxation decision procedures");
    relax->require_subcommand(1);
    std::string rx_x, rx_y;

    auto* rsdp = relax->add_subcommand("sdp", "semidefinite relaxation");
    rsdp->add_option("X", rx_x)->required();
    rsdp->add_option("Y", rx_y)->required();
    rsdp->callback([&] {
        Structure x = load_structure(rx_x, opts);
        Structure y = load_structure(rx_y, opts);
        SdpReport rep = sdp_relax(x, y, opts.sdp_tol, {opts.cap_sdp});
        emit(sdp_report_to_json(rep), opts, out,
             rep.status == SdpStatus::feasible     ? "feasible"
             : rep.status == SdpStatus::infeasible ? "infeasible"
                                                    : "inconclusive");
        exit_code = rep.status == SdpStatus::feasible     ? kExitPositive
                    : rep.status == SdpStatus::infeasible ? kExitNegative
                                                           : kExitUnknown;
    });

    auto* rclp = relax->add_subcommand("clp", "iterated pinned-LP relaxation");
    rclp->add_option("X", rx_x)->required();
    rclp->add_option("Y", rx_y)->required();
    rclp->callback([&] {
        Structure x = load_structure(rx_x, opts);
        Structure y = load_structure(rx_y, opts);
        ClpReport rep = clp_relax(x, y);
        emit(clp_report_to_json(rep, x, y), opts, out,
             rep.accepted ? "accept" : "reject");
        exit_code = rep.accepted ? kExitPositive : kExitNegative;
    });

    // consistency --k K X Y
    std::string cons_x, cons_y;
    int cons_k = 2;
    auto* cons = app.add_subcommand("consistency", "k-consistency fixed point");
    cons->add_option("--k", cons_k, "domain size bound")->required();
    cons->add_option("X", cons_x)->required();
    cons->add_option("Y", cons_y)->required();
    cons->callback([&] {
        Structure x = load_structure(cons_x, opts);
        Structure y = load_structure(cons_y, opts);
        ConsistencyReport rep = k_consistency(x, y, cons_k);
        emit(consistency_report_to_json(rep), opts, out,
             rep.consistent ? "consistent" : "inconsistent");
        exit_code = rep.consistent ? kExitPositive : kExitNegative;
    });

    // classify --graph G --dim d | --pair Y Y' --dim d
    std::string cg_graph;
    std::vector<std::string> cg_pair;
    int cg_dim = 3;
    auto* classify = app.add_subcommand("classify", "advantage classification");
    auto* graph_opt = classify->add_option("--graph", cg_graph, "graph subject");
    auto* pair_opt =
        classify->add_option("--pair", cg_pair, "pair subject Y Y'")->expected(2);
    graph_opt->excludes(pair_opt);
    classify->add_option("--dim", cg_dim, "space dimension")->required();
    classify->callback([&] {
        AdvantageVerdict verdict;
        if (!cg_graph.empty()) {
            verdict = classify_graph(load_structure(cg_graph, opts), cg_dim);
        } else if (cg_pair.size() == 2) {
            verdict = classify_pair(load_structure(cg_pair[0], opts),
                                    load_structure(cg_pair[1], opts), cg_dim);
        } else {
            throw CLI::ValidationError("classify", "need --graph or --pair");
        }
        emit(advantage_to_json(verdict), opts, out, verdict_name(verdict.verdict));
        exit_code = exit_code_for_verdict(verdict.verdict);
    });

    // minion check|map-check
    auto* minion = app.add_subcommand("minion", "axiom and map checking harness");
    minion->require_subcommand(1);
    std::string mc_name;
    int mc_samples = 500;
    int mc_dim = 3;

    auto* mcheck = minion->add_subcommand(
        "check", "identity and composition laws on random samples");
    mcheck->add_option("NAME", mc_name,
                       "dictator | sdp-real | sdp-complex | skeletal | quantum")
        ->required();
    mcheck->add_option("--samples", mc_samples);
    mcheck->add_option("--dim", mc_dim, "space dimension for quantum");
    mcheck->callback([&] {
        CheckReport rep;
        if (mc_name == "dictator")
            rep = check_minion_axioms(dictator_minion(), mc_samples, opts.seed);
        else if (mc_name == "sdp-real")
            rep = check_minion_axioms(sdp_minion(Field::real), mc_samples, opts.seed);
        else if (mc_name == "sdp-complex")
            rep = check_minion_axioms(sdp_minion(Field::complex), mc_samples,
                                      opts.seed);
        else if (mc_name == "skeletal")
            rep = check_minion_axioms(skeletal_minion(), mc_samples, opts.seed);
        else if (mc_name == "quantum")
            rep = check_minion_axioms(
                quantum_minion(SpaceConfig{Field::complex, mc_dim}), mc_samples,
                opts.seed);
        else
            throw Error("unknown minion " + mc_name);
        emit(check_report_to_json(rep), opts, out,
             rep.ok() ? "ok" : std::to_string(rep.failures.size()) + " failures");
        exit_code = rep.ok() ? kExitPositive : kExitNegative;
    });

    std::string mm_name;
    auto* mmap = minion->add_subcommand(
        "map-check", "minor preservation of a named map on random samples");
    mmap->add_option("MAP", mm_name,
                     "theta | xi-dictator | xi-sdp | xi-skeletal | "
                     "dictator-into-sdp | dictator-into-skeletal")
        ->required();
    mmap->add_option("--samples", mc_samples);
    mmap->add_option("--dim", mc_dim, "space dimension for the quantum source");
    mmap->callback([&] {
        CheckReport rep;
        if (mm_name == "theta") {
            double tol = opts.tol;
            std::function<SdpElement(const SdpElement&)> map =
                [tol](const SdpElement& m) { return theta(m, tol); };
            rep = check_minor_preserving(map, sdp_minion(Field::complex),
                                         sdp_minion(Field::real), mc_samples,
                                         opts.seed, opts.tol);
        } else if (mm_name == "xi-dictator") {
            SpaceConfig config{Field::complex, std::min(mc_dim, 2)};
            double tol = opts.tol;
            std::function<DictatorElement(const QElement&)> map =
                [tol](const QElement& q) { return xi_dictator(q, tol); };
            rep = check_minor_preserving(map, quantum_minion(config),
                                         dictator_minion(), mc_samples, opts.seed,
                                         0.0);
        } else if (mm_name == "xi-sdp") {
            SpaceConfig config{Field::complex, mc_dim};
            Vector probe = Vector::Zero(mc_dim);
            probe(0) = 1.0;
            double tol = opts.tol;
            std::function<SdpElement(const QElement&)> map =
                [probe, tol](const QElement& q) { return xi_sdp(q, probe, tol); };
            rep = check_minor_preserving(map, quantum_minion(config),
                                         sdp_minion(Field::complex), mc_samples,
                                         opts.seed, opts.tol);
        } else if (mm_name == "xi-skeletal") {
            SpaceConfig config{Field::complex, mc_dim};
            double tol = opts.tol;
            std::function<SkeletalElement(const QElement&)> map =
                [tol](const QElement& q) { return xi_skeletal(q, tol); };
            rep = check_minor_preserving(map, quantum_minion(config),
                                         skeletal_minion(), mc_samples, opts.seed,
                                         0.0);
        } else if (mm_name == "dictator-into-sdp") {
            auto target = sdp_minion(Field::real);
            auto map = dictator_into(target, opts.seed);
            rep = check_minor_preserving(map, dictator_minion(), target,
                                         mc_samples, opts.seed, opts.tol);
        } else if (mm_name == "dictator-into-skeletal") {
            auto target = skeletal_minion();
            auto map = dictator_into(target, opts.seed);
            rep = check_minor_preserving(map, dictator_minion(), target,
                                         mc_samples, opts.seed, 0.0);
        } else {
            throw Error("unknown map " + mm_name);
        }
        emit(check_report_to_json(rep), opts, out,
             rep.ok() ? "ok" : std::to_string(rep.failures.size()) + " failures");
        exit_code = rep.ok() ? kExitPositive : kExitNegative;
    });

    // dictator-search Y Y' --max-arity L
    std::string ds_y, ds_yp;
    int ds_arity = 2;
    auto* dsearch = app.add_subcommand(
        "dictator-search", "index assignment consistent with all minor maps");
    dsearch->add_option("Y", ds_y)->required();
    dsearch->add_option("YP", ds_yp)->required();
    dsearch->add_option("--max-arity", ds_arity)->required();
    dsearch->callback([&] {
        Structure y = load_structure(ds_y, opts);
        Structure yp = load_structure(ds_yp, opts);
        DictatorSearchResult res = bounded_dictator_search(y, yp, ds_arity);
        emit(dictator_search_to_json(res), opts, out,
             res.satisfiable ? "assignment" : "unsat");
        exit_code = res.satisfiable ? kExitPositive : kExitNegative;
    });

    // global flags remain usable after a subcommand name
    auto enable_fallthrough = [](CLI::App* node, auto&& self) -> void {
        for (CLI::App* sub : node->get_subcommands([](CLI::App*) { return true; })) {
            sub->fallthrough();
            self(sub, self);
        }
    };
    enable_fallthrough(&app, enable_fallthrough);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return kExitPositive;
        }
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const Json::exception& e) {
        err << "data error: " << e.what() << "\n";
        return kExitData;
    }
    return exit_code;
}

} // namespace minionlab
