#include "minionlab/json_io.hpp"

namespace minionlab {

Json structure_to_json(const Structure& s) {
    Json sig = Json::array();
    for (int r = 0; r < s.signature().size(); ++r)
        sig.push_back({{"name", s.signature().name(r)},
                       {"arity", s.signature().arity(r)}});
    Json rels = Json::object();
    for (int r = 0; r < s.signature().size(); ++r) {
        Json tuples = Json::array();
        for (const Tuple& t : s.relation(r))
            tuples.push_back(t);
        rels[s.signature().name(r)] = std::move(tuples);
    }
    return Json{{"signature", std::move(sig)},
                {"domain", s.domain_size()},
                {"relations", std::move(rels)}};
}

Structure structure_from_json(const Json& j) {
    std::vector<std::pair<std::string, int>> symbols;
    for (const auto& entry : j.at("signature"))
        symbols.push_back({entry.at("name").get<std::string>(),
                           entry.at("arity").get<int>()});
    Signature sig(std::move(symbols));
    int domain = j.at("domain").get<int>();
    std::vector<std::vector<Tuple>> relations(sig.size());
    const auto& rels = j.at("relations");
    for (int r = 0; r < sig.size(); ++r) {
        if (!rels.contains(sig.name(r)))
            throw Error("structure json: missing relation " + sig.name(r));
        for (const auto& t : rels.at(sig.name(r)))
            relations[r].push_back(t.get<Tuple>());
    }
    return Structure(std::move(sig), domain, std::move(relations));
}

Json space_config_to_json(const SpaceConfig& c) {
    return Json{{"field", c.field == Field::real ? "real" : "complex"},
                {"dimension", c.dimension}};
}

SpaceConfig space_config_from_json(const Json& j) {
    SpaceConfig c;
    std::string field = j.at("field").get<std::string>();
    if (field == "real")
        c.field = Field::real;
    else if (field == "complex")
        c.field = Field::complex;
    else
        throw Error("space config json: unknown field " + field);
    c.dimension = j.at("dimension").get<int>();
    if (c.dimension < 1)
        throw Error("space config json: dimension must be positive");
    return c;
}

Json matrix_to_json(const Matrix& m, Field field) {
    Json out = Json::array();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            if (field == Field::real)
                out.push_back(m(i, j).real());
            else
                out.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
        }
    return out;
}

Matrix matrix_from_json(const Json& j, Field field, int rows, int cols) {
    if (static_cast<int>(j.size()) != rows * cols)
        throw Error("matrix json: wrong entry count");
    Matrix m(rows, cols);
    int at = 0;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c, ++at) {
            const auto& e = j.at(at);
            if (field == Field::real) {
                if (!e.is_number())
                    throw Error("matrix json: real entries must be numbers");
                m(r, c) = std::complex<double>(e.get<double>(), 0.0);
            } else {
                if (!e.is_array() || e.size() != 2)
                    throw Error("matrix json: complex entries must be [re,im]");
                m(r, c) = std::complex<double>(e.at(0).get<double>(),
                                               e.at(1).get<double>());
            }
        }
    return m;
}

Json qelement_to_json(const QElement& q) {
    Json blocks = Json::array();
    for (int i = 0; i < q.arity(); ++i) {
        Json block = Json::array();
        for (int k = 0; k < q.block(i).cols(); ++k) {
            Json vec = Json::array();
            for (int d = 0; d < q.dimension(); ++d) {
                auto entry = q.block(i)(d, k);
                if (q.config().field == Field::real)
                    vec.push_back(entry.real());
                else
                    vec.push_back(Json::array({entry.real(), entry.imag()}));
            }
            block.push_back(std::move(vec));
        }
        blocks.push_back(std::move(block));
    }
    return Json{{"config", space_config_to_json(q.config())},
                {"arity", q.arity()},
                {"blocks", std::move(blocks)}};
}

QElement qelement_from_json(const Json& j) {
    SpaceConfig config = space_config_from_json(j.at("config"));
    int arity = j.at("arity").get<int>();
    const auto& blocks_json = j.at("blocks");
    if (static_cast<int>(blocks_json.size()) != arity)
        throw Error("qelement json: one block per coordinate required");
    std::vector<Matrix> blocks;
    for (const auto& bj : blocks_json) {
        Matrix b(config.dimension, static_cast<int>(bj.size()));
        for (int k = 0; k < b.cols(); ++k) {
            const auto& vec = bj.at(k);
            if (static_cast<int>(vec.size()) != config.dimension)
                throw Error("qelement json: vector has wrong dimension");
            for (int d = 0; d < config.dimension; ++d) {
                const auto& e = vec.at(d);
                if (config.field == Field::real)
                    b(d, k) = std::complex<double>(e.get<double>(), 0.0);
                else
                    b(d, k) = std::complex<double>(e.at(0).get<double>(),
                                                   e.at(1).get<double>());
            }
        }
        blocks.push_back(std::move(b));
    }
    return QElement(config, std::move(blocks));
}

Json certificate_to_json(const Certificate& c) {
    Json matrices = Json::object();
    for (int x = 0; x < c.x.domain_size(); ++x)
        for (int y = 0; y < c.y.domain_size(); ++y)
            matrices[std::to_string(x) + ":" + std::to_string(y)] =
                matrix_to_json(c.p[x][y], c.config.field);
    return Json{{"config", space_config_to_json(c.config)},
                {"x", structure_to_json(c.x)},
                {"y", structure_to_json(c.y)},
                {"matrices", std::move(matrices)}};
}

Certificate certificate_from_json(const Json& j) {
    SpaceConfig config = space_config_from_json(j.at("config"));
    Structure x = structure_from_json(j.at("x"));
    Structure y = structure_from_json(j.at("y"));
    const int d = config.dimension;
    std::vector<std::vector<Matrix>> p(
        x.domain_size(), std::vector<Matrix>(y.domain_size(), Matrix::Zero(d, d)));
    const auto& matrices = j.at("matrices");
    for (int xv = 0; xv < x.domain_size(); ++xv)
        for (int yv = 0; yv < y.domain_size(); ++yv) {
            std::string key = std::to_string(xv) + ":" + std::to_string(yv);
            if (!matrices.contains(key))
                throw Error("certificate json: missing matrix " + key);
            p[xv][yv] = matrix_from_json(matrices.at(key), config.field, d, d);
        }
    return Certificate{std::move(x), std::move(y), config, std::move(p)};
}

Json dictator_to_json(const DictatorElement& e) {
    return Json{{"kind", "dictator"}, {"arity", e.arity}, {"index", e.index + 1}};
}

DictatorElement dictator_from_json(const Json& j) {
    DictatorElement e{j.at("arity").get<int>(), j.at("index").get<int>() - 1};
    if (e.index < 0 || e.index >= e.arity)
        throw Error("dictator json: index out of range");
    return e;
}

Json sdp_element_to_json(const SdpElement& e) {
    return Json{{"kind", "sdp"},
                {"field", e.field == Field::real ? "real" : "complex"},
                {"rows", e.entries.rows()},
                {"cols", e.entries.cols()},
                {"entries", matrix_to_json(e.entries, e.field)}};
}

SdpElement sdp_element_from_json(const Json& j) {
    Field field = j.at("field").get<std::string>() == "real" ? Field::real
                                                             : Field::complex;
    int rows = j.at("rows").get<int>();
    int cols = j.at("cols").get<int>();
    return SdpElement{field, matrix_from_json(j.at("entries"), field, rows, cols)};
}

Json skeletal_to_json(const SkeletalElement& e) {
    Json entries = Json::array();
    for (int i = 0; i < e.columns.rows(); ++i)
        for (int j = 0; j < e.columns.cols(); ++j)
            entries.push_back(e.columns(i, j));
    return Json{{"kind", "skeletal"},
                {"rows", e.columns.rows()},
                {"cols", e.columns.cols()},
                {"entries", std::move(entries)}};
}

SkeletalElement skeletal_from_json(const Json& j) {
    int rows = j.at("rows").get<int>();
    int cols = j.at("cols").get<int>();
    const auto& entries = j.at("entries");
    if (static_cast<int>(entries.size()) != rows * cols)
        throw Error("skeletal json: wrong entry count");
    Eigen::MatrixXd m(rows, cols);
    int at = 0;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            m(r, c) = entries.at(at++).get<double>();
    return SkeletalElement{std::move(m)};
}

Json hom_result_to_json(const HomSearchResult& r) {
    Json j{{"status", r.status == HomStatus::found          ? "found"
                      : r.status == HomStatus::none_proven ? "none-proven"
                                                            : "budget-exceeded"},
           {"nodes", r.nodes}};
    if (r.hom)
        j["map"] = r.hom->map;
    return j;
}

Json bipartite_to_json(const BipartiteReport& r) {
    Json j{{"bipartite", r.bipartite}};
    if (r.bipartite)
        j["coloring"] = r.coloring;
    else
        j["odd_walk"] = r.odd_walk;
    return j;
}

namespace {
Json condition_to_json(const ConditionResidual& c) {
    return Json{{"residual", c.residual}, {"worst", c.worst_case}};
}
} // namespace

Json certificate_report_to_json(const CertificateReport& r) {
    return Json{{"pass", r.pass()},
                {"tolerance", r.tol},
                {"q2_checked", r.q2_checked},
                {"failed", r.failed_conditions()},
                {"conditions",
                 Json{{"projector", condition_to_json(r.projector)},
                      {"Q1", condition_to_json(r.q1)},
                      {"Q2", condition_to_json(r.q2)},
                      {"Q3", condition_to_json(r.q3)},
                      {"pairwise", condition_to_json(r.pairwise)}}}};
}

Json free_relation_report_to_json(const FreeRelationReport& r) {
    Json j{{"related", r.related}};
    if (!r.related) {
        j["failure"] = r.failure;
        j["residual"] = r.residual;
    } else if (r.witness) {
        j["witness"] = qelement_to_json(*r.witness);
    }
    return j;
}

Json check_report_to_json(const CheckReport& r) {
    Json failures = Json::array();
    for (const auto& f : r.failures)
        failures.push_back(Json{{"law", f.law},
                                {"detail", f.detail},
                                {"residual", f.residual}});
    return Json{{"samples", r.samples},
                {"ok", r.ok()},
                {"worst_residual", r.worst_residual},
                {"failures", std::move(failures)}};
}

Json clp_report_to_json(const ClpReport& r, const Structure& x,
                        const Structure& y) {
    Json surviving = Json::array();
    for (const Assignment& a : r.surviving)
        surviving.push_back(Json{{"relation", x.signature().name(a.rel)},
                                 {"x_tuple", x.relation(a.rel)[a.xt]},
                                 {"y_tuple", y.relation(a.rel)[a.yt]}});
    Json j{{"accepted", r.accepted},
           {"surviving", std::move(surviving)},
           {"lp_solves", r.lp_solves},
           {"shortcut_hits", r.shortcut_hits}};
    if (r.emptied)
        j["emptied"] = Json{{"relation", x.signature().name(r.emptied->first)},
                            {"x_tuple", x.relation(r.emptied->first)[r.emptied->second]}};
    return j;
}

Json consistency_report_to_json(const ConsistencyReport& r) {
    return Json{{"consistent", r.consistent},
                {"family_size", r.family_size},
                {"rounds", r.rounds}};
}

Json sdp_report_to_json(const SdpReport& r) {
    Json j{{"status", r.status == SdpStatus::feasible     ? "feasible"
                      : r.status == SdpStatus::infeasible ? "infeasible"
                                                           : "inconclusive"},
           {"iterations", r.iterations},
           {"integral_shortcut", r.integral_shortcut}};
    if (r.witness) {
        Json gram = Json::array();
        for (int a = 0; a < r.witness->gram.rows(); ++a) {
            Json row = Json::array();
            for (int b = 0; b < r.witness->gram.cols(); ++b)
                row.push_back(r.witness->gram(a, b));
            gram.push_back(std::move(row));
        }
        Json v = Json::array();
        for (int k = 0; k < r.witness->v.size(); ++k)
            v.push_back(r.witness->v(k));
        j["witness"] = Json{{"max_residual", r.witness->max_residual},
                            {"min_eigenvalue", r.witness->min_eigenvalue},
                            {"gram", std::move(gram)},
                            {"v", std::move(v)}};
    }
    if (r.certificate) {
        j["certificate"] =
            Json{{"proven_margin", r.certificate->proven_margin},
                 {"combo_max_eigenvalue", r.certificate->combo_max_eigenvalue},
                 {"combo_max_v_coeff", r.certificate->combo_max_v_coeff},
                 {"rhs_value", r.certificate->rhs_value},
                 {"lambda", r.certificate->lambda}};
    }
    return j;
}

std::string verdict_name(Verdict v) {
    switch (v) {
    case Verdict::advantage:
        return "advantage";
    case Verdict::no_advantage:
        return "no-advantage";
    default:
        return "unknown";
    }
}

Json advantage_to_json(const AdvantageVerdict& v) {
    Json j{{"subject", v.subject},
           {"dimension", v.dimension},
           {"verdict", verdict_name(v.verdict)}};
    if (v.justification)
        j["justification"] =
            Json{{"id", v.justification->id}, {"detail", v.justification->detail}};
    if (v.evidence)
        j["evidence"] = Json{{"arity_bound", v.evidence->arity_bound},
                             {"satisfiable", v.evidence->satisfiable},
                             {"enumeration_capped", v.evidence->enumeration_capped},
                             {"enumeration_sizes", v.evidence->enumeration_sizes}};
    return j;
}

Json dictator_search_to_json(const DictatorSearchResult& r) {
    Json j{{"satisfiable", r.satisfiable},
           {"enumeration_sizes", r.enumeration_sizes}};
    if (r.assignment) {
        Json choice = Json::array();
        for (const auto& per_arity : r.assignment->choice) {
            Json indices = Json::array();
            for (int c : per_arity)
                indices.push_back(c + 1);
            choice.push_back(std::move(indices));
        }
        j["assignment"] = Json{{"max_arity", r.assignment->max_arity},
                               {"choice", std::move(choice)}};
    }
    if (!r.conflict.empty()) {
        Json conflict = Json::array();
        for (const MinorIdentity& id : r.conflict) {
            std::vector<int> image;
            for (int i = 0; i < id.pi.source_arity(); ++i)
                image.push_back(id.pi(i) + 1);
            conflict.push_back(Json{{"arity", id.arity},
                                    {"function", id.function},
                                    {"pi", image},
                                    {"minor_function", id.minor_function}});
        }
        j["conflict"] = std::move(conflict);
    }
    return j;
}

} // namespace minionlab
