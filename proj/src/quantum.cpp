#include "minionlab/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace minionlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string tuple_str(const Tuple& t) {
    std::string s = "(";
    for (std::size_t i = 0; i < t.size(); ++i)
        s += (i ? "," : "") + std::to_string(t[i]);
    return s + ")";
}
} // namespace

QElement::QElement(SpaceConfig config, std::vector<Matrix> blocks)
    : config_(config), blocks_(std::move(blocks)) {
    if (config_.dimension < 1)
        throw Error("qelement: dimension must be positive");
    if (blocks_.empty())
        throw Error("qelement: arity must be positive");
    for (auto& b : blocks_) {
        if (b.size() == 0)
            b = Matrix(config_.dimension, 0);
        if (b.rows() != config_.dimension)
            throw Error("qelement: block vectors have wrong dimension");
    }
}

std::vector<int> QElement::essential_coordinates() const {
    std::vector<int> out;
    for (int i = 0; i < arity(); ++i)
        if (essential(i))
            out.push_back(i);
    return out;
}

double QElement::validity_residual() const {
    int total = 0;
    for (const auto& b : blocks_)
        total += static_cast<int>(b.cols());
    if (total != config_.dimension)
        return kInf;
    Matrix concat(config_.dimension, total);
    int at = 0;
    for (const auto& b : blocks_) {
        concat.middleCols(at, b.cols()) = b;
        at += static_cast<int>(b.cols());
    }
    double r = orthonormality_residual(concat);
    if (config_.field == Field::real)
        for (const auto& b : blocks_)
            if (b.cols() > 0)
                r = std::max(r, b.imag().cwiseAbs().maxCoeff());
    return r;
}

QElement q_minor(const QElement& q, const MinorMap& pi) {
    if (pi.source_arity() != q.arity())
        throw Error("q_minor: arity mismatch");
    std::vector<Matrix> blocks(pi.target_arity());
    auto pre = pi.preimages();
    for (int j = 0; j < pi.target_arity(); ++j) {
        int cols = 0;
        for (int i : pre[j])
            cols += static_cast<int>(q.block(i).cols());
        Matrix b(q.dimension(), cols);
        int at = 0;
        for (int i : pre[j]) {
            b.middleCols(at, q.block(i).cols()) = q.block(i);
            at += static_cast<int>(q.block(i).cols());
        }
        blocks[j] = std::move(b);
    }
    return QElement(q.config(), std::move(blocks));
}

double q_distance(const QElement& a, const QElement& b) {
    if (a.arity() != b.arity() || a.dimension() != b.dimension())
        return kInf;
    double r = 0.0;
    for (int i = 0; i < a.arity(); ++i)
        r = std::max(r, op_norm(a.block_projector(i) - b.block_projector(i)));
    return r;
}

QElement sample_qelement(Rng& rng, int arity, SpaceConfig config) {
    Matrix basis = random_unitary(rng, config.dimension, config.field);
    std::vector<std::vector<int>> assignment(arity);
    for (int v = 0; v < config.dimension; ++v)
        assignment[rng.uniform_int(0, arity - 1)].push_back(v);
    std::vector<Matrix> blocks(arity);
    for (int i = 0; i < arity; ++i) {
        Matrix b(config.dimension, static_cast<int>(assignment[i].size()));
        for (std::size_t k = 0; k < assignment[i].size(); ++k)
            b.col(static_cast<int>(k)) = basis.col(assignment[i][k]);
        blocks[i] = std::move(b);
    }
    return QElement(config, std::move(blocks));
}

MinionHandle<QElement> quantum_minion(SpaceConfig config, int max_arity) {
    MinionHandle<QElement> h;
    h.name = std::string("quantum-d") + std::to_string(config.dimension) +
             (config.field == Field::real ? "-real" : "-complex");
    h.arity = [](const QElement& q) { return q.arity(); };
    h.membership_residual = [](const QElement& q) { return q.validity_residual(); };
    h.minor = q_minor;
    h.sample = [config](Rng& rng, int arity) {
        return sample_qelement(rng, arity, config);
    };
    h.distance = q_distance;
    h.equality_tol = 1e-9;
    h.max_sample_arity = max_arity;
    return h;
}

// ---------------------------------------------------------------------------
// Certificates.
// ---------------------------------------------------------------------------

std::vector<std::string> CertificateReport::failed_conditions() const {
    std::vector<std::string> out;
    if (projector.residual > tol)
        out.push_back("projector");
    if (q1.residual > tol)
        out.push_back("Q1");
    if (q2_checked && q2.residual > tol)
        out.push_back("Q2");
    if (q3.residual > tol)
        out.push_back("Q3");
    return out;
}

CertificateReport verify_certificate(const Certificate& c, double tol,
                                     bool check_q2) {
    const int nx = c.x.domain_size();
    const int ny = c.y.domain_size();
    const int d = c.config.dimension;
    if (!c.x.similar_to(c.y))
        throw Error("verify_certificate: structures are not similar");
    if (static_cast<int>(c.p.size()) != nx)
        throw Error("verify_certificate: wrong number of matrix rows");
    for (const auto& row : c.p) {
        if (static_cast<int>(row.size()) != ny)
            throw Error("verify_certificate: wrong number of matrix columns");
        for (const auto& m : row) {
            if (m.rows() != d || m.cols() != d)
                throw Error("verify_certificate: matrix has wrong shape");
            if (!is_hermitian(m, tol))
                throw Error("verify_certificate: matrix is not self-adjoint "
                            "within tolerance");
        }
    }

    CertificateReport rep;
    rep.tol = tol;
    rep.q2_checked = check_q2;

    auto track = [](ConditionResidual& cr, double r, const std::string& label) {
        if (r > cr.residual) {
            cr.residual = r;
            cr.worst_case = label;
        }
    };

    for (int x = 0; x < nx; ++x) {
        Matrix sum = Matrix::Zero(d, d);
        for (int y = 0; y < ny; ++y) {
            const Matrix& m = c.p[x][y];
            track(rep.projector, op_norm(m * m - m),
                  std::to_string(x) + ":" + std::to_string(y));
            sum += m;
            for (int yp = 0; yp < ny; ++yp)
                if (yp != y)
                    track(rep.pairwise, op_norm(m * c.p[x][yp]),
                          std::to_string(x) + ":" + std::to_string(y) + "," +
                              std::to_string(yp));
        }
        track(rep.q1, op_norm(sum - Matrix::Identity(d, d)), std::to_string(x));
    }

    for (int r = 0; r < c.x.signature().size(); ++r) {
        const int ar = c.x.signature().arity(r);
        const auto& yrel = c.y.relation(r);
        for (const Tuple& xt : c.x.relation(r)) {
            if (check_q2) {
                for (int i = 0; i < ar; ++i)
                    for (int j = i; j < ar; ++j)
                        for (int y = 0; y < ny; ++y)
                            for (int yp = 0; yp < ny; ++yp) {
                                const Matrix& a = c.p[xt[i]][y];
                                const Matrix& b = c.p[xt[j]][yp];
                                track(rep.q2, op_norm(a * b - b * a),
                                      c.x.signature().name(r) + tuple_str(xt) +
                                          " i=" + std::to_string(i + 1) +
                                          " j=" + std::to_string(j + 1) + " y=" +
                                          std::to_string(y) + " y'=" +
                                          std::to_string(yp));
                            }
            }
            // ordered products over value tuples outside the relation
            Tuple yt(ar, 0);
            while (true) {
                if (!std::binary_search(yrel.begin(), yrel.end(), yt)) {
                    Matrix prod = c.p[xt[0]][yt[0]];
                    for (int i = 1; i < ar; ++i)
                        prod = prod * c.p[xt[i]][yt[i]];
                    track(rep.q3, op_norm(prod),
                          c.x.signature().name(r) + tuple_str(xt) + "->" +
                              tuple_str(yt));
                }
                int pos = ar - 1;
                while (pos >= 0 && ++yt[pos] == ny)
                    yt[pos--] = 0;
                if (pos < 0)
                    break;
            }
        }
    }
    return rep;
}

Certificate cert_from_classical(const Homomorphism& f, SpaceConfig config) {
    if (!is_valid_homomorphism(f))
        throw Error("cert_from_classical: map is not a homomorphism");
    const int d = config.dimension;
    std::vector<std::vector<Matrix>> p(
        f.source.domain_size(),
        std::vector<Matrix>(f.target.domain_size(), Matrix::Zero(d, d)));
    for (int x = 0; x < f.source.domain_size(); ++x)
        p[x][f.map[x]] = Matrix::Identity(d, d);
    return Certificate{f.source, f.target, config, std::move(p)};
}

std::vector<QElement> cert_to_free_hom(const Certificate& c, double tol) {
    CertificateReport rep = verify_certificate(c, tol);
    if (!rep.pass())
        throw Error("cert_to_free_hom: certificate fails verification");
    std::vector<QElement> f;
    f.reserve(c.p.size());
    for (const auto& row : c.p) {
        std::vector<Matrix> blocks;
        blocks.reserve(row.size());
        for (const auto& m : row)
            blocks.push_back(range_basis(m));
        f.emplace_back(c.config, std::move(blocks));
    }
    return f;
}

FreeRelationReport free_relation_test(const std::vector<QElement>& tuple,
                                      const Structure& y, int rel, double tol) {
    if (rel < 0 || rel >= y.signature().size())
        throw Error("free_relation_test: unknown relation symbol");
    const int ar = y.signature().arity(rel);
    if (static_cast<int>(tuple.size()) != ar)
        throw Error("free_relation_test: tuple length differs from arity");
    const int ny = y.domain_size();
    for (const QElement& q : tuple) {
        if (q.arity() != ny)
            throw Error("free_relation_test: element arity differs from |Y|");
        if (q.validity_residual() > tol * 10)
            throw Error("free_relation_test: invalid decomposition element");
    }
    const auto& yrel = y.relation(rel);
    FreeRelationReport rep;

    if (yrel.empty()) {
        rep.failure = "target relation is empty";
        return rep;
    }

    const SpaceConfig config = tuple[0].config();
    std::vector<std::vector<Matrix>> proj(ar);
    for (int i = 0; i < ar; ++i)
        for (int yv = 0; yv < ny; ++yv)
            proj[i].push_back(tuple[i].block_projector(yv));

    for (int i = 0; i < ar; ++i)
        for (int j = i + 1; j < ar; ++j)
            for (int yv = 0; yv < ny; ++yv)
                for (int yp = 0; yp < ny; ++yp) {
                    double r = op_norm(proj[i][yv] * proj[j][yp] -
                                       proj[j][yp] * proj[i][yv]);
                    if (r > tol) {
                        rep.failure = "commutator at positions " +
                                      std::to_string(i + 1) + "," +
                                      std::to_string(j + 1) + " values " +
                                      std::to_string(yv) + "," + std::to_string(yp);
                        rep.residual = r;
                        return rep;
                    }
                }

    Tuple yt(ar, 0);
    std::vector<Matrix> witness_blocks;
    while (true) {
        Matrix prod = proj[0][yt[0]];
        for (int i = 1; i < ar; ++i)
            prod = prod * proj[i][yt[i]];
        if (std::binary_search(yrel.begin(), yrel.end(), yt)) {
            // collected later in relation order
        } else {
            double r = op_norm(prod);
            if (r > tol) {
                rep.failure = "product over non-related tuple " + tuple_str(yt);
                rep.residual = r;
                return rep;
            }
        }
        int pos = ar - 1;
        while (pos >= 0 && ++yt[pos] == ny)
            yt[pos--] = 0;
        if (pos < 0)
            break;
    }

    for (const Tuple& t : yrel) {
        Matrix prod = proj[0][t[0]];
        for (int i = 1; i < ar; ++i)
            prod = prod * proj[i][t[i]];
        witness_blocks.push_back(range_basis(prod));
    }
    QElement witness(config, std::move(witness_blocks));
    if (double r = witness.validity_residual(); r > tol * 10) {
        rep.failure = "assembled witness is not a decomposition";
        rep.residual = r;
        return rep;
    }

    for (int i = 0; i < ar; ++i) {
        std::vector<int> image(yrel.size());
        for (std::size_t k = 0; k < yrel.size(); ++k)
            image[k] = yrel[k][i];
        MinorMap pi(static_cast<int>(yrel.size()), ny, std::move(image));
        double r = q_distance(q_minor(witness, pi), tuple[i]);
        if (r > tol * 10) {
            rep.failure = "witness minor differs at position " + std::to_string(i + 1);
            rep.residual = r;
            return rep;
        }
    }

    rep.related = true;
    rep.witness = std::move(witness);
    return rep;
}

Certificate free_hom_to_cert(const std::vector<QElement>& f, const Structure& x,
                             const Structure& y, double tol) {
    if (static_cast<int>(f.size()) != x.domain_size())
        throw Error("free_hom_to_cert: one element per source vertex required");
    if (!x.similar_to(y))
        throw Error("free_hom_to_cert: structures are not similar");
    for (const QElement& q : f)
        if (q.arity() != y.domain_size() || q.validity_residual() > tol * 10)
            throw Error("free_hom_to_cert: invalid decomposition element");

    for (int r = 0; r < x.signature().size(); ++r) {
        for (const Tuple& xt : x.relation(r)) {
            std::vector<QElement> tuple;
            for (int v : xt)
                tuple.push_back(f[v]);
            FreeRelationReport rep = free_relation_test(tuple, y, r, tol);
            if (!rep.related)
                throw Error("free_hom_to_cert: tuple " + x.signature().name(r) +
                            tuple_str(xt) + " fails the relation test: " +
                            rep.failure);
        }
    }

    const SpaceConfig config = f[0].config();
    std::vector<std::vector<Matrix>> p(x.domain_size());
    for (int v = 0; v < x.domain_size(); ++v)
        for (int yv = 0; yv < y.domain_size(); ++yv)
            p[v].push_back(f[v].block_projector(yv));
    return Certificate{x, y, config, std::move(p)};
}

// ---------------------------------------------------------------------------
// Dimension-two selection and the maps out of the quantum minion.
// ---------------------------------------------------------------------------

SpherePoint hopf_map(const Vector& v) {
    if (v.size() != 2)
        throw Error("hopf_map: requires a 2-dimensional vector");
    double norm = v.norm();
    if (norm == 0.0)
        throw Error("hopf_map: zero vector");
    std::complex<double> x = v(0) / norm;
    std::complex<double> y = v(1) / norm;
    return {std::norm(x) - std::norm(y), 2.0 * x * std::conj(y)};
}

bool sphere_in_upper_part(const SpherePoint& p) {
    if (p.t > 0)
        return true;
    if (p.t < 0)
        return false;
    if (p.z.real() > 0)
        return true;
    if (p.z.real() < 0)
        return false;
    // on the circle t = 0, Re z = 0 only z = +-i remain; select z = i
    return p.z.imag() > 0;
}

bool HopfPartition::contains(const Vector& v) const {
    if (config.dimension != 2)
        throw Error("hopf partition: defined for dimension 2");
    if (v.size() != 2 || v.norm() == 0.0)
        throw Error("hopf partition: nonzero 2-dimensional vector required");
    if (config.field == Field::complex)
        return sphere_in_upper_part(hopf_map(v));
    // real case: partition lines by their angle in [0, pi), selecting
    // [0, pi/2); orthogonal lines differ by pi/2
    double theta = std::atan2(v(1).real(), v(0).real());
    if (theta < 0)
        theta += M_PI;
    if (theta >= M_PI)
        theta -= M_PI;
    return theta < M_PI / 2;
}

DictatorElement xi_dictator(const QElement& q, double tol) {
    if (q.dimension() > 2)
        throw Error("xi_dictator: requires dimension at most 2");
    if (q.validity_residual() > tol)
        throw Error("xi_dictator: invalid decomposition element");
    auto ess = q.essential_coordinates();
    if (ess.size() == 1)
        return {q.arity(), ess[0]};
    // two essential coordinates, both one-dimensional; pick by the partition
    HopfPartition partition{q.config()};
    int i = ess[0], j = ess[1];
    return {q.arity(), partition.contains(q.block(i).col(0)) ? i : j};
}

SdpElement xi_sdp(const QElement& q, const Vector& probe, double tol) {
    if (probe.size() != q.dimension())
        throw Error("xi_sdp: probe dimension mismatch");
    if (std::abs(probe.norm() - 1.0) > tol)
        throw Error("xi_sdp: probe vector must have unit norm");
    if (q.validity_residual() > tol)
        throw Error("xi_sdp: invalid decomposition element");
    Matrix out = Matrix::Zero(q.arity(), q.dimension());
    for (int i = 0; i < q.arity(); ++i) {
        const Matrix& b = q.block(i);
        if (b.cols() > 0)
            out.row(i) = (b * (b.adjoint() * probe)).transpose();
    }
    Field field = q.config().field;
    return {field, std::move(out)};
}

SkeletalElement xi_skeletal(const QElement& q, double tol) {
    if (q.validity_residual() > tol)
        throw Error("xi_skeletal: invalid decomposition element");
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(q.arity(), q.dimension());
    int at = 0;
    for (int i = 0; i < q.arity(); ++i)
        for (int k = 0; k < q.block(i).cols(); ++k)
            out(i, at++) = 1.0;
    return {std::move(out)};
}

} // namespace minionlab
