#include "minionlab/sdp.hpp"

#include "minionlab/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace minionlab {

namespace {

// Packed symmetric coordinates with off-diagonal weight sqrt(2), so that the
// packed Euclidean inner product equals the Frobenius one and both
// projections act in the same metric.
struct Packing {
    int n;

    int size() const { return n * (n + 1) / 2; }
    int at(int a, int b) const {
        if (a > b)
            std::swap(a, b);
        return a * n - a * (a - 1) / 2 + (b - a);
    }

    Eigen::VectorXd pack(const Eigen::MatrixXd& g) const {
        Eigen::VectorXd s(size());
        const double r2 = std::sqrt(2.0);
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b)
                s(at(a, b)) = a == b ? g(a, a) : g(a, b) * r2;
        return s;
    }

    Eigen::MatrixXd unpack(const Eigen::VectorXd& s) const {
        Eigen::MatrixXd g(n, n);
        const double r2 = std::sqrt(2.0);
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) {
                double val = a == b ? s(at(a, b)) : s(at(a, b)) / r2;
                g(a, b) = val;
                g(b, a) = val;
            }
        return g;
    }
};

} // namespace

SdpSystem build_sdp_system(const Structure& x, const Structure& y,
                           const SdpCaps& caps) {
    if (!x.similar_to(y))
        throw Error("sdp: structures are not similar");
    SdpSystem sys;
    const int nx = x.domain_size();
    const int ny = y.domain_size();

    std::vector<bool> constrained(nx, false);
    for (int r = 0; r < x.signature().size(); ++r)
        for (const Tuple& t : x.relation(r))
            for (int v : t)
                constrained[v] = true;

    sys.u_index.assign(nx, std::vector<int>(ny, -1));
    int next = 1;  // 0 is the anchor
    for (int v = 0; v < nx; ++v)
        if (constrained[v])
            for (int w = 0; w < ny; ++w)
                sys.u_index[v][w] = next++;
    sys.gram_size = next;
    if (static_cast<std::size_t>(sys.gram_size) > caps.max_index_set)
        throw Error("sdp: index set cap exceeded");

    for (int r = 0; r < x.signature().size(); ++r) {
        const auto& xrel = x.relation(r);
        const auto& yrel = y.relation(r);
        for (int xt = 0; xt < static_cast<int>(xrel.size()); ++xt)
            for (int yt = 0; yt < static_cast<int>(yrel.size()); ++yt)
                sys.v_index[{r, xt, yt}] = sys.num_v++;
    }

    SdpConstraint anchor;
    anchor.family = SdpConstraint::Family::anchor_norm;
    anchor.gram_terms.push_back({0, 0, 1.0});
    anchor.rhs = 1.0;
    sys.constraints.push_back(std::move(anchor));

    for (int r = 0; r < x.signature().size(); ++r) {
        const auto& xrel = x.relation(r);
        const auto& yrel = y.relation(r);
        const int ar = x.signature().arity(r);
        for (int xt = 0; xt < static_cast<int>(xrel.size()); ++xt) {
            SdpConstraint sum;
            sum.family = SdpConstraint::Family::tuple_sum;
            sum.rel = r;
            sum.xt = xt;
            for (int yt = 0; yt < static_cast<int>(yrel.size()); ++yt)
                sum.v_terms.push_back({sys.v_index.at({r, xt, yt}), 1.0});
            sum.rhs = 1.0;
            sys.constraints.push_back(std::move(sum));

            for (int i = 0; i < ar; ++i) {
                for (int w = 0; w < ny; ++w) {
                    SdpConstraint c;
                    c.family = SdpConstraint::Family::marginal_anchor;
                    c.rel = r;
                    c.xt = xt;
                    c.i = i;
                    c.y = w;
                    c.gram_terms.push_back(
                        {0, sys.u_index[xrel[xt][i]][w], 1.0});
                    for (int yt = 0; yt < static_cast<int>(yrel.size()); ++yt)
                        if (yrel[yt][i] == w)
                            c.v_terms.push_back(
                                {sys.v_index.at({r, xt, yt}), -1.0});
                    sys.constraints.push_back(std::move(c));
                }
            }

            for (int i = 0; i < ar; ++i) {
                for (int j = i; j < ar; ++j) {
                    for (int w = 0; w < ny; ++w) {
                        for (int wp = (i == j ? w : 0); wp < ny; ++wp) {
                            SdpConstraint c;
                            c.family = SdpConstraint::Family::gram_product;
                            c.rel = r;
                            c.xt = xt;
                            c.i = i;
                            c.j = j;
                            c.y = w;
                            c.yp = wp;
                            int a = sys.u_index[xrel[xt][i]][w];
                            int b = sys.u_index[xrel[xt][j]][wp];
                            c.gram_terms.push_back(
                                {std::min(a, b), std::max(a, b), 1.0});
                            for (int yt = 0; yt < static_cast<int>(yrel.size());
                                 ++yt)
                                if (yrel[yt][i] == w && yrel[yt][j] == wp)
                                    c.v_terms.push_back(
                                        {sys.v_index.at({r, xt, yt}), -1.0});
                            sys.constraints.push_back(std::move(c));
                        }
                    }
                }
            }
        }
    }
    return sys;
}

namespace {

double constraint_value(const SdpConstraint& c, const Eigen::MatrixXd& gram,
                        const Eigen::VectorXd& v) {
    double val = 0.0;
    for (auto [a, b, coeff] : c.gram_terms)
        val += coeff * gram(a, b);
    for (auto [idx, coeff] : c.v_terms)
        val += coeff * v(idx);
    return val;
}

} // namespace

double sdp_residual(const SdpSystem& sys, const Eigen::MatrixXd& gram,
                    const Eigen::VectorXd& v) {
    double r = 0.0;
    for (const auto& c : sys.constraints)
        r = std::max(r, std::abs(constraint_value(c, gram, v) - c.rhs));
    return r;
}

double check_sdp_farkas(const SdpSystem& sys, const std::vector<double>& lambda) {
    if (lambda.size() != sys.constraints.size())
        throw Error("sdp farkas: one multiplier per constraint required");
    Eigen::MatrixXd combo = Eigen::MatrixXd::Zero(sys.gram_size, sys.gram_size);
    Eigen::VectorXd cvec = Eigen::VectorXd::Zero(sys.num_v);
    double rhs = 0.0;
    for (std::size_t k = 0; k < lambda.size(); ++k) {
        const auto& c = sys.constraints[k];
        for (auto [a, b, coeff] : c.gram_terms) {
            if (a == b) {
                combo(a, a) += lambda[k] * coeff;
            } else {
                combo(a, b) += lambda[k] * coeff / 2.0;
                combo(b, a) += lambda[k] * coeff / 2.0;
            }
        }
        for (auto [idx, coeff] : c.v_terms)
            cvec(idx) += lambda[k] * coeff;
        rhs += lambda[k] * c.rhs;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(combo);
    double eig_max = es.eigenvalues().maxCoeff();
    double pos_v = cvec.cwiseMax(0.0).sum();

    // every feasible point has trace(G) <= gram_size and each v in [0, 1],
    // which bounds the aggregated functional from above
    double bound = std::max(eig_max, 0.0) * sys.gram_size + pos_v;
    return rhs - bound;
}

SdpReport sdp_relax(const Structure& x, const Structure& y, double tol,
                    const SdpCaps& caps, const SdpSolveConfig& solve) {
    SdpSystem sys = build_sdp_system(x, y, caps);
    SdpReport report;

    if (solve.try_integral_shortcut) {
        HomSearchResult hom = find_homomorphism(x, y, solve.hom_budget);
        if (hom.status == HomStatus::found) {
            const auto& map = hom.hom->map;
            Eigen::VectorXd w = Eigen::VectorXd::Zero(sys.gram_size);
            w(0) = 1.0;
            for (int v = 0; v < x.domain_size(); ++v)
                if (sys.u_index[v][map[v]] >= 0)
                    w(sys.u_index[v][map[v]]) = 1.0;
            Eigen::VectorXd vv = Eigen::VectorXd::Zero(sys.num_v);
            for (int r = 0; r < x.signature().size(); ++r) {
                const auto& xrel = x.relation(r);
                const auto& yrel = y.relation(r);
                for (int xt = 0; xt < static_cast<int>(xrel.size()); ++xt) {
                    Tuple image(xrel[xt].size());
                    for (std::size_t i = 0; i < image.size(); ++i)
                        image[i] = map[xrel[xt][i]];
                    auto it = std::lower_bound(yrel.begin(), yrel.end(), image);
                    vv(sys.v_index.at(
                        {r, xt, static_cast<int>(it - yrel.begin())})) = 1.0;
                }
            }
            SdpWitness witness;
            witness.gram = w * w.transpose();
            witness.v = vv;
            witness.max_residual = sdp_residual(sys, witness.gram, witness.v);
            witness.min_eigenvalue = 0.0;
            report.status = SdpStatus::feasible;
            report.witness = std::move(witness);
            report.integral_shortcut = true;
            return report;
        }
    }

    // alternating projections between the affine span of the constraints and
    // the cone (PSD gram) x (nonnegative weights)
    Packing pk{sys.gram_size};
    const int gvars = pk.size();
    const int nvars = gvars + sys.num_v;
    const int rows = static_cast<int>(sys.constraints.size());
    const double r2 = std::sqrt(2.0);

    Eigen::MatrixXd amat = Eigen::MatrixXd::Zero(rows, nvars);
    Eigen::VectorXd brhs(rows);
    for (int k = 0; k < rows; ++k) {
        const auto& c = sys.constraints[k];
        for (auto [a, b, coeff] : c.gram_terms)
            amat(k, pk.at(a, b)) += a == b ? coeff : coeff / r2;
        for (auto [idx, coeff] : c.v_terms)
            amat(k, gvars + idx) += coeff;
        brhs(k) = c.rhs;
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(amat);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod_t(
        amat.transpose());

    auto project_affine = [&](const Eigen::VectorXd& s) -> Eigen::VectorXd {
        return s - cod.solve(amat * s - brhs);
    };
    auto project_cone = [&](const Eigen::VectorXd& s, double* min_eig) {
        Eigen::MatrixXd g = pk.unpack(s.head(gvars));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
        if (min_eig)
            *min_eig = es.eigenvalues().minCoeff();
        Eigen::MatrixXd gp = es.eigenvectors() *
                             es.eigenvalues().cwiseMax(0.0).asDiagonal() *
                             es.eigenvectors().transpose();
        Eigen::VectorXd out(nvars);
        out.head(gvars) = pk.pack(gp);
        out.tail(sys.num_v) = s.tail(sys.num_v).cwiseMax(0.0);
        return out;
    };

    auto try_farkas = [&](const Eigen::VectorXd& gap) -> bool {
        Eigen::VectorXd lam = cod_t.solve(gap);
        std::vector<double> lambda(lam.data(), lam.data() + lam.size());
        double rhs_value = 0.0;
        for (int k = 0; k < rows; ++k)
            rhs_value += lambda[k] * sys.constraints[k].rhs;
        if (rhs_value <= 0)
            return false;
        for (auto& l : lambda)
            l /= rhs_value;
        double margin = check_sdp_farkas(sys, lambda);
        if (margin <= 0)
            return false;
        SdpFarkas cert;
        cert.lambda = std::move(lambda);
        cert.rhs_value = 1.0;
        cert.proven_margin = margin;
        {
            Eigen::MatrixXd combo =
                Eigen::MatrixXd::Zero(sys.gram_size, sys.gram_size);
            Eigen::VectorXd cvec = Eigen::VectorXd::Zero(sys.num_v);
            for (int k = 0; k < rows; ++k) {
                const auto& c = sys.constraints[k];
                for (auto [a, b, coeff] : c.gram_terms) {
                    double val = cert.lambda[k] * coeff / (a == b ? 1.0 : 2.0);
                    combo(a, b) += val;
                    if (a != b)
                        combo(b, a) += val;
                }
                for (auto [idx, coeff] : c.v_terms)
                    cvec(idx) += cert.lambda[k] * coeff;
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(combo);
            cert.combo_max_eigenvalue = es.eigenvalues().maxCoeff();
            cert.combo_max_v_coeff = sys.num_v ? cvec.maxCoeff() : 0.0;
        }
        report.certificate = std::move(cert);
        report.status = SdpStatus::infeasible;
        return true;
    };

    Eigen::VectorXd s = Eigen::VectorXd::Zero(nvars);
    s.head(gvars) = pk.pack(Eigen::MatrixXd::Identity(sys.gram_size, sys.gram_size) /
                            sys.gram_size);
    double last_gap = -1.0;
    int stalled = 0;
    for (int it = 0; it < solve.max_iterations; ++it) {
        report.iterations = it + 1;
        Eigen::VectorXd sa = project_affine(s);
        double min_eig = 0.0;
        Eigen::VectorXd sc = project_cone(sa, &min_eig);
        double gap = (sa - sc).norm();

        if (it % 10 == 0 || gap < tol) {
            Eigen::MatrixXd g = pk.unpack(sc.head(gvars));
            Eigen::VectorXd v = sc.tail(sys.num_v);
            double res = sdp_residual(sys, g, v);
            if (res <= tol) {
                SdpWitness witness;
                witness.max_residual = res;
                witness.min_eigenvalue =
                    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g)
                        .eigenvalues()
                        .minCoeff();
                witness.gram = std::move(g);
                witness.v = std::move(v);
                report.status = SdpStatus::feasible;
                report.witness = std::move(witness);
                return report;
            }
        }

        if (last_gap >= 0 && std::abs(gap - last_gap) <= 1e-13 * std::max(1.0, gap))
            ++stalled;
        else
            stalled = 0;
        last_gap = gap;
        if (stalled >= 40 && gap > tol) {
            if (try_farkas(sa - sc))
                return report;
            stalled = 0;  // certificate not yet clean, keep iterating
        }
        s = sc;
    }

    // final attempts at both outcomes
    Eigen::VectorXd sa = project_affine(s);
    Eigen::VectorXd sc = project_cone(sa, nullptr);
    Eigen::MatrixXd g = pk.unpack(sc.head(gvars));
    Eigen::VectorXd v = sc.tail(sys.num_v);
    double res = sdp_residual(sys, g, v);
    if (res <= tol) {
        SdpWitness witness;
        witness.max_residual = res;
        witness.min_eigenvalue =
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g).eigenvalues().minCoeff();
        witness.gram = std::move(g);
        witness.v = std::move(v);
        report.status = SdpStatus::feasible;
        report.witness = std::move(witness);
        return report;
    }
    if (try_farkas(sa - sc))
        return report;
    report.status = SdpStatus::inconclusive;
    return report;
}

} // namespace minionlab
