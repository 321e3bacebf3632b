#include "minionlab/minions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace minionlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kSkeletalDenominator = 64;
} // namespace

DictatorElement dictator_minor(const DictatorElement& e, const MinorMap& pi) {
    if (pi.source_arity() != e.arity)
        throw Error("dictator minor: arity mismatch");
    return {pi.target_arity(), pi(e.index)};
}

double sdp_membership_residual(const SdpElement& e) {
    if (e.entries.rows() == 0)
        return kInf;
    Matrix gram = e.entries * e.entries.adjoint();
    double r = std::abs(gram.trace() - std::complex<double>(1.0, 0.0));
    for (int i = 0; i < gram.rows(); ++i)
        for (int j = 0; j < gram.cols(); ++j)
            if (i != j)
                r = std::max(r, std::abs(gram(i, j)));
    if (e.field == Field::real)
        r = std::max(r, e.entries.imag().cwiseAbs().maxCoeff());
    return r;
}

SdpElement sdp_minor(const SdpElement& e, const MinorMap& pi) {
    if (pi.source_arity() != e.arity())
        throw Error("sdp minor: arity mismatch");
    Matrix out = Matrix::Zero(pi.target_arity(), e.entries.cols());
    for (int i = 0; i < pi.source_arity(); ++i)
        out.row(pi(i)) += e.entries.row(i);
    return {e.field, std::move(out)};
}

double sdp_distance(const SdpElement& a, const SdpElement& b) {
    if (a.entries.rows() != b.entries.rows() || a.entries.cols() != b.entries.cols())
        return kInf;
    if (a.entries.size() == 0)
        return 0.0;
    return (a.entries - b.entries).cwiseAbs().maxCoeff();
}

SdpElement theta(const SdpElement& m, double tol) {
    if (sdp_membership_residual(m) > tol)
        throw Error("theta: input violates the complex membership predicate");
    const auto rows = m.entries.rows();
    const auto cols = m.entries.cols();
    Matrix out(rows, 2 * cols);
    out.leftCols(cols) = m.entries.real().cast<std::complex<double>>();
    out.rightCols(cols) = m.entries.imag().cast<std::complex<double>>();
    return {Field::real, std::move(out)};
}

double skeletal_membership_residual(const SkeletalElement& e) {
    const auto& m = e.columns;
    if (m.rows() == 0 || m.cols() == 0)
        return kInf;
    double r = 0.0;
    for (int j = 0; j < m.cols(); ++j) {
        r = std::max(r, -m.col(j).minCoeff());
        r = std::max(r, std::abs(m.col(j).sum() - 1.0));
    }
    for (int i = 0; i < m.rows(); ++i) {
        if (m.row(i).maxCoeff() <= 0.0)
            continue;  // identically zero row: skeletal vacuously
        double best = kInf;
        for (int j = 0; j < m.cols(); ++j) {
            double dev = 0.0;
            for (int k = 0; k < m.rows(); ++k)
                dev = std::max(dev, std::abs(m(k, j) - (k == i ? 1.0 : 0.0)));
            best = std::min(best, dev);
        }
        r = std::max(r, best);
    }
    return r;
}

SkeletalElement skeletal_minor(const SkeletalElement& e, const MinorMap& pi) {
    if (pi.source_arity() != e.arity())
        throw Error("skeletal minor: arity mismatch");
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(pi.target_arity(), e.columns.cols());
    for (int i = 0; i < pi.source_arity(); ++i)
        out.row(pi(i)) += e.columns.row(i);
    return {std::move(out)};
}

double skeletal_distance(const SkeletalElement& a, const SkeletalElement& b) {
    if (a.columns.rows() != b.columns.rows() || a.columns.cols() != b.columns.cols())
        return kInf;
    auto sorted_cols = [](const Eigen::MatrixXd& m) {
        std::vector<std::vector<double>> cols(m.cols());
        for (int j = 0; j < m.cols(); ++j)
            cols[j].assign(m.col(j).data(), m.col(j).data() + m.rows());
        std::sort(cols.begin(), cols.end());
        return cols;
    };
    auto ca = sorted_cols(a.columns);
    auto cb = sorted_cols(b.columns);
    double r = 0.0;
    for (std::size_t j = 0; j < ca.size(); ++j)
        for (std::size_t i = 0; i < ca[j].size(); ++i)
            r = std::max(r, std::abs(ca[j][i] - cb[j][i]));
    return r;
}

DictatorElement sample_dictator(Rng& rng, int arity) {
    return {arity, rng.uniform_int(0, arity - 1)};
}

SdpElement sample_sdp(Rng& rng, int arity, Field field, int max_cols) {
    int cols = rng.uniform_int(1, max_cols);
    int nonzero = rng.uniform_int(1, std::min(arity, cols));

    Matrix unitary = random_unitary(rng, cols, field);
    std::vector<double> weights(nonzero);
    double total = 0.0;
    for (double& w : weights) {
        w = -std::log(1.0 - rng.uniform());
        total += w;
    }

    // scatter the scaled orthonormal rows into distinct row positions
    std::vector<int> pos(arity);
    for (int i = 0; i < arity; ++i)
        pos[i] = i;
    for (int i = arity - 1; i > 0; --i)
        std::swap(pos[i], pos[rng.uniform_int(0, i)]);
    pos.resize(nonzero);
    std::sort(pos.begin(), pos.end());

    Matrix out = Matrix::Zero(arity, cols);
    for (int k = 0; k < nonzero; ++k)
        out.row(pos[k]) = unitary.col(k).adjoint() * std::sqrt(weights[k] / total);
    return {field, std::move(out)};
}

SkeletalElement sample_skeletal(Rng& rng, int arity, int max_extra_cols) {
    std::vector<int> active;
    while (active.empty()) {
        active.clear();
        for (int i = 0; i < arity; ++i)
            if (rng.uniform() < 0.5)
                active.push_back(i);
    }
    std::vector<Eigen::VectorXd> cols;
    for (int i : active) {
        Eigen::VectorXd unit = Eigen::VectorXd::Zero(arity);
        unit(i) = 1.0;
        cols.push_back(unit);
    }
    int extra = rng.uniform_int(0, max_extra_cols);
    for (int e = 0; e < extra; ++e) {
        Eigen::VectorXd col = Eigen::VectorXd::Zero(arity);
        for (int ball = 0; ball < kSkeletalDenominator; ++ball)
            col(active[rng.uniform_int(0, static_cast<int>(active.size()) - 1)]) +=
                1.0 / kSkeletalDenominator;
        cols.push_back(col);
    }
    for (int i = static_cast<int>(cols.size()) - 1; i > 0; --i)
        std::swap(cols[i], cols[rng.uniform_int(0, i)]);

    Eigen::MatrixXd m(arity, static_cast<int>(cols.size()));
    for (int j = 0; j < m.cols(); ++j)
        m.col(j) = cols[j];
    return {std::move(m)};
}

MinionHandle<DictatorElement> dictator_minion() {
    MinionHandle<DictatorElement> h;
    h.name = "dictator";
    h.arity = [](const DictatorElement& e) { return e.arity; };
    h.membership_residual = [](const DictatorElement& e) {
        return e.index >= 0 && e.index < e.arity ? 0.0 : kInf;
    };
    h.minor = dictator_minor;
    h.sample = sample_dictator;
    h.distance = [](const DictatorElement& a, const DictatorElement& b) {
        return a == b ? 0.0 : kInf;
    };
    h.equality_tol = 0.0;
    return h;
}

MinionHandle<SdpElement> sdp_minion(Field field, int max_cols) {
    MinionHandle<SdpElement> h;
    h.name = field == Field::real ? "sdp-real" : "sdp-complex";
    h.arity = [](const SdpElement& e) { return e.arity(); };
    h.membership_residual = sdp_membership_residual;
    h.minor = sdp_minor;
    h.sample = [field, max_cols](Rng& rng, int arity) {
        return sample_sdp(rng, arity, field, max_cols);
    };
    h.distance = sdp_distance;
    h.equality_tol = 1e-9;
    h.max_sample_arity = 5;
    return h;
}

MinionHandle<SkeletalElement> skeletal_minion() {
    MinionHandle<SkeletalElement> h;
    h.name = "skeletal";
    h.arity = [](const SkeletalElement& e) { return e.arity(); };
    h.membership_residual = skeletal_membership_residual;
    h.minor = skeletal_minor;
    h.sample = [](Rng& rng, int arity) { return sample_skeletal(rng, arity); };
    h.distance = skeletal_distance;
    h.equality_tol = 0.0;
    return h;
}

} // namespace minionlab
