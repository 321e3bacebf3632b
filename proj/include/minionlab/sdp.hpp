#pragma once

#include "minionlab/structures.hpp"

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace minionlab {

/// One linear equality on (Gram matrix, scalar weights): <A, G> + c.v = b,
/// with A sparse symmetric and c sparse. Tags identify the constraint family
/// so certificates stay auditable.
struct SdpConstraint {
    enum class Family { anchor_norm, tuple_sum, marginal_anchor, gram_product };

    Family family;
    int rel = -1;
    int xt = -1;       // tuple index in R^X
    int i = -1, j = -1;  // positions within the tuple (0-based)
    int y = -1, yp = -1;

    /// Entries (a, b, coeff) with a <= b; off-diagonal entries act on both
    /// symmetric positions.
    std::vector<std::tuple<int, int, double>> gram_terms;
    std::vector<std::pair<int, double>> v_terms;
    double rhs = 0.0;
};

/// The relaxation system over the index set {anchor} + constrained (x, y)
/// pairs plus one scalar per (relation, X-tuple, Y-tuple).
struct SdpSystem {
    int gram_size = 0;
    int num_v = 0;
    std::vector<SdpConstraint> constraints;
    // gram index per (x, y); -1 when x occurs in no relation tuple
    std::vector<std::vector<int>> u_index;
    std::map<std::tuple<int, int, int>, int> v_index;  // (rel, xt, yt) -> v var
};

struct SdpCaps {
    std::size_t max_index_set = 400;
};

SdpSystem build_sdp_system(const Structure& x, const Structure& y,
                           const SdpCaps& caps = {});

struct SdpWitness {
    Eigen::MatrixXd gram;
    Eigen::VectorXd v;
    double max_residual = 0.0;
    double min_eigenvalue = 0.0;
};

/// Farkas-style refutation: multipliers whose aggregate has a negative
/// semidefinite Gram part, nonpositive scalar part and positive rhs, proving
/// the system empty. `proven_margin` is the slack left after bounding the
/// aggregation error rigorously.
struct SdpFarkas {
    std::vector<double> lambda;
    double combo_max_eigenvalue = 0.0;
    double combo_max_v_coeff = 0.0;
    double rhs_value = 0.0;
    double proven_margin = 0.0;
};

enum class SdpStatus { feasible, infeasible, inconclusive };

struct SdpReport {
    SdpStatus status = SdpStatus::inconclusive;
    std::optional<SdpWitness> witness;
    std::optional<SdpFarkas> certificate;
    int iterations = 0;
    bool integral_shortcut = false;
};

struct SdpSolveConfig {
    int max_iterations = 20000;
    std::uint64_t hom_budget = 500'000;
    bool try_integral_shortcut = true;
};

/// Max violation over all constraints at the given point.
double sdp_residual(const SdpSystem& sys, const Eigen::MatrixXd& gram,
                    const Eigen::VectorXd& v);

/// Independent validation of a Farkas certificate; returns the rigorously
/// proven margin (positive means the system is infeasible).
double check_sdp_farkas(const SdpSystem& sys, const std::vector<double>& lambda);

/// Decides feasibility of the relaxation for the pair (X, Y): a verified
/// witness within tol, a verified refutation, or inconclusive. The solver
/// is alternating projections between the affine span and the product of
/// the semidefinite cone with the nonnegative orthant; a homomorphism found
/// within budget supplies the exact integral witness directly.
SdpReport sdp_relax(const Structure& x, const Structure& y, double tol,
                    const SdpCaps& caps = {}, const SdpSolveConfig& solve = {});

} // namespace minionlab
