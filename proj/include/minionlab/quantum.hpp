#pragma once

#include "minionlab/linalg.hpp"
#include "minionlab/minions.hpp"
#include "minionlab/minor_map.hpp"
#include "minionlab/structures.hpp"

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace minionlab {

struct SpaceConfig {
    Field field = Field::complex;
    int dimension = 2;
};

/// An ordered orthogonal decomposition of a d-dimensional space: one block
/// of basis vectors per coordinate, possibly empty, whose concatenation is
/// an orthonormal basis of the whole space. Subspaces are kept as explicit
/// bases so that minors are exact concatenations; projectors are derived
/// views.
class QElement {
public:
    QElement(SpaceConfig config, std::vector<Matrix> blocks);

    const SpaceConfig& config() const { return config_; }
    int arity() const { return static_cast<int>(blocks_.size()); }
    int dimension() const { return config_.dimension; }
    const Matrix& block(int i) const { return blocks_[i]; }
    Matrix block_projector(int i) const { return projector_onto(blocks_[i]); }
    bool essential(int i) const { return blocks_[i].cols() > 0; }
    std::vector<int> essential_coordinates() const;

    /// Deviation of the concatenated basis from an orthonormal basis of the
    /// whole space (infinite when the vector count is not d).
    double validity_residual() const;

private:
    SpaceConfig config_;
    std::vector<Matrix> blocks_;
};

/// Block j of the result concatenates the blocks in the preimage of j, in
/// ascending source order; this realizes the subspace-sum minor exactly.
QElement q_minor(const QElement& q, const MinorMap& pi);

/// Projector distance, maximized over coordinates.
double q_distance(const QElement& a, const QElement& b);

QElement sample_qelement(Rng& rng, int arity, SpaceConfig config);

MinionHandle<QElement> quantum_minion(SpaceConfig config, int max_arity = 6);

// ---------------------------------------------------------------------------
// Certificates for quantum homomorphisms.
// ---------------------------------------------------------------------------

/// A family of d x d self-adjoint matrices p[x][y] claimed to witness a
/// quantum homomorphism X -> Y.
struct Certificate {
    Structure x;
    Structure y;
    SpaceConfig config;
    std::vector<std::vector<Matrix>> p;  // indexed [x][y]
};

struct ConditionResidual {
    double residual = 0.0;
    std::string worst_case;
};

/// Outcome of checking the completeness / commutation / vanishing-product
/// conditions, each in operator norm. The pairwise-product check is the
/// equivalent reformulation of completeness and is reported separately.
struct CertificateReport {
    ConditionResidual projector;  // p^2 = p for every entry
    ConditionResidual q1;
    ConditionResidual q2;
    ConditionResidual q3;
    ConditionResidual pairwise;
    bool q2_checked = true;
    double tol = 0.0;

    bool pass() const {
        return projector.residual <= tol && q1.residual <= tol &&
               (!q2_checked || q2.residual <= tol) && q3.residual <= tol;
    }
    std::vector<std::string> failed_conditions() const;
};

/// check_q2 = false gives the verifier mode for the commutation-free variant
/// of the definition used for graphs.
CertificateReport verify_certificate(const Certificate& c, double tol,
                                     bool check_q2 = true);

/// Classical embedding: p[x][y] is the identity when y = f(x), zero
/// otherwise.
Certificate cert_from_classical(const Homomorphism& f, SpaceConfig config);

/// One decomposition element per source vertex: coordinate y of the image of
/// x carries the range of p[x][y].
std::vector<QElement> cert_to_free_hom(const Certificate& c, double tol);

struct FreeRelationReport {
    bool related = false;
    std::optional<QElement> witness;
    std::string failure;
    double residual = 0.0;
};

/// Decides whether a tuple of decomposition elements (arity |Y|) lies in the
/// relation of the free structure for symbol `rel`: all cross commutators
/// must vanish, products over non-related value tuples must vanish, and the
/// witness assembled from the commuting products must reproduce every
/// component under the coordinate minor maps.
FreeRelationReport free_relation_test(const std::vector<QElement>& tuple,
                                      const Structure& y, int rel, double tol);

/// Converse construction: projectors onto the coordinates of each f(x).
/// Throws when a constrained tuple fails the relation test, naming it.
Certificate free_hom_to_cert(const std::vector<QElement>& f, const Structure& x,
                             const Structure& y, double tol);

// ---------------------------------------------------------------------------
// The two-dimensional selection machinery and the maps out of the quantum
// minion.
// ---------------------------------------------------------------------------

struct SpherePoint {
    double t;
    std::complex<double> z;
};

/// (x, y) -> (x conj x - y conj y, 2 x conj y) applied to the normalized
/// input. Orthogonal inputs land on antipodal points of the unit sphere.
SpherePoint hopf_map(const Vector& v);

/// The antipodal part U of the sphere: t > 0, or t = 0 and Re z > 0, or
/// t = 0 and z = i.
bool sphere_in_upper_part(const SpherePoint& p);

/// Membership predicate of the selected class C: for any two nonzero
/// orthogonal vectors exactly one lies in C. Complex spaces use the
/// preimage of U under the sphere map; real spaces use the line-angle
/// partition with angles in [0, pi/2) selected.
struct HopfPartition {
    SpaceConfig config;

    bool contains(const Vector& v) const;
};

/// The distinguished-coordinate map into the dictator minion, defined for
/// dimension at most 2: the unique essential coordinate, or among two the
/// one whose stored representative vector lies in the selected class.
DictatorElement xi_dictator(const QElement& q, double tol = 1e-9);

/// Row i holds the coordinates of the projection of the probe onto block i.
SdpElement xi_sdp(const QElement& q, const Vector& probe, double tol = 1e-9);

/// One exact unit column e_{i} per stored basis vector of block i, in
/// block-then-index order.
SkeletalElement xi_skeletal(const QElement& q, double tol = 1e-9);

} // namespace minionlab
