#pragma once

#include "minionlab/error.hpp"
#include "minionlab/linalg.hpp"
#include "minionlab/minor_map.hpp"
#include "minionlab/rng.hpp"

#include <functional>
#include <string>
#include <vector>

namespace minionlab {

// ---------------------------------------------------------------------------
// Elements of the concrete linear minions. Minors are always row merges: row
// i of the minored element is the monoid sum over the preimage of i, with an
// empty preimage giving the monoid zero.
// ---------------------------------------------------------------------------

/// Standard unit vector e_{i;l}, stored as (arity, index). 0-based index
/// internally, 1-based in serialized documents.
struct DictatorElement {
    int arity;
    int index;

    bool operator==(const DictatorElement& o) const {
        return arity == o.arity && index == o.index;
    }
};

DictatorElement dictator_minor(const DictatorElement& e, const MinorMap& pi);

/// Matrix element whose gram M M* must be diagonal with trace 1. Entries are
/// stored complex; Field::real additionally requires vanishing imaginary
/// parts.
struct SdpElement {
    Field field;
    Matrix entries;

    int arity() const { return static_cast<int>(entries.rows()); }
};

/// Largest violation of the membership predicate (gram off-diagonal, trace
/// deviation, and stray imaginary parts for real elements).
double sdp_membership_residual(const SdpElement& e);

SdpElement sdp_minor(const SdpElement& e, const MinorMap& pi);

/// Exact-layout distance: max entrywise deviation, infinity on shape
/// mismatch. Column order matters for these elements.
double sdp_distance(const SdpElement& a, const SdpElement& b);

/// The real-part embedding M -> [M_R  M_I]. Input must satisfy the complex
/// membership predicate within tol.
SdpElement theta(const SdpElement& m, double tol);

/// Stochastic matrix with a unit-column witness for every nonzero row.
/// Stored with finitely many explicit columns.
struct SkeletalElement {
    Eigen::MatrixXd columns;

    int arity() const { return static_cast<int>(columns.rows()); }
};

double skeletal_membership_residual(const SkeletalElement& e);

SkeletalElement skeletal_minor(const SkeletalElement& e, const MinorMap& pi);

/// Distance up to column reordering: a row merge keeps column positions but
/// the canonical source of these elements (ordered bases) does not fix an
/// order, so columns are compared as sorted lists.
double skeletal_distance(const SkeletalElement& a, const SkeletalElement& b);

// ---------------------------------------------------------------------------
// Samplers. All are pure functions of the Rng state. The skeletal sampler
// emits dyadic entries (multiples of 1/64) so that row merges and column
// sums are exact in double arithmetic.
// ---------------------------------------------------------------------------

DictatorElement sample_dictator(Rng& rng, int arity);
SdpElement sample_sdp(Rng& rng, int arity, Field field, int max_cols = 4);
SkeletalElement sample_skeletal(Rng& rng, int arity, int max_extra_cols = 3);

// ---------------------------------------------------------------------------
// Handles and the checking harness.
// ---------------------------------------------------------------------------

/// Type-erased view of one minion: membership, minor operation, sampler and
/// a distance for equality checks.
template <typename E>
struct MinionHandle {
    std::string name;
    std::function<int(const E&)> arity;
    std::function<double(const E&)> membership_residual;
    std::function<E(const E&, const MinorMap&)> minor;
    std::function<E(Rng&, int)> sample;
    std::function<double(const E&, const E&)> distance;
    /// Equality below this threshold counts as exact for the minion's laws.
    double equality_tol = 0.0;
    int max_sample_arity = 6;
};

MinionHandle<DictatorElement> dictator_minion();
MinionHandle<SdpElement> sdp_minion(Field field, int max_cols = 4);
MinionHandle<SkeletalElement> skeletal_minion();

struct CheckFailure {
    std::string law;
    std::string detail;
    double residual;
};

struct CheckReport {
    int samples = 0;
    std::vector<CheckFailure> failures;
    double worst_residual = 0.0;

    bool ok() const { return failures.empty(); }
};

/// Samples (element, pi, pi~) triples and asserts the identity-minor and
/// composition laws.
template <typename E>
CheckReport check_minion_axioms(const MinionHandle<E>& h, int samples,
                                std::uint64_t seed) {
    Rng rng(seed);
    CheckReport report;
    report.samples = samples;
    for (int s = 0; s < samples; ++s) {
        int l = rng.uniform_int(1, h.max_sample_arity);
        E e = h.sample(rng, l);
        if (double r = h.membership_residual(e); r > std::max(h.equality_tol, 1e-12))
            report.failures.push_back({"sampler-membership",
                                       "sample " + std::to_string(s), r});

        double rid = h.distance(h.minor(e, MinorMap::identity(l)), e);
        report.worst_residual = std::max(report.worst_residual, rid);
        if (rid > h.equality_tol)
            report.failures.push_back(
                {"identity-minor", "sample " + std::to_string(s), rid});

        MinorMap pi = MinorMap::random(rng, l, rng.uniform_int(1, h.max_sample_arity));
        MinorMap pitilde = MinorMap::random(rng, pi.target_arity(),
                                            rng.uniform_int(1, h.max_sample_arity));
        double rc = h.distance(h.minor(h.minor(e, pi), pitilde),
                               h.minor(e, pi.then(pitilde)));
        report.worst_residual = std::max(report.worst_residual, rc);
        if (rc > h.equality_tol)
            report.failures.push_back(
                {"composition",
                 "sample " + std::to_string(s) + " pi " + pi.describe() +
                     " pitilde " + pitilde.describe(),
                 rc});
    }
    return report;
}

/// Checks xi(e_/pi) = xi(e)_/pi on random samples, along with arity
/// preservation and membership of the images.
template <typename E, typename N>
CheckReport check_minor_preserving(const std::function<N(const E&)>& xi,
                                   const MinionHandle<E>& source,
                                   const MinionHandle<N>& target, int samples,
                                   std::uint64_t seed, double tol) {
    Rng rng(seed);
    CheckReport report;
    report.samples = samples;
    for (int s = 0; s < samples; ++s) {
        int l = rng.uniform_int(1, source.max_sample_arity);
        E e = source.sample(rng, l);
        MinorMap pi =
            MinorMap::random(rng, l, rng.uniform_int(1, source.max_sample_arity));

        N image = xi(e);
        if (target.arity(image) != source.arity(e))
            report.failures.push_back(
                {"arity", "sample " + std::to_string(s), 1.0});
        if (double r = target.membership_residual(image); r > std::max(tol, 1e-12))
            report.failures.push_back(
                {"image-membership", "sample " + std::to_string(s), r});

        double rp = target.distance(xi(source.minor(e, pi)), target.minor(image, pi));
        report.worst_residual = std::max(report.worst_residual, rp);
        if (rp > tol)
            report.failures.push_back(
                {"minor-preservation",
                 "sample " + std::to_string(s) + " pi " + pi.describe(), rp});
    }
    return report;
}

/// The canonical map from the dictator minion into any minion: fix a unary
/// element M and send e_{i;l} to M_/pi with pi : [1] -> [l], 1 -> i.
template <typename E>
std::function<E(const DictatorElement&)> dictator_into(const MinionHandle<E>& h,
                                                       std::uint64_t seed) {
    Rng rng(seed);
    E unary = h.sample(rng, 1);
    if (h.arity(unary) != 1)
        throw Error("dictator_into: no unary element obtainable from sampler");
    auto minor = h.minor;
    return [unary, minor](const DictatorElement& e) {
        return minor(unary, MinorMap::single(e.index, e.arity));
    };
}

} // namespace minionlab
