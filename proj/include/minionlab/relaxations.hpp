#pragma once

#include "minionlab/lp.hpp"
#include "minionlab/structures.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace minionlab {

/// One candidate assignment: tuple number `xt` of relation `rel` in X mapped
/// to tuple number `yt` of the same relation in Y.
struct Assignment {
    int rel;
    int xt;
    int yt;

    auto operator<=>(const Assignment&) const = default;
};

struct RelaxConfig {
    /// Try cheap exact shortcuts (pinned homomorphism search, support
    /// propagation) before falling back to the rational LP.
    bool use_shortcuts = true;
    std::uint64_t shortcut_budget = 200'000;
    /// Permutes the pinned-assignment processing order; the fixed point is
    /// order-independent, this knob exists to test that.
    std::uint64_t order_seed = 0;
    bool permute_order = false;
};

/// Variable layout of the basic distribution LP for a pair (X, Y): one
/// weight per assignment, one marginal value per (vertex, value).
struct BasicLp {
    LinearSystem system;
    std::map<Assignment, int> weight_var;
    std::vector<std::vector<int>> marginal_var;  // [x][y]
};

/// Nonnegative weights over R^Y per constrained X-tuple summing to one,
/// with per-variable marginals consistent across overlapping tuples.
BasicLp build_basic_lp(const Structure& x, const Structure& y);

struct ClpReport {
    bool accepted = false;
    std::set<Assignment> surviving;
    /// When rejected: a constrained tuple whose assignments were all removed.
    std::optional<std::pair<int, int>> emptied;  // (rel, xt)
    std::uint64_t lp_solves = 0;
    std::uint64_t shortcut_hits = 0;
};

/// Iterated pinned-LP relaxation: repeatedly test each surviving assignment
/// by solving the basic LP with that assignment pinned to weight one and
/// all removed assignments forced to weight zero; remove on infeasibility;
/// stop at the fixed point. Accepts when every constrained tuple keeps at
/// least one assignment.
ClpReport clp_relax(const Structure& x, const Structure& y,
                    const RelaxConfig& config = {});

struct ConsistencyCaps {
    int max_domain = 12;
};

struct ConsistencyReport {
    bool consistent = false;
    std::size_t family_size = 0;
    int rounds = 0;
};

/// Fixed point of the family of partial homomorphisms on induced
/// substructures with domain size at most k, pruned to closure under
/// restriction and under one-vertex extensions witnessed up to size k + 1:
/// a map of full size k survives only if every extra vertex admits a
/// compatible value whose size-k restrictions all survive.
ConsistencyReport k_consistency(const Structure& x, const Structure& y, int k,
                                const ConsistencyCaps& caps = {});

} // namespace minionlab
