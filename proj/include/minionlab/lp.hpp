#pragma once

#include "minionlab/error.hpp"

#include <gmpxx.h>

#include <optional>
#include <vector>

namespace minionlab {

using Rational = mpq_class;

enum class Rel { le, eq, ge };

/// A finite system of rational linear constraints. Variables default to
/// free; set nonneg[i] to restrict x_i >= 0.
struct LinearSystem {
    struct Constraint {
        std::vector<std::pair<int, Rational>> terms;
        Rel rel = Rel::eq;
        Rational rhs = 0;
    };

    int num_vars = 0;
    std::vector<Constraint> constraints;
    std::vector<bool> nonneg;

    int add_var(bool nonnegative) {
        nonneg.push_back(nonnegative);
        return num_vars++;
    }
    void add(std::vector<std::pair<int, Rational>> terms, Rel rel, Rational rhs) {
        constraints.push_back({std::move(terms), rel, std::move(rhs)});
    }
};

struct LpResult {
    bool feasible = false;
    std::vector<Rational> point;  // satisfies every constraint exactly
};

/// Exact feasibility decision by phase-one simplex with Bland's rule.
LpResult lp_feasible(const LinearSystem& sys);

/// Exact check that a point satisfies the system; used to cross-validate
/// returned points.
bool satisfies(const LinearSystem& sys, const std::vector<Rational>& point);

} // namespace minionlab
