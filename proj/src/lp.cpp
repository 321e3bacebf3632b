#include "minionlab/lp.hpp"

#include <algorithm>

namespace minionlab {

namespace {

// Dense phase-one simplex tableau over the rationals. Free variables are
// split into differences of nonnegative parts; every constraint becomes an
// equality with a slack, rows are sign-normalized, and artificials give the
// starting basis. Bland's rule guarantees termination.
class PhaseOneSimplex {
public:
    explicit PhaseOneSimplex(const LinearSystem& sys) : sys_(sys) {
        pos_.resize(sys.num_vars);
        neg_.assign(sys.num_vars, -1);
        for (int v = 0; v < sys.num_vars; ++v) {
            pos_[v] = cols_++;
            if (!sys.nonneg[v])
                neg_[v] = cols_++;
        }
        slack_begin_ = cols_;
        for (const auto& c : sys.constraints)
            if (c.rel != Rel::eq)
                ++cols_;
        artificial_begin_ = cols_;
    }

    LpResult run() {
        const int rows = static_cast<int>(sys_.constraints.size());
        const int total = artificial_begin_;  // structurals + slacks
        // tableau columns: total structurals/slacks, rows artificials, rhs
        tab_.assign(rows, std::vector<Rational>(total + rows + 1, 0));
        basis_.assign(rows, -1);

        int next_slack = slack_begin_;
        for (int r = 0; r < rows; ++r) {
            const auto& c = sys_.constraints[r];
            auto& row = tab_[r];
            for (const auto& [v, coeff] : c.terms) {
                if (v < 0 || v >= sys_.num_vars)
                    throw Error("lp: variable index out of range");
                row[pos_[v]] += coeff;
                if (neg_[v] >= 0)
                    row[neg_[v]] -= coeff;
            }
            row[total + rows] = c.rhs;
            if (c.rel == Rel::le)
                row[next_slack++] = 1;
            else if (c.rel == Rel::ge)
                row[next_slack++] = -1;
            if (row[total + rows] < 0)
                for (auto& x : row)
                    x = -x;
            row[total + r] = 1;
            basis_[r] = total + r;
        }

        // objective: minimize the sum of artificials; start from the negated
        // column sums so that the artificial columns have reduced cost zero
        std::vector<Rational> reduced(total + rows + 1, 0);
        for (int r = 0; r < rows; ++r)
            for (int j = 0; j <= total + rows; ++j)
                reduced[j] -= tab_[r][j];
        for (int r = 0; r < rows; ++r)
            reduced[total + r] = 0;

        while (true) {
            int pivot_col = -1;
            for (int j = 0; j < total + rows; ++j)
                if (reduced[j] < 0) {  // Bland: first eligible column
                    pivot_col = j;
                    break;
                }
            if (pivot_col < 0)
                break;
            int pivot_row = -1;
            Rational best_ratio = 0;
            for (int r = 0; r < rows; ++r) {
                if (tab_[r][pivot_col] <= 0)
                    continue;
                Rational ratio = tab_[r][total + rows] / tab_[r][pivot_col];
                if (pivot_row < 0 || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[r] < basis_[pivot_row])) {
                    pivot_row = r;
                    best_ratio = ratio;
                }
            }
            if (pivot_row < 0)
                throw Error("lp: phase-one objective unbounded");  // cannot happen
            pivot(pivot_row, pivot_col, reduced);
        }

        Rational objective = 0;
        for (int r = 0; r < rows; ++r)
            if (basis_[r] >= total)
                objective += tab_[r][total + rows];

        LpResult res;
        if (objective != 0)
            return res;  // infeasible

        res.feasible = true;
        std::vector<Rational> full(total + rows, 0);
        for (int r = 0; r < rows; ++r)
            full[basis_[r]] = tab_[r][total + rows];
        res.point.resize(sys_.num_vars);
        for (int v = 0; v < sys_.num_vars; ++v) {
            res.point[v] = full[pos_[v]];
            if (neg_[v] >= 0)
                res.point[v] -= full[neg_[v]];
        }
        return res;
    }

private:
    void pivot(int pr, int pc, std::vector<Rational>& reduced) {
        const int width = static_cast<int>(tab_[pr].size());
        Rational inv = tab_[pr][pc];
        for (int j = 0; j < width; ++j)
            tab_[pr][j] /= inv;
        for (int r = 0; r < static_cast<int>(tab_.size()); ++r) {
            if (r == pr || tab_[r][pc] == 0)
                continue;
            Rational factor = tab_[r][pc];
            for (int j = 0; j < width; ++j)
                tab_[r][j] -= factor * tab_[pr][j];
        }
        if (reduced[pc] != 0) {
            Rational factor = reduced[pc];
            for (int j = 0; j < width; ++j)
                reduced[j] -= factor * tab_[pr][j];
        }
        basis_[pr] = pc;
    }

    const LinearSystem& sys_;
    std::vector<int> pos_, neg_;
    int cols_ = 0;
    int slack_begin_ = 0;
    int artificial_begin_ = 0;
    std::vector<std::vector<Rational>> tab_;
    std::vector<int> basis_;
};

} // namespace

LpResult lp_feasible(const LinearSystem& sys) {
    if (static_cast<int>(sys.nonneg.size()) != sys.num_vars)
        throw Error("lp: malformed system (nonneg flags)");
    LpResult res = PhaseOneSimplex(sys).run();
    if (res.feasible && !satisfies(sys, res.point))
        throw Error("lp: internal error, point fails verification");
    return res;
}

bool satisfies(const LinearSystem& sys, const std::vector<Rational>& point) {
    if (static_cast<int>(point.size()) != sys.num_vars)
        return false;
    for (int v = 0; v < sys.num_vars; ++v)
        if (sys.nonneg[v] && point[v] < 0)
            return false;
    for (const auto& c : sys.constraints) {
        Rational lhs = 0;
        for (const auto& [v, coeff] : c.terms)
            lhs += coeff * point[v];
        if (c.rel == Rel::eq && lhs != c.rhs)
            return false;
        if (c.rel == Rel::le && lhs > c.rhs)
            return false;
        if (c.rel == Rel::ge && lhs < c.rhs)
            return false;
    }
    return true;
}

} // namespace minionlab
