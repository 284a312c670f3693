#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace capdeg {

// Exact feasibility simplex over the rationals for systems
//
//     lo_j <= x_j <= hi_j           (structural variables)
//     lo_r <= sum_j a_rj x_j <= hi_r (one slack variable per row)
//
// in the general (bounded, tableau-based) form used by SMT arithmetic solvers.
// Bounds may be changed between calls to check(); the tableau and assignment are
// kept, so re-checking after a small bound change is incremental. Pivoting uses
// Bland's rule and therefore terminates.
class RationalSimplex {
public:
    using Var = std::size_t;

    explicit RationalSimplex(std::size_t structural_count);

    // Adds a row and returns the variable holding its value.
    Var add_row(const std::vector<std::pair<Var, mpq_class>>& coefficients);

    void set_lower(Var v, std::optional<mpq_class> bound);
    void set_upper(Var v, std::optional<mpq_class> bound);
    void set_bounds(Var v, std::optional<mpq_class> lower, std::optional<mpq_class> upper) {
        set_lower(v, std::move(lower));
        set_upper(v, std::move(upper));
    }

    const std::optional<mpq_class>& lower(Var v) const { return lower_[v]; }
    const std::optional<mpq_class>& upper(Var v) const { return upper_[v]; }

    // One bound that takes part in an infeasibility explanation. The explanation
    // says: sum over entries of coefficient * var == 0 holds identically (after
    // substituting each row variable by its definition), yet the bounds listed
    // force sum coefficient * var > 0.
    struct ConflictTerm {
        Var var;
        mpq_class coefficient;
        bool uses_upper;  // the term is bounded via the upper bound of var
    };

    enum class Result { feasible, infeasible, pivot_limit };

    Result check(std::size_t max_pivots = static_cast<std::size_t>(-1));

    // Valid after check() returned feasible.
    const mpq_class& value(Var v) const { return value_[v]; }

    // Valid after check() returned infeasible.
    const std::vector<ConflictTerm>& conflict() const { return conflict_; }

    std::size_t structural_count() const noexcept { return structural_; }
    std::size_t variable_count() const noexcept { return value_.size(); }
    std::size_t pivots() const noexcept { return pivots_; }

    // Row definition of a row variable in terms of structural variables.
    const std::vector<std::pair<Var, mpq_class>>& definition(Var row_var) const;

private:
    bool below_lower(Var v) const { return lower_[v] && value_[v] < *lower_[v]; }
    bool above_upper(Var v) const { return upper_[v] && value_[v] > *upper_[v]; }
    bool can_increase(Var v) const { return !upper_[v] || value_[v] < *upper_[v]; }
    bool can_decrease(Var v) const { return !lower_[v] || value_[v] > *lower_[v]; }

    void update_nonbasic(Var v, const mpq_class& target);
    void pivot(std::size_t row, Var entering);
    void explain(std::size_t row, bool basic_below);

    std::size_t structural_;
    // tableau_[r][v]: coefficient of nonbasic variable v in the expression of
    // basic_[r]. Row r is a dense vector over all variables.
    std::vector<std::vector<mpq_class>> tableau_;
    std::vector<Var> basic_;
    std::vector<long> row_of_;  // -1 when nonbasic
    std::vector<mpq_class> value_;
    std::vector<std::optional<mpq_class>> lower_;
    std::vector<std::optional<mpq_class>> upper_;
    std::vector<std::vector<std::pair<Var, mpq_class>>> definitions_;
    std::vector<ConflictTerm> conflict_;
    std::size_t pivots_ = 0;
};

}  // namespace capdeg
