#include "capdeg/rational_simplex.hpp"

#include "capdeg/error.hpp"

namespace capdeg {

RationalSimplex::RationalSimplex(std::size_t structural_count)
    : structural_(structural_count),
      row_of_(structural_count, -1),
      value_(structural_count),
      lower_(structural_count),
      upper_(structural_count) {}

RationalSimplex::Var RationalSimplex::add_row(const std::vector<std::pair<Var, mpq_class>>& coefficients) {
    const Var var = value_.size();
    for (auto& row : tableau_) {
        row.emplace_back(0);
    }
    std::vector<mpq_class> row(var + 1);
    mpq_class value = 0;
    for (const auto& [v, a] : coefficients) {
        if (v >= structural_) {
            throw InvalidArgument("rows must be defined over structural variables");
        }
        value += a * value_[v];
        if (row_of_[v] < 0) {
            row[v] += a;
        } else {
            const auto& source = tableau_[static_cast<std::size_t>(row_of_[v])];
            for (std::size_t j = 0; j < source.size(); ++j) {
                if (sgn(source[j]) != 0) {
                    row[j] += a * source[j];
                }
            }
        }
    }
    tableau_.push_back(std::move(row));
    basic_.push_back(var);
    row_of_.push_back(static_cast<long>(tableau_.size() - 1));
    value_.push_back(value);
    lower_.emplace_back();
    upper_.emplace_back();
    definitions_.push_back(coefficients);
    return var;
}

const std::vector<std::pair<RationalSimplex::Var, mpq_class>>& RationalSimplex::definition(Var row_var) const {
    if (row_var < structural_ || row_var >= value_.size()) {
        throw InvalidArgument("not a row variable");
    }
    return definitions_[row_var - structural_];
}

void RationalSimplex::set_lower(Var v, std::optional<mpq_class> bound) {
    lower_[v] = std::move(bound);
    if (row_of_[v] < 0 && below_lower(v)) {
        update_nonbasic(v, *lower_[v]);
    }
}

void RationalSimplex::set_upper(Var v, std::optional<mpq_class> bound) {
    upper_[v] = std::move(bound);
    if (row_of_[v] < 0 && above_upper(v)) {
        update_nonbasic(v, *upper_[v]);
    }
}

void RationalSimplex::update_nonbasic(Var v, const mpq_class& target) {
    const mpq_class delta = target - value_[v];
    for (std::size_t r = 0; r < tableau_.size(); ++r) {
        const auto& a = tableau_[r][v];
        if (sgn(a) != 0) {
            value_[basic_[r]] += a * delta;
        }
    }
    value_[v] = target;
}

void RationalSimplex::pivot(std::size_t row, Var entering) {
    auto& pivot_row = tableau_[row];
    const Var leaving = basic_[row];
    const mpq_class a = pivot_row[entering];
    // leaving = a * entering + rest  =>  entering = (leaving - rest) / a
    for (auto& c : pivot_row) {
        if (sgn(c) != 0) {
            c = -c / a;
        }
    }
    pivot_row[entering] = 0;
    pivot_row[leaving] = 1 / a;

    std::vector<std::size_t> nonzero;
    for (std::size_t j = 0; j < pivot_row.size(); ++j) {
        if (sgn(pivot_row[j]) != 0) {
            nonzero.push_back(j);
        }
    }
    for (std::size_t r = 0; r < tableau_.size(); ++r) {
        if (r == row) {
            continue;
        }
        auto& other = tableau_[r];
        if (sgn(other[entering]) == 0) {
            continue;
        }
        const mpq_class factor = other[entering];
        other[entering] = 0;
        for (std::size_t j : nonzero) {
            other[j] += factor * pivot_row[j];
        }
    }
    basic_[row] = entering;
    row_of_[entering] = static_cast<long>(row);
    row_of_[leaving] = -1;
    ++pivots_;
}

void RationalSimplex::explain(std::size_t row, bool basic_below) {
    conflict_.clear();
    const Var b = basic_[row];
    const auto& coefficients = tableau_[row];
    // basic_below: x_b - sum a_j x_j == 0, with x_b >= lo_b and each term at the
    // bound that keeps sum a_j x_j as large as possible. Otherwise the mirror image.
    const int sign = basic_below ? 1 : -1;
    conflict_.push_back({b, mpq_class(sign), !basic_below});
    for (std::size_t j = 0; j < coefficients.size(); ++j) {
        if (sgn(coefficients[j]) == 0) {
            continue;
        }
        mpq_class c = -sign * coefficients[j];
        const bool uses_upper = sgn(c) < 0;
        conflict_.push_back({j, std::move(c), uses_upper});
    }
}

RationalSimplex::Result RationalSimplex::check(std::size_t max_pivots) {
    const std::size_t start = pivots_;
    while (true) {
        // Bland's rule: smallest violating basic variable, smallest eligible entering one.
        std::size_t row = tableau_.size();
        Var best = value_.size();
        for (std::size_t r = 0; r < tableau_.size(); ++r) {
            const Var b = basic_[r];
            if (b < best && (below_lower(b) || above_upper(b))) {
                best = b;
                row = r;
            }
        }
        if (row == tableau_.size()) {
            return Result::feasible;
        }
        if (pivots_ - start >= max_pivots) {
            return Result::pivot_limit;
        }
        const bool increase = below_lower(best);
        const mpq_class target = increase ? *lower_[best] : *upper_[best];
        const auto& coefficients = tableau_[row];
        Var entering = value_.size();
        for (Var j = 0; j < coefficients.size(); ++j) {
            const int s = sgn(coefficients[j]);
            if (s == 0) {
                continue;
            }
            const bool up = (s > 0) == increase;
            if (up ? can_increase(j) : can_decrease(j)) {
                entering = j;
                break;
            }
        }
        if (entering == value_.size()) {
            explain(row, increase);
            return Result::infeasible;
        }
        const mpq_class theta = (target - value_[best]) / coefficients[entering];
        update_nonbasic(entering, value_[entering] + theta);
        pivot(row, entering);
    }
}

}  // namespace capdeg
