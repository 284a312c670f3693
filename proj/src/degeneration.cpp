#include "capdeg/degeneration.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>

#include "capdeg/acyclic.hpp"
#include "capdeg/error.hpp"
#include "capdeg/rational_simplex.hpp"

namespace capdeg {

namespace {

using Clock = std::chrono::steady_clock;

void check_shape(const SupportSet& psi, const DegenerationCertificate& cert) {
    if (cert.k != psi.arity() || cert.maps.size() != static_cast<std::size_t>(psi.arity())) {
        throw InvalidArgument("certificate arity does not match the support");
    }
    for (int i = 0; i < psi.arity(); ++i) {
        if (cert.maps[static_cast<std::size_t>(i)].size() != psi.ground_size(i)) {
            throw InvalidArgument("map u_" + std::to_string(i + 1) + " does not cover its ground set");
        }
    }
}

std::int64_t checked_sum(const std::vector<std::int64_t>& terms) {
    std::int64_t sum = 0;
    for (std::int64_t t : terms) {
        if (__builtin_add_overflow(sum, t, &sum)) {
            throw ResourceLimit("degeneration sum overflows 64 bits");
        }
    }
    return sum;
}

bool equal_grounds(const SupportSet& psi) {
    const auto& sizes = psi.ground_sizes();
    return std::adjacent_find(sizes.begin(), sizes.end(), std::not_equal_to<>()) == sizes.end();
}

// Rational point -> integer maps by clearing denominators.
std::optional<DegenerationCertificate> integer_certificate(const RationalSimplex& lp, int k, std::size_t n,
                                                           std::vector<Vertex> subset) {
    mpz_class scale = 1;
    for (std::size_t v = 0; v < lp.structural_count(); ++v) {
        mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), lp.value(v).get_den_mpz_t());
    }
    DegenerationCertificate cert;
    cert.k = k;
    cert.subset = std::move(subset);
    std::sort(cert.subset.begin(), cert.subset.end());
    cert.maps.assign(static_cast<std::size_t>(k), std::vector<std::int64_t>(n, 0));
    for (int i = 0; i < k; ++i) {
        for (std::size_t a = 0; a < n; ++a) {
            const mpq_class& q = lp.value(static_cast<std::size_t>(i) * n + a);
            const mpz_class z = q.get_num() * (scale / q.get_den());
            if (!z.fits_slong_p()) {
                return std::nullopt;
            }
            cert.maps[static_cast<std::size_t>(i)][a] = z.get_si();
        }
    }
    return cert;
}

// LP over u_j(a) (variable j*n + a) with one row per element of psi.
class DegenerationLp {
public:
    DegenerationLp(const SupportSet& psi, std::int64_t max_abs, std::int64_t big_m)
        : k_(psi.arity()), n_(psi.ground_size(0)), big_m_(big_m), lp_(static_cast<std::size_t>(k_) * n_) {
        diagonal_row_.assign(n_, kMissing);
        for (std::size_t e = 0; e < psi.size(); ++e) {
            const auto x = psi.elements()[e];
            std::vector<std::pair<RationalSimplex::Var, mpq_class>> row;
            for (int i = 0; i < k_; ++i) {
                row.emplace_back(static_cast<std::size_t>(i) * n_ + x[static_cast<std::size_t>(i)], mpq_class(1));
            }
            const auto var = lp_.add_row(row);
            if (is_constant(x)) {
                diagonal_row_[x[0]] = var;
                row_vertex_.emplace(var, x[0]);
            } else {
                lp_.set_lower(var, mpq_class(1));
            }
        }
        if (max_abs > 0) {
            for (std::size_t v = 0; v < lp_.structural_count(); ++v) {
                lp_.set_bounds(v, mpq_class(-max_abs), mpq_class(max_abs));
            }
        }
    }

    bool has_diagonal(Vertex v) const { return diagonal_row_[v] != kMissing; }

    // Diagonal sum of v: 0 (in S), >= 1 (outside S) or >= 0 (undecided).
    void set_state(Vertex v, int state) {
        const auto row = diagonal_row_[v];
        std::optional<mpq_class> upper;
        if (big_m_ > 0) {
            upper = mpq_class(big_m_);
        }
        if (state > 0) {
            lp_.set_bounds(row, mpq_class(0), mpq_class(0));
        } else if (state < 0) {
            lp_.set_bounds(row, mpq_class(1), upper);
        } else {
            lp_.set_bounds(row, mpq_class(0), upper);
        }
    }

    RationalSimplex& lp() { return lp_; }
    RationalSimplex::Var diagonal_row(Vertex v) const { return diagonal_row_[v]; }

    // Vertex whose diagonal row is `var`, if any.
    std::optional<Vertex> row_vertex(RationalSimplex::Var var) const {
        auto it = row_vertex_.find(var);
        if (it == row_vertex_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    int k() const { return k_; }
    std::size_t n() const { return n_; }

private:
    static constexpr RationalSimplex::Var kMissing = static_cast<RationalSimplex::Var>(-1);
    int k_;
    std::size_t n_;
    std::int64_t big_m_;
    RationalSimplex lp_;
    std::vector<RationalSimplex::Var> diagonal_row_;
    std::map<RationalSimplex::Var, Vertex> row_vertex_;
};

}  // namespace

DegenerationReport verify_degeneration(const SupportSet& psi, const SupportSet& phi,
                                       const DegenerationCertificate& cert) {
    if (phi.arity() != psi.arity() || phi.ground_sizes() != psi.ground_sizes()) {
        throw InvalidArgument("phi and psi live in different spaces");
    }
    for (std::size_t e = 0; e < phi.size(); ++e) {
        if (!psi.contains(phi.elements()[e])) {
            throw InvalidArgument("phi is not contained in psi");
        }
    }
    check_shape(psi, cert);

    DegenerationReport report;
    std::vector<std::size_t> order(psi.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_partition(order.begin(), order.end(), [&](std::size_t e) { return is_constant(psi.elements()[e]); });
    for (std::size_t e : order) {
        const auto x = psi.elements()[e];
        DegenerationRow row;
        row.element.assign(x.begin(), x.end());
        for (int i = 0; i < psi.arity(); ++i) {
            row.evaluation.push_back(cert.maps[static_cast<std::size_t>(i)][x[static_cast<std::size_t>(i)]]);
        }
        row.sum = checked_sum(row.evaluation);
        row.in_phi = phi.contains(x);
        row.ok = row.in_phi ? row.sum == 0 : row.sum > 0;
        if (!row.ok) {
            report.violations.push_back(report.rows.size());
        }
        report.rows.push_back(std::move(row));
    }
    report.valid = report.violations.empty();
    return report;
}

DegenerationReport verify_degeneration(const Hypergraph& h, const DegenerationCertificate& cert) {
    for (Vertex v : cert.subset) {
        if (v >= h.vertex_count()) {
            throw InvalidArgument("subset vertex out of range");
        }
    }
    return verify_degeneration(adjacency_support(h), diagonal_support(h.arity(), h.vertex_count(), cert.subset), cert);
}

std::optional<DegenerationCertificate> subset_feasible(const SupportSet& psi, std::span<const Vertex> subset,
                                                       const FeasibilityOptions& options) {
    if (psi.arity() < 1 || !equal_grounds(psi)) {
        throw InvalidArgument("subset feasibility needs equal ground sets");
    }
    DegenerationLp lp(psi, options.max_abs, options.big_m);
    std::vector<char> in_subset(lp.n(), 0);
    for (Vertex v : subset) {
        if (v >= lp.n() || !lp.has_diagonal(v)) {
            throw InvalidArgument("diagonal of the subset is not contained in psi");
        }
        in_subset[v] = 1;
    }
    for (Vertex v = 0; v < lp.n(); ++v) {
        if (lp.has_diagonal(v)) {
            lp.set_state(v, in_subset[v] ? 1 : -1);
        }
    }
    if (lp.lp().check() != RationalSimplex::Result::feasible) {
        return std::nullopt;
    }
    std::vector<Vertex> s(subset.begin(), subset.end());
    auto cert = integer_certificate(lp.lp(), psi.arity(), lp.n(), s);
    if (!cert) {
        throw ResourceLimit("certificate values exceed 64 bits");
    }
    const auto report = verify_degeneration(psi, diagonal_support(psi.arity(), lp.n(), cert->subset), *cert);
    if (!report.valid) {
        throw VerificationFailure("LP certificate does not verify");
    }
    return cert;
}

BetaOutcome beta_search(const Hypergraph& h, const BetaOptions& options) {
    if (options.max_abs < 0 || options.big_m < 0) {
        throw InvalidArgument("bounds must be nonnegative");
    }
    const auto start = Clock::now();
    const auto deadline = start + std::chrono::duration_cast<Clock::duration>(options.budget.max_time);
    const std::size_t n = h.vertex_count();
    const SupportSet psi = adjacency_support(h);
    DegenerationLp lp(psi, options.max_abs, options.big_m);

    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), Vertex{0});
    const auto degree = project_digraph(h).degrees();
    std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return degree[a] > degree[b]; });
    if (options.assume_transitive && n > 0) {
        order.erase(std::find(order.begin(), order.end(), Vertex{0}));
        order.insert(order.begin(), Vertex{0});
    }

    // state: +1 in S, -1 outside, 0 undecided.
    std::vector<int> state(n, 0);
    for (Vertex v = 0; v < n; ++v) {
        lp.set_state(v, 0);
    }
    struct Nogood {
        std::vector<Vertex> in;
        std::vector<Vertex> out;
    };
    std::vector<Nogood> nogoods;
    const std::size_t max_nogoods = 200'000;

    BetaOutcome result;
    std::size_t best = 0;
    std::uint64_t nodes = 0;
    bool aborted = false;
    std::size_t in_count = 0;

    auto violated = [&] {
        return std::any_of(nogoods.begin(), nogoods.end(), [&](const Nogood& g) {
            return std::all_of(g.in.begin(), g.in.end(), [&](Vertex v) { return state[v] > 0; }) &&
                   std::all_of(g.out.begin(), g.out.end(), [&](Vertex v) { return state[v] < 0; });
        });
    };

    auto learn = [&] {
        Nogood g;
        for (const auto& term : lp.lp().conflict()) {
            const auto v = lp.row_vertex(term.var);
            if (!v) {
                continue;
            }
            if (state[*v] > 0 && term.uses_upper) {
                g.in.push_back(*v);
            } else if (state[*v] < 0 && !term.uses_upper && sgn(*lp.lp().lower(term.var)) > 0) {
                g.out.push_back(*v);
            }
        }
        if (nogoods.size() < max_nogoods) {
            nogoods.push_back(std::move(g));
        }
    };

    // The LP point is feasible for S = (in) + (undecided with diagonal sum 0).
    auto harvest = [&] {
        std::vector<Vertex> s;
        for (Vertex v = 0; v < n; ++v) {
            if (state[v] > 0 || (state[v] == 0 && sgn(lp.lp().value(lp.diagonal_row(v))) == 0)) {
                s.push_back(v);
            }
        }
        if (s.size() <= best) {
            return;
        }
        auto cert = integer_certificate(lp.lp(), h.arity(), n, s);
        if (cert && verify_degeneration(h, *cert).valid) {
            best = s.size();
            result.search.witness = cert->subset;
            result.certificate = std::move(cert);
        }
    };

    auto recurse = [&](auto&& self, std::size_t depth) -> void {
        if (++nodes > options.budget.max_nodes || ((nodes & 63u) == 0 && Clock::now() > deadline)) {
            aborted = true;
        }
        if (aborted || in_count + (n - depth) <= best) {
            return;
        }
        if (violated()) {
            return;
        }
        ++result.lp_checks;
        if (lp.lp().check() != RationalSimplex::Result::feasible) {
            learn();
            return;
        }
        harvest();
        if (depth == n) {
            return;
        }
        const Vertex v = order[depth];
        for (int choice : {1, -1}) {
            if (choice < 0 && options.assume_transitive && depth == 0) {
                break;
            }
            state[v] = choice;
            in_count += choice > 0;
            lp.set_state(v, choice);
            self(self, depth + 1);
            in_count -= choice > 0;
            state[v] = 0;
            lp.set_state(v, 0);
            if (aborted) {
                return;
            }
        }
    };
    recurse(recurse, 0);

    result.search.value = best;
    result.search.status = aborted ? SolveStatus::lower_bound_only : SolveStatus::exact;
    result.search.nodes_explored = nodes;
    result.search.wall_time = Clock::now() - start;
    result.nogoods = nogoods.size();
    if (!result.certificate) {
        // Only reachable with an empty vertex set or a budget of zero nodes.
        result.certificate = DegenerationCertificate{h.arity(), {},
                                                     std::vector<std::vector<std::int64_t>>(
                                                         static_cast<std::size_t>(h.arity()), std::vector<std::int64_t>(n, 1))};
    }
    return result;
}

mpz_class uniform_string_count(std::size_t subset_size, int n) {
    if (subset_size == 0 || n <= 0 || static_cast<std::size_t>(n) % subset_size != 0) {
        throw InvalidArgument("n must be a positive multiple of |S|");
    }
    const unsigned long block = static_cast<unsigned long>(n) / subset_size;
    mpz_class total;
    mpz_fac_ui(total.get_mpz_t(), static_cast<unsigned long>(n));
    mpz_class part;
    mpz_fac_ui(part.get_mpz_t(), block);
    for (std::size_t i = 0; i < subset_size; ++i) {
        total /= part;
    }
    return total;
}

std::vector<VertexString> extract_independent_set(const Hypergraph& h, const DegenerationCertificate& cert, int n,
                                                  std::uint64_t max_strings) {
    const std::size_t s = cert.subset.size();
    const mpz_class count = uniform_string_count(s, n);
    if (!verify_degeneration(h, cert).valid) {
        throw InvalidArgument("certificate does not verify");
    }
    if (count > mpz_class(std::to_string(max_strings))) {
        throw ResourceLimit("extracted set has " + count.get_str() + " strings");
    }
    VertexString current;
    for (Vertex v : cert.subset) {
        current.insert(current.end(), static_cast<std::size_t>(n) / s, v);
    }
    std::sort(current.begin(), current.end());
    std::vector<VertexString> out;
    do {
        out.push_back(current);
    } while (std::next_permutation(current.begin(), current.end()));
    return out;
}

SliceReport refined_slice_count(const Hypergraph& h, const DegenerationCertificate& cert, int n) {
    if (n <= 0) {
        throw InvalidArgument("n must be positive");
    }
    if (!verify_degeneration(h, cert).valid) {
        throw InvalidArgument("certificate does not verify");
    }
    const auto k = static_cast<std::size_t>(cert.k);
    std::map<std::vector<std::int64_t>, mpz_class> layer{{std::vector<std::int64_t>(k, 0), mpz_class(1)}};
    for (int position = 0; position < n; ++position) {
        std::map<std::vector<std::int64_t>, mpz_class> next;
        for (const auto& [sums, count] : layer) {
            for (Vertex v : cert.subset) {
                std::vector<std::int64_t> moved = sums;
                for (std::size_t i = 0; i < k; ++i) {
                    if (__builtin_add_overflow(moved[i], cert.maps[i][v], &moved[i])) {
                        throw ResourceLimit("slice sum overflows 64 bits");
                    }
                }
                next[std::move(moved)] += count;
            }
        }
        layer = std::move(next);
    }

    SliceReport report;
    report.slices = layer.size();
    for (const auto& [sums, count] : layer) {
        if (count > report.best.count) {
            report.best = {sums, count};
        }
    }
    const std::size_t s = cert.subset.size();
    if (s > 0 && static_cast<std::size_t>(n) % s == 0) {
        std::vector<std::int64_t> uniform(k, 0);
        const auto copies = static_cast<std::int64_t>(static_cast<std::size_t>(n) / s);
        for (std::size_t i = 0; i < k; ++i) {
            for (Vertex v : cert.subset) {
                uniform[i] += copies * cert.maps[i][v];
            }
        }
        report.uniform = SliceCount{uniform, layer.at(uniform)};
    }
    return report;
}

}  // namespace capdeg
