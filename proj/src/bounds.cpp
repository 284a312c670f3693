#include "capdeg/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <regex>
#include <sstream>

#include <mpfr.h>

#include "capdeg/error.hpp"

namespace capdeg {

namespace {

constexpr mpfr_prec_t kPrecision = 128;

class Real {
public:
    Real() { mpfr_init2(x_, kPrecision); }
    Real(const Real& other) : Real() { mpfr_set(x_, other.x_, MPFR_RNDN); }
    Real& operator=(const Real& other) {
        mpfr_set(x_, other.x_, MPFR_RNDN);
        return *this;
    }
    ~Real() { mpfr_clear(x_); }

    mpfr_ptr get() { return x_; }
    mpfr_srcptr get() const { return x_; }

private:
    mpfr_t x_;
};

mpfr_rnd_t mode(Rounding r) { return r == Rounding::down ? MPFR_RNDD : MPFR_RNDU; }

Real from_z(const mpz_class& z, mpfr_rnd_t rnd) {
    Real r;
    mpfr_set_z(r.get(), z.get_mpz_t(), rnd);
    return r;
}

Real from_q(const mpq_class& q, mpfr_rnd_t rnd) {
    Real r;
    mpfr_set_q(r.get(), q.get_mpq_t(), rnd);
    return r;
}

// z^{1/root}, rounded.
Real root_of(const mpz_class& z, unsigned long root, mpfr_rnd_t rnd) {
    Real r = from_z(z, rnd);
    mpfr_rootn_ui(r.get(), r.get(), root, rnd);
    return r;
}

DirectedReal directed(const Real& x, Rounding r) {
    DirectedReal out;
    out.direction = r;
    out.value = mpfr_get_d(x.get(), mode(r));
    char* buffer = nullptr;
    mpfr_asprintf(&buffer, r == Rounding::down ? "%.20RDg" : "%.20RUg", x.get());
    out.text = buffer;
    mpfr_free_str(buffer);
    return out;
}

mpz_class pow_z(std::uint64_t base, std::uint64_t exponent) {
    mpz_class out;
    mpz_ui_pow_ui(out.get_mpz_t(), base, exponent);
    return out;
}

void check_group(const GroupSpec& g) {
    if (g.order() < 2) {
        throw InvalidArgument("the trivial group gives no corners");
    }
}

void check_positive(std::int64_t n, const char* name) {
    if (n < 1) {
        throw InvalidArgument(std::string(name) + " must be positive");
    }
}

std::string line(const std::string& claim, const char* op, const DirectedReal& v, const std::string& source) {
    return "bound: " + claim + " " + op + " " + v.text + " ; " + source + "\n";
}

}  // namespace

RateSpec RateSpec::parse(const std::string& text) {
    static const std::regex number(R"(\s*(\d+)(?:\.(\d+)|/(\d+))?\s*)");
    static const std::regex power(R"(\s*(\d+(?:\.\d+|/\d+)?)\s*\^\s*\(?\s*1\s*/\s*(\d+)\s*\)?\s*)");
    auto parse_number = [&](const std::string& s) {
        std::smatch m;
        if (!std::regex_match(s, m, number)) {
            throw ParseError(1, 0, "not a rate: " + text);
        }
        mpq_class q(mpz_class(m[1].str()));
        if (m[2].matched) {
            const mpz_class scale = pow_z(10, m[2].length());
            q = mpq_class(mpz_class(m[1].str() + m[2].str()), scale);
        } else if (m[3].matched) {
            const mpz_class den(m[3].str());
            if (den == 0) {
                throw ParseError(1, 0, "zero denominator in rate: " + text);
            }
            q = mpq_class(mpz_class(m[1].str()), den);
        }
        q.canonicalize();
        return q;
    };
    RateSpec out;
    std::smatch m;
    if (std::regex_match(text, m, power)) {
        out.base = parse_number(m[1].str());
        const unsigned long root = std::stoul(m[2].str());
        if (root == 0) {
            throw ParseError(1, 0, "zero root in rate: " + text);
        }
        out.root = static_cast<unsigned>(root);
    } else {
        out.base = parse_number(text);
    }
    return out;
}

std::string RateSpec::to_string() const {
    if (root == 1) {
        return base.get_str();
    }
    return base.get_str() + "^(1/" + std::to_string(root) + ")";
}

ProbCornerBound prob_corner_bound(const GroupSpec& g, int n) {
    check_group(g);
    check_positive(n, "n");
    const std::uint64_t m = g.order();
    const mpz_class mn = pow_z(m, static_cast<std::uint64_t>(n));

    // Denominator rounded up, so the quotient is rounded down.
    Real den = from_z(3 * (mn - 1), MPFR_RNDU);
    mpfr_sqrt(den.get(), den.get(), MPFR_RNDU);
    mpfr_mul_ui(den.get(), den.get(), 3, MPFR_RNDU);
    Real value = from_z(2 * mn * mn, MPFR_RNDD);
    mpfr_div(value.get(), value.get(), den.get(), MPFR_RNDD);

    Real rate = value;
    mpfr_rootn_ui(rate.get(), rate.get(), static_cast<unsigned long>(n), MPFR_RNDD);

    ProbCornerBound out;
    out.value = directed(value, Rounding::down);
    out.rate_at_n = directed(rate, Rounding::down);
    out.asymptotic_rate = directed(root_of(pow_z(m, 3), 2, MPFR_RNDD), Rounding::down);
    return out;
}

KdimBound kdim_prob_bound(const GroupSpec& g, int n, int k) {
    check_group(g);
    check_positive(n, "n");
    if (k < 2) {
        throw InvalidArgument("k must be at least 2");
    }
    const std::uint64_t m = g.order();
    const auto uk = static_cast<std::uint64_t>(k);
    const auto un = static_cast<std::uint64_t>(n);

    Real den = root_of(pow_z(m, un), uk, MPFR_RNDU);
    const Real factor = root_of(pow_z(uk + 1, uk + 1), uk, MPFR_RNDU);
    mpfr_mul(den.get(), den.get(), factor.get(), MPFR_RNDU);
    Real value = from_z(uk * pow_z(m, uk * un), MPFR_RNDD);
    mpfr_div(value.get(), value.get(), den.get(), MPFR_RNDD);

    KdimBound out;
    out.value = directed(value, Rounding::down);
    out.asymptotic_rate = directed(root_of(pow_z(m, uk * uk - 1), uk, MPFR_RNDD), Rounding::down);
    return out;
}

GroundSubset randomized_cornerfree(const GroupSpec& g, int n, std::uint64_t seed, int trials) {
    check_group(g);
    check_positive(n, "n");
    check_positive(trials, "trials");
    const GroupSpec gn = g.power(n);
    const Hypergraph h = corner_hypergraph(gn);
    const double p = 1.0 / std::sqrt(3.0 * (static_cast<double>(gn.order()) - 1.0));

    std::vector<char> best;
    std::size_t best_size = 0;
    for (int t = 0; t < trials; ++t) {
        std::seed_seq seq{seed, static_cast<std::uint64_t>(t)};
        std::mt19937_64 rng(seq);
        std::vector<char> inside(h.vertex_count(), 0);
        for (auto& bit : inside) {
            bit = static_cast<double>(rng() >> 11) * 0x1p-53 < p ? 1 : 0;
        }
        const auto& edges = h.edges();
        for (std::size_t e = 0; e < edges.size(); ++e) {
            const auto edge = edges[e];
            if (std::all_of(edge.begin(), edge.end(), [&](Vertex v) { return inside[v] != 0; })) {
                inside[*std::max_element(edge.begin(), edge.end())] = 0;
            }
        }
        const auto size = static_cast<std::size_t>(std::count(inside.begin(), inside.end(), 1));
        if (best.empty() || size > best_size) {
            best = std::move(inside);
            best_size = size;
        }
    }

    const std::uint32_t order = gn.order();
    std::vector<std::vector<std::uint32_t>> elements;
    for (Vertex v = 0; v < best.size(); ++v) {
        if (best[v]) {
            elements.push_back({static_cast<std::uint32_t>(v / order), static_cast<std::uint32_t>(v % order)});
        }
    }
    GroundSubset out(gn, 2, std::move(elements));
    if (!is_cornerfree(out)) {
        throw VerificationFailure("pruned random set is not corner-free");
    }
    return out;
}

BoundReport nof_from_rate(const GroupSpec& g, const RateSpec& rate) {
    check_group(g);
    if (rate.root == 0 || rate.base < 1) {
        throw InvalidArgument("rate must be at least 1");
    }
    const mpz_class vertices = pow_z(g.order(), 2);
    // rate <= |G|^2  iff  base <= |G|^{2 root}
    if (rate.base > mpq_class(pow_z(g.order(), 2ull * rate.root))) {
        throw InvalidArgument("rate exceeds |G|^2");
    }

    auto rate_value = [&](Rounding r) {
        Real x = from_q(rate.base, mode(r));
        mpfr_rootn_ui(x.get(), x.get(), rate.root, mode(r));
        return x;
    };

    BoundReport out;
    out.group = g;
    out.k = 2;
    out.corner_free_size = "(" + rate.to_string() + ")^(n - o(n))";
    out.capacity_lower = directed(rate_value(Rounding::down), Rounding::down);
    out.capacity_lower_source = "given rate " + rate.to_string();
    out.capacity_upper = directed(from_z(vertices, MPFR_RNDU), Rounding::up);
    out.capacity_upper_source = "|V| = |G|^2";

    Real base = from_z(vertices, MPFR_RNDU);
    const Real low = rate_value(Rounding::down);
    mpfr_div(base.get(), base.get(), low.get(), MPFR_RNDU);
    out.coloring_base = directed(base, Rounding::up);
    out.coloring_upper = "c * n * " + out.coloring_base.text + "^n";

    // log2(|G|^2) - log2(base) / root, rounded up.
    Real coefficient = from_z(vertices, MPFR_RNDU);
    mpfr_log2(coefficient.get(), coefficient.get(), MPFR_RNDU);
    Real log_rate = from_q(rate.base, MPFR_RNDD);
    mpfr_log2(log_rate.get(), log_rate.get(), MPFR_RNDD);
    mpfr_div_ui(log_rate.get(), log_rate.get(), rate.root, MPFR_RNDD);
    mpfr_sub(coefficient.get(), coefficient.get(), log_rate.get(), MPFR_RNDU);
    if (mpfr_sgn(coefficient.get()) < 0) {
        mpfr_set_zero(coefficient.get(), 1);
    }
    out.nof_upper_coefficient = directed(coefficient, Rounding::up);
    return out;
}

KPlayerBound kplayer_nof_bound(const GroupSpec& g, std::int64_t n, int k) {
    check_group(g);
    check_positive(n, "n");
    if (k < 2) {
        throw InvalidArgument("k must be at least 2");
    }
    const auto uk = static_cast<unsigned long>(k);

    Real log_g = from_z(mpz_class(g.order()), MPFR_RNDU);
    mpfr_log2(log_g.get(), log_g.get(), MPFR_RNDU);

    Real coefficient = log_g;
    mpfr_div_ui(coefficient.get(), coefficient.get(), uk, MPFR_RNDU);

    Real total = coefficient;
    mpfr_mul_si(total.get(), total.get(), static_cast<long>(n), MPFR_RNDU);

    Real term = from_z(mpz_class(static_cast<unsigned long>(n)), MPFR_RNDU);
    mpfr_log2(term.get(), term.get(), MPFR_RNDU);
    mpfr_add(total.get(), total.get(), term.get(), MPFR_RNDU);

    term = log_g;
    mpfr_log2(term.get(), term.get(), MPFR_RNDU);
    mpfr_add(total.get(), total.get(), term.get(), MPFR_RNDU);

    // (1 + 1/k) log(1 + k) = (k + 1) log(k + 1) / k
    term = from_z(mpz_class(uk + 1), MPFR_RNDU);
    mpfr_log2(term.get(), term.get(), MPFR_RNDU);
    mpfr_mul_ui(term.get(), term.get(), uk + 1, MPFR_RNDU);
    mpfr_div_ui(term.get(), term.get(), uk, MPFR_RNDU);
    mpfr_add(total.get(), total.get(), term.get(), MPFR_RNDU);

    mpfr_add_ui(total.get(), total.get(), uk, MPFR_RNDU);

    KPlayerBound out;
    out.value = directed(total, Rounding::up);
    out.coefficient = directed(coefficient, Rounding::up);
    const int log_floor = std::bit_width(static_cast<std::uint64_t>(n)) - 1;
    const int log_ceil = std::has_single_bit(static_cast<std::uint64_t>(n)) ? log_floor : log_floor + 1;
    if (k == log_floor || k == log_ceil) {
        out.sublinear = "(n / log n) * log|G| + O(log n)";
    }
    return out;
}

std::pair<DirectedReal, DirectedReal> trivial_bounds(const Hypergraph& h, const mpz_class& s, int n) {
    check_positive(n, "n");
    if (s < 1) {
        throw InvalidArgument("independent-set size must be positive");
    }
    return {directed(root_of(s, static_cast<unsigned long>(n), MPFR_RNDD), Rounding::down),
            directed(from_z(mpz_class(static_cast<unsigned long>(h.vertex_count())), MPFR_RNDU), Rounding::up)};
}

std::string render(const ProbCornerBound& bound, const GroupSpec& g, int n) {
    const std::string tag = "group=" + g.to_string() + " n=" + std::to_string(n);
    return line("alpha(H_cor^n)", ">=", bound.value, tag + " sample-and-prune") +
           line("alpha(H_cor^n)^(1/n)", ">=", bound.rate_at_n, tag) +
           line("Theta(H_cor)", ">=", bound.asymptotic_rate, "group=" + g.to_string() + " m^(3/2)");
}

std::string render(const KdimBound& bound, const GroupSpec& g, int n, int k) {
    const std::string tag = "group=" + g.to_string() + " n=" + std::to_string(n) + " k=" + std::to_string(k);
    return line("r_corner_k(G^n)", ">=", bound.value, tag + " sample-and-prune") +
           line("Theta(H_k_cor)", ">=", bound.asymptotic_rate, tag + " m^(k-1/k)");
}

std::string render(const BoundReport& report) {
    const std::string tag = "group=" + report.group.to_string();
    std::ostringstream out;
    out << line("Theta(H_cor)", ">=", report.capacity_lower, tag + " " + report.capacity_lower_source)
        << line("Theta(H_cor)", "<=", report.capacity_upper, tag + " " + report.capacity_upper_source)
        << "bound: r_corner(G^n) >= " << report.corner_free_size << " ; " << tag << "\n"
        << "bound: chi_corner(G^n) <= " << report.coloring_upper << " ; " << tag << " c unspecified\n"
        << line("D3(Eval_G^n)/n", "<=", report.nof_upper_coefficient, tag + " plus O(log n)");
    return out.str();
}

std::string render(const KPlayerBound& bound, const GroupSpec& g, std::int64_t n, int k) {
    const std::string tag = "group=" + g.to_string() + " n=" + std::to_string(n) + " k=" + std::to_string(k);
    std::string out = line("D_(k+1)(Eval_G^n)", "<=", bound.value, tag) +
                      line("coefficient of n", "<=", bound.coefficient, tag);
    if (bound.sublinear) {
        out += "bound: D_(k+1)(Eval_G^n) <= " + *bound.sublinear + " ; " + tag + " k = log n\n";
    }
    return out;
}

}  // namespace capdeg
