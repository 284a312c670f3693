#include "capdeg/tightness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>
#include <gmpxx.h>

#include "capdeg/error.hpp"

namespace capdeg {

namespace {

bool shape_matches(const SupportSet& phi, const TightnessCertificate& cert) {
    if (cert.k != phi.arity() || cert.maps.size() != static_cast<std::size_t>(cert.k)) {
        return false;
    }
    for (int i = 0; i < cert.k; ++i) {
        if (cert.maps[static_cast<std::size_t>(i)].size() != phi.ground_size(i)) {
            return false;
        }
    }
    return true;
}

// Reduced row echelon form of the zero-sum system, built one element at a time.
class EchelonSystem {
public:
    explicit EchelonSystem(std::size_t variables) : variables_(variables), pivot_row_(variables, kNone) {}

    void add_row(std::vector<mpq_class> row) {
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            const mpq_class factor = row[pivots_[r]];
            if (factor != 0) {
                for (std::size_t c = 0; c < variables_; ++c) {
                    row[c] -= factor * rows_[r][c];
                }
            }
        }
        std::size_t lead = 0;
        while (lead < variables_ && row[lead] == 0) {
            ++lead;
        }
        if (lead == variables_) {
            return;
        }
        const mpq_class scale = row[lead];
        for (auto& entry : row) {
            entry /= scale;
        }
        for (auto& other : rows_) {
            const mpq_class factor = other[lead];
            if (factor != 0) {
                for (std::size_t c = 0; c < variables_; ++c) {
                    other[c] -= factor * row[c];
                }
            }
        }
        pivot_row_[lead] = rows_.size();
        pivots_.push_back(lead);
        rows_.push_back(std::move(row));
    }

    bool is_pivot(std::size_t v) const { return pivot_row_[v] != kNone; }
    const std::vector<mpq_class>& row_of(std::size_t v) const { return rows_[pivot_row_[v]]; }

private:
    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::size_t variables_;
    std::vector<std::vector<mpq_class>> rows_;
    std::vector<std::size_t> pivots_;
    std::vector<std::size_t> pivot_row_;
};

constexpr double kLargeLog = 745.0;
// Supports up to this size get a dense Newton solve before the multiplicative updates.
constexpr std::size_t kBarrierLimit = 400;

// The family Q_lambda(x) = P(x) exp(sum_i lambda_i g_i(x)) / Z(lambda) for lambda on
// the 2-simplex, k = 3.
class TiltedFamily {
public:
    TiltedFamily(const std::vector<double>& p, const std::vector<double>& g) : p_(p), g_(g) {}

    double exponent(const std::array<double, 3>& lambda, std::size_t e) const {
        return lambda[0] * g_[3 * e] + lambda[1] * g_[3 * e + 1] + lambda[2] * g_[3 * e + 2];
    }

    std::vector<double> tilt(const std::array<double, 3>& lambda) const {
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t e = 0; e < p_.size(); ++e) {
            top = std::max(top, exponent(lambda, e));
        }
        std::vector<double> q(p_.size());
        double z = 0;
        for (std::size_t e = 0; e < p_.size(); ++e) {
            q[e] = p_[e] * std::exp(exponent(lambda, e) - top);
            z += q[e];
        }
        for (auto& x : q) {
            x /= z;
        }
        return q;
    }

    // ln Z with its gradient and Hessian in lambda (full 3x3, before restricting to a face).
    struct Moments {
        double log_z = 0;
        std::array<double, 3> mean{};
        std::array<std::array<double, 3>, 3> cov{};
    };

    Moments moments(const std::array<double, 3>& lambda) const {
        Moments out;
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t e = 0; e < p_.size(); ++e) {
            top = std::max(top, exponent(lambda, e));
        }
        double z = 0;
        for (std::size_t e = 0; e < p_.size(); ++e) {
            const double w = p_[e] * std::exp(exponent(lambda, e) - top);
            z += w;
            for (std::size_t i = 0; i < 3; ++i) {
                out.mean[i] += w * g_[3 * e + i];
                for (std::size_t j = 0; j < 3; ++j) {
                    out.cov[i][j] += w * g_[3 * e + i] * g_[3 * e + j];
                }
            }
        }
        for (std::size_t i = 0; i < 3; ++i) {
            out.mean[i] /= z;
        }
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) {
                out.cov[i][j] = out.cov[i][j] / z - out.mean[i] * out.mean[j];
            }
        }
        out.log_z = std::log(z) + top;
        return out;
    }

    // Minimiser of ln Z over the simplex: ln Z is convex, so the minimum is the
    // stationary point of some face; every face is tried and the best kept.
    std::array<double, 3> minimise() const {
        std::array<double, 3> best{1, 0, 0};
        double best_value = moments(best).log_z;
        auto consider = [&](const std::array<double, 3>& lambda) {
            const double value = moments(lambda).log_z;
            if (value < best_value) {
                best_value = value;
                best = lambda;
            }
        };
        for (std::size_t i = 1; i < 3; ++i) {
            std::array<double, 3> vertex{};
            vertex[i] = 1;
            consider(vertex);
        }
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = i + 1; j < 3; ++j) {
                if (auto lambda = edge_stationary(i, j)) {
                    consider(*lambda);
                }
            }
        }
        if (auto lambda = interior_stationary()) {
            consider(*lambda);
        }
        return best;
    }

private:
    // lambda = t e_i + (1 - t) e_j with t in [0, 1].
    std::optional<std::array<double, 3>> edge_stationary(std::size_t i, std::size_t j) const {
        double t = 0.5;
        for (int step = 0; step < 100; ++step) {
            std::array<double, 3> lambda{};
            lambda[i] = t;
            lambda[j] = 1 - t;
            const Moments mo = moments(lambda);
            const double grad = mo.mean[i] - mo.mean[j];
            const double hess = mo.cov[i][i] - 2 * mo.cov[i][j] + mo.cov[j][j];
            if (std::abs(grad) <= 1e-14 * (1 + std::abs(mo.mean[i]))) {
                return lambda;
            }
            if (hess <= 1e-300) {
                return std::nullopt;
            }
            t = std::clamp(t - grad / hess, -0.5, 1.5);
            if (t <= 0 || t >= 1) {
                // Retry once from the boundary side before giving up.
                if (step > 5) {
                    return std::nullopt;
                }
                t = std::clamp(t, 1e-9, 1 - 1e-9);
            }
        }
        return std::nullopt;
    }

    // lambda = (a, b, 1 - a - b) with a, b > 0, a + b < 1.
    std::optional<std::array<double, 3>> interior_stationary() const {
        double a = 1.0 / 3, b = 1.0 / 3;
        for (int step = 0; step < 100; ++step) {
            const std::array<double, 3> lambda{a, b, 1 - a - b};
            const Moments mo = moments(lambda);
            const double ga = mo.mean[0] - mo.mean[2];
            const double gb = mo.mean[1] - mo.mean[2];
            if (std::abs(ga) + std::abs(gb) <= 1e-14 * (1 + std::abs(mo.mean[2]))) {
                return lambda;
            }
            const auto& c = mo.cov;
            const double haa = c[0][0] - 2 * c[0][2] + c[2][2];
            const double hbb = c[1][1] - 2 * c[1][2] + c[2][2];
            const double hab = c[0][1] - c[0][2] - c[1][2] + c[2][2];
            const double det = haa * hbb - hab * hab;
            if (det <= 1e-300) {
                return std::nullopt;
            }
            double da = (hbb * ga - hab * gb) / det;
            double db = (haa * gb - hab * ga) / det;
            // Keep the iterate strictly inside; a minimiser outside belongs to another face.
            double scale = 1;
            while (scale > 1e-6 && (a - scale * da <= 0 || b - scale * db <= 0 || a + b - scale * (da + db) >= 1)) {
                scale /= 2;
            }
            if (scale <= 1e-6) {
                return std::nullopt;
            }
            a -= scale * da;
            b -= scale * db;
        }
        return std::nullopt;
    }

    const std::vector<double>& p_;
    const std::vector<double>& g_;
};


// Log-barrier Newton method for max t subject to H_i(P) >= t (nats) on the simplex.
// flat[e * 3 + i] is the compressed value of coordinate i on element e.
struct BarrierPoint {
    std::vector<double> p;
    std::array<double, 3> lambda{};
    std::uint64_t steps = 0;
};

std::optional<BarrierPoint> barrier_solve(const std::vector<std::size_t>& flat, const std::vector<std::size_t>& used,
                                          std::size_t n) {
    constexpr std::size_t k = 3;
    const auto dim = static_cast<Eigen::Index>(n + 1);
    std::vector<double> p(n, 1.0 / static_cast<double>(n));
    std::array<std::vector<double>, k> m;
    auto evaluate = [&](const std::vector<double>& q, std::array<double, k>& h) {
        for (std::size_t i = 0; i < k; ++i) {
            m[i].assign(used[i], 0.0);
        }
        for (std::size_t e = 0; e < n; ++e) {
            for (std::size_t i = 0; i < k; ++i) {
                m[i][flat[e * k + i]] += q[e];
            }
        }
        for (std::size_t i = 0; i < k; ++i) {
            h[i] = 0;
            for (double x : m[i]) {
                if (x > 0) {
                    h[i] -= x * std::log(x);
                }
            }
        }
    };
    std::array<double, k> h{};
    evaluate(p, h);
    double t = *std::min_element(h.begin(), h.end()) - 1.0;
    auto objective = [&](const std::vector<double>& q, double tt, double mu) {
        std::array<double, k> hh{};
        evaluate(q, hh);
        double f = tt;
        for (std::size_t i = 0; i < k; ++i) {
            if (hh[i] - tt <= 0) {
                return -std::numeric_limits<double>::infinity();
            }
            f += mu * std::log(hh[i] - tt);
        }
        for (double x : q) {
            if (x <= 0) {
                return -std::numeric_limits<double>::infinity();
            }
            f += mu * std::log(x);
        }
        return f;
    };

    Eigen::MatrixXd kkt(dim + 1, dim + 1);
    Eigen::VectorXd rhs(dim + 1);
    std::array<Eigen::VectorXd, k> grad_h;
    double mu = 1.0;
    std::uint64_t steps = 0;
    for (int outer = 0; outer < 60 && mu > 1e-15; ++outer) {
        for (int step = 0; step < 100; ++step, ++steps) {
            evaluate(p, h);
            std::array<double, k> s{};
            for (std::size_t i = 0; i < k; ++i) {
                s[i] = h[i] - t;
                grad_h[i] = Eigen::VectorXd::Zero(dim);
                for (std::size_t e = 0; e < n; ++e) {
                    grad_h[i](static_cast<Eigen::Index>(e)) = -std::log(m[i][flat[e * k + i]]) - 1.0;
                }
                grad_h[i](dim - 1) = -1.0;
            }
            kkt.setZero();
            rhs.setZero();
            rhs(dim - 1) = 1.0;
            for (std::size_t i = 0; i < k; ++i) {
                rhs.head(dim) += mu / s[i] * grad_h[i];
                kkt.topLeftCorner(dim, dim) -= mu / (s[i] * s[i]) * grad_h[i] * grad_h[i].transpose();
                for (std::size_t a = 0; a < n; ++a) {
                    for (std::size_t b = 0; b < n; ++b) {
                        if (flat[a * k + i] == flat[b * k + i]) {
                            kkt(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) -=
                                mu / (s[i] * m[i][flat[a * k + i]]);
                        }
                    }
                }
            }
            for (std::size_t e = 0; e < n; ++e) {
                const auto ee = static_cast<Eigen::Index>(e);
                rhs(ee) += mu / p[e];
                kkt(ee, ee) -= mu / (p[e] * p[e]);
                kkt(ee, dim) = 1.0;
                kkt(dim, ee) = 1.0;
            }
            // Newton step for a concave objective on the hyperplane sum P = 1.
            const Eigen::VectorXd dir = kkt.partialPivLu().solve(-rhs);
            if (!dir.allFinite()) {
                return std::nullopt;
            }
            const double decrement = rhs.head(dim).dot(dir.head(dim));
            if (decrement <= 1e-3 * mu * 1e-6) {
                break;
            }
            const double f0 = objective(p, t, mu);
            double alpha = 1.0;
            std::vector<double> q(n);
            bool moved = false;
            for (int back = 0; back < 60; ++back, alpha *= 0.5) {
                for (std::size_t e = 0; e < n; ++e) {
                    q[e] = p[e] + alpha * dir(static_cast<Eigen::Index>(e));
                }
                const double tt = t + alpha * dir(dim - 1);
                if (objective(q, tt, mu) >= f0 + 0.25 * alpha * decrement) {
                    p = q;
                    t = tt;
                    moved = true;
                    break;
                }
            }
            if (!moved) {
                break;
            }
        }
        mu *= 0.2;
    }
    evaluate(p, h);
    BarrierPoint out;
    out.p = p;
    out.steps = steps;
    double total = 0;
    for (std::size_t i = 0; i < k; ++i) {
        out.lambda[i] = 1.0 / (h[i] - t);
        total += out.lambda[i];
    }
    for (auto& x : out.lambda) {
        x /= total;
    }
    return out;
}

}  // namespace

bool verify_tight(const SupportSet& phi, const TightnessCertificate& cert) {
    if (!shape_matches(phi, cert)) {
        return false;
    }
    for (const auto& map : cert.maps) {
        std::vector<std::int64_t> sorted = map;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            return false;
        }
    }
    const auto& elements = phi.elements();
    for (std::size_t e = 0; e < elements.size(); ++e) {
        const auto x = elements[e];
        __int128 sum = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            sum += cert.maps[i][x[i]];
        }
        if (sum != 0) {
            return false;
        }
    }
    return true;
}

TightnessCertificate corner_tight_certificate(const GroupSpec& g) {
    const std::int64_t m = g.order();
    const std::size_t n = static_cast<std::size_t>(m * m);
    TightnessCertificate cert;
    cert.k = 3;
    cert.maps.assign(3, std::vector<std::int64_t>(n));
    for (std::uint32_t g1 = 0; g1 < g.order(); ++g1) {
        for (std::uint32_t g2 = 0; g2 < g.order(); ++g2) {
            const std::size_t v = static_cast<std::size_t>(m * g1 + g2);
            const std::int64_t s = g.add(g1, g2);
            cert.maps[0][v] = g1 + m * g2;
            cert.maps[1][v] = m * m * s - m * g2;
            cert.maps[2][v] = -m * m * s - g1;
        }
    }
    if (!verify_tight(adjacency_support(corner_hypergraph(g)), cert)) {
        throw VerificationFailure("corner tightness maps do not verify");
    }
    return cert;
}

std::optional<TightnessCertificate> find_tight_certificate(const SupportSet& phi, const TightSearchOptions& options) {
    const int k = phi.arity();
    std::vector<std::size_t> offset(static_cast<std::size_t>(k) + 1, 0);
    for (int i = 0; i < k; ++i) {
        offset[static_cast<std::size_t>(i) + 1] = offset[static_cast<std::size_t>(i)] + phi.ground_size(i);
    }
    const std::size_t variables = offset.back();
    std::vector<int> coordinate(variables);
    for (int i = 0; i < k; ++i) {
        for (std::size_t v = offset[static_cast<std::size_t>(i)]; v < offset[static_cast<std::size_t>(i) + 1]; ++v) {
            coordinate[v] = i;
        }
    }

    EchelonSystem system(variables);
    const auto& elements = phi.elements();
    for (std::size_t e = 0; e < elements.size(); ++e) {
        std::vector<mpq_class> row(variables, 0);
        const auto x = elements[e];
        for (std::size_t i = 0; i < x.size(); ++i) {
            row[offset[i] + x[i]] = 1;
        }
        system.add_row(std::move(row));
    }

    std::vector<std::size_t> free;
    std::vector<std::size_t> free_position(variables, 0);
    for (std::size_t v = 0; v < variables; ++v) {
        if (!system.is_pivot(v)) {
            free_position[v] = free.size();
            free.push_back(v);
        }
    }

    // Pivot v: den * u_v = -sum_f num[f] u_f, integer coefficients over free positions.
    struct Pivot {
        std::size_t variable;
        mpz_class den;
        std::vector<std::pair<std::size_t, mpz_class>> terms;
    };
    std::vector<std::vector<Pivot>> ready_after(free.size() + 1);
    std::vector<std::vector<mpq_class>> expression(variables, std::vector<mpq_class>(free.size(), 0));
    for (std::size_t v = 0; v < variables; ++v) {
        if (!system.is_pivot(v)) {
            expression[v][free_position[v]] = 1;
            continue;
        }
        const auto& row = system.row_of(v);
        Pivot pivot{v, 1, {}};
        for (std::size_t f = 0; f < free.size(); ++f) {
            const mpq_class& c = row[free[f]];
            if (c != 0) {
                expression[v][f] = -c;
                mpz_lcm(pivot.den.get_mpz_t(), pivot.den.get_mpz_t(), c.get_den_mpz_t());
            }
        }
        std::size_t last = 0;
        for (std::size_t f = 0; f < free.size(); ++f) {
            const mpq_class& c = row[free[f]];
            if (c != 0) {
                pivot.terms.emplace_back(f, mpz_class(c * pivot.den));
                last = f + 1;
            }
        }
        ready_after[last].push_back(std::move(pivot));
    }

    // An implied equality u_i(a) = u_i(b) rules out injectivity for any bound.
    for (std::size_t a = 0; a < variables; ++a) {
        for (std::size_t b = a + 1; b < variables && coordinate[b] == coordinate[a]; ++b) {
            if (expression[a] == expression[b]) {
                return std::nullopt;
            }
        }
    }

    const std::int64_t bound = options.value_bound;
    std::vector<std::int64_t> value(variables, 0);
    std::vector<std::vector<std::int64_t>> taken(static_cast<std::size_t>(k));
    std::vector<std::int64_t> candidates{0};
    for (std::int64_t c = 1; c <= bound; ++c) {
        candidates.push_back(c);
        candidates.push_back(-c);
    }
    std::uint64_t nodes = 0;
    bool aborted = false;

    auto place = [&](std::size_t v, std::int64_t x) {
        auto& used = taken[static_cast<std::size_t>(coordinate[v])];
        if (std::find(used.begin(), used.end(), x) != used.end()) {
            return false;
        }
        used.push_back(x);
        value[v] = x;
        return true;
    };
    auto unplace = [&](std::size_t v) { taken[static_cast<std::size_t>(coordinate[v])].pop_back(); };

    // Assigns the pivots completed after `level` free variables; returns how many were placed.
    auto settle = [&](std::size_t level, std::vector<std::size_t>& placed) {
        for (const auto& pivot : ready_after[level]) {
            mpz_class sum = 0;
            for (const auto& [f, c] : pivot.terms) {
                sum -= c * value[free[f]];
            }
            if (!mpz_divisible_p(sum.get_mpz_t(), pivot.den.get_mpz_t())) {
                return false;
            }
            const mpz_class x = sum / pivot.den;
            if (abs(x) > bound || !place(pivot.variable, x.get_si())) {
                return false;
            }
            placed.push_back(pivot.variable);
        }
        return true;
    };

    auto recurse = [&](auto&& self, std::size_t level) -> bool {
        if (++nodes > options.max_nodes) {
            aborted = true;
            return false;
        }
        if (level == free.size()) {
            return true;
        }
        const std::size_t v = free[level];
        for (std::int64_t x : candidates) {
            if (!place(v, x)) {
                continue;
            }
            std::vector<std::size_t> placed;
            if (settle(level + 1, placed) && self(self, level + 1)) {
                return true;
            }
            for (auto it = placed.rbegin(); it != placed.rend(); ++it) {
                unplace(*it);
            }
            unplace(v);
            if (aborted) {
                return false;
            }
        }
        return false;
    };

    std::vector<std::size_t> placed;
    if (!settle(0, placed) || !recurse(recurse, 0)) {
        return std::nullopt;
    }
    TightnessCertificate cert;
    cert.k = k;
    cert.maps.resize(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        cert.maps[ii].assign(value.begin() + static_cast<std::ptrdiff_t>(offset[ii]),
                             value.begin() + static_cast<std::ptrdiff_t>(offset[ii + 1]));
    }
    if (!verify_tight(phi, cert)) {
        throw VerificationFailure("tightness search produced an invalid certificate");
    }
    return cert;
}

EntropyResult entropy_im_bound(const SupportSet& phi, const EntropyOptions& options) {
    if (phi.arity() != 3) {
        throw InvalidArgument("the entropy program characterises induced matchings only for k = 3");
    }
    if (phi.size() == 0) {
        throw InvalidArgument("empty support");
    }
    constexpr std::size_t k = 3;
    const auto& elements = phi.elements();
    const std::size_t n = elements.size();

    // Values used by phi, compressed per coordinate.
    std::vector<std::vector<std::size_t>> index(k);
    std::vector<std::size_t> used(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
        index[i].assign(phi.ground_size(static_cast<int>(i)), static_cast<std::size_t>(-1));
        for (std::size_t e = 0; e < n; ++e) {
            auto& slot = index[i][elements[e][i]];
            if (slot == static_cast<std::size_t>(-1)) {
                slot = used[i]++;
            }
        }
    }
    std::vector<std::size_t> flat(n * k);
    for (std::size_t e = 0; e < n; ++e) {
        for (std::size_t i = 0; i < k; ++i) {
            flat[e * k + i] = index[i][elements[e][i]];
        }
    }

    EntropyResult out;
    out.marginals.resize(k);
    auto marginals = [&](const std::vector<double>& p, std::vector<std::vector<double>>& m) {
        for (std::size_t i = 0; i < k; ++i) {
            m[i].assign(used[i], 0.0);
        }
        for (std::size_t e = 0; e < n; ++e) {
            for (std::size_t i = 0; i < k; ++i) {
                m[i][flat[e * k + i]] += p[e];
            }
        }
    };
    auto entropy = [](const std::vector<double>& m) {
        double h = 0;
        for (double q : m) {
            if (q > 0) {
                h -= q * std::log2(q);
            }
        }
        return h;
    };

    // Every marginal entropy is at most log2 of its support size.
    double ceiling = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
        ceiling = std::min(ceiling, std::log2(static_cast<double>(used[i])));
    }

    std::vector<double> p(n, 1.0 / static_cast<double>(n));
    std::vector<std::vector<double>> m(k);
    marginals(p, m);
    bool uniform = true;
    for (std::size_t i = 0; i < k && uniform; ++i) {
        const double target = 1.0 / static_cast<double>(used[i]);
        uniform = std::all_of(m[i].begin(), m[i].end(), [&](double q) { return std::abs(q - target) <= 1e-12; });
    }
    if (uniform) {
        out.uniform_shortcut = true;
        out.distribution = p;
        out.marginals = m;
        out.exponent = ceiling;
        out.upper_exponent = ceiling;
        out.value = std::exp2(ceiling);
        return out;
    }

    // Minorize-maximize: H_i(Q) >= <Q, g_i> - KL(Q || P) with g_i(x) = -ln P_i(x_i), so
    // the step Q = P exp(sum_i lambda_i g_i) / Z with lambda minimising ln Z never
    // decreases min_i H_i. The same lambda bounds the optimum by max_x sum_i lambda_i g_i.
    std::vector<double> g(n * k);
    double best_lower = -1.0;
    double best_upper = ceiling;
    auto certify = [&](const std::vector<double>& q, const std::array<double, 3>& lambda) {
        marginals(q, m);
        double lower = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < k; ++i) {
            lower = std::min(lower, entropy(m[i]));
        }
        if (lower > best_lower) {
            best_lower = lower;
            out.distribution = q;
            out.marginals = m;
        }
        double upper = 0;
        for (std::size_t e = 0; e < n; ++e) {
            double x = 0;
            for (std::size_t i = 0; i < k; ++i) {
                const double mi = m[i][flat[e * k + i]];
                x += lambda[i] * (mi > 0 ? -std::log(mi) : kLargeLog);
            }
            upper = std::max(upper, x);
        }
        best_upper = std::min(best_upper, upper / std::log(2.0));
    };
    if (n <= kBarrierLimit) {
        if (const auto start = barrier_solve(flat, used, n)) {
            certify(start->p, start->lambda);
            out.iterations = start->steps;
            if (best_upper - best_lower <= options.tolerance) {
                out.exponent = best_lower;
                out.upper_exponent = best_upper;
                out.residual = best_upper - best_lower;
                out.value = std::exp2(best_lower);
                return out;
            }
            p = start->p;
        }
    }
    for (std::uint64_t it = 1; it <= options.max_iterations; ++it) {
        marginals(p, m);
        double lower = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < k; ++i) {
            lower = std::min(lower, entropy(m[i]));
        }
        if (lower > best_lower) {
            best_lower = lower;
            out.distribution = p;
            out.marginals = m;
        }
        for (std::size_t e = 0; e < n; ++e) {
            for (std::size_t i = 0; i < k; ++i) {
                const double q = m[i][flat[e * k + i]];
                g[e * k + i] = q > 0 ? -std::log(q) : kLargeLog;
            }
        }
        const TiltedFamily family(p, g);
        const std::array<double, 3> lambda = family.minimise();
        double upper = 0;
        for (std::size_t e = 0; e < n; ++e) {
            upper = std::max(upper, family.exponent(lambda, e));
        }
        best_upper = std::min(best_upper, upper / std::log(2.0));
        out.iterations = it;
        if (best_upper - best_lower <= options.tolerance) {
            break;
        }
        if (it == options.max_iterations) {
            throw NonConvergence("entropy program gap " + std::to_string(best_upper - best_lower) + " after " +
                                 std::to_string(it) + " iterations");
        }
        p = family.tilt(lambda);
    }
    out.exponent = best_lower;
    out.upper_exponent = best_upper;
    out.residual = best_upper - best_lower;
    out.value = std::exp2(best_lower);
    return out;
}

BarrierReport im_barrier_report(const Hypergraph& h, const std::optional<TightnessCertificate>& cert,
                                const EntropyOptions& options) {
    if (h.arity() != 3) {
        throw InvalidArgument("the barrier is stated for 3-uniform hypergraphs");
    }
    const SupportSet phi = adjacency_support(h);
    BarrierReport report;
    report.vertex_count = h.vertex_count();
    if (cert) {
        if (!verify_tight(phi, *cert)) {
            throw InvalidArgument("the given tightness certificate does not verify");
        }
        report.certificate = cert;
    } else {
        report.certificate = find_tight_certificate(phi);
    }
    report.tightness_verified = report.certificate.has_value();
    report.entropy = entropy_im_bound(phi, options);
    report.label = report.tightness_verified ? "asymptotic induced matching number"
                                             : "entropy program value (tightness unverified)";
    return report;
}

std::string render(const BarrierReport& report) {
    std::ostringstream out;
    out.precision(12);
    out << "bound: Q~_IM(Phi_H) = " << report.entropy.value << " ; " << report.label << ", residual "
        << report.entropy.residual << "\n";
    if (report.tightness_verified) {
        out << "bound: IM-respecting upper bound on Theta(H) >= " << report.entropy.value
            << " ; Theta(H) <= Q~_IM(Phi_H)\n";
        if (report.entropy.value >= static_cast<double>(report.vertex_count) - 1e-6) {
            out << "barrier: no induced-matching method beats the trivial bound |V| = " << report.vertex_count << "\n";
        }
    }
    return out.str();
}

}  // namespace capdeg
