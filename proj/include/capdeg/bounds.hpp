#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include <gmpxx.h>

#include "capdeg/constructions.hpp"
#include "capdeg/hypergraph.hpp"

namespace capdeg {

enum class Rounding { down, up };

// A real bound evaluated at 128-bit precision and rounded towards the safe side:
// down for lower bounds, up for upper bounds. Both the double and the decimal
// text are rounded in that direction.
struct DirectedReal {
    double value = 0.0;
    Rounding direction = Rounding::down;
    std::string text;
};

// The real number base^(1/root), base a positive rational.
struct RateSpec {
    mpq_class base = 1;
    unsigned root = 1;

    // Accepts "7", "2.5", "39/4", "39^(1/3)" and "39^1/3".
    static RateSpec parse(const std::string& text);
    std::string to_string() const;
};

struct ProbCornerBound {
    DirectedReal value;            // 2 m^{2n} / (3 sqrt(3 (m^n - 1))), lower bound on alpha
    DirectedReal rate_at_n;        // value^{1/n}
    DirectedReal asymptotic_rate;  // m^{3/2}
};

// Expected size of the sample-and-prune set in the corner hypergraph of G^n.
// Throws InvalidArgument for the trivial group or n < 1.
ProbCornerBound prob_corner_bound(const GroupSpec& g, int n);

struct KdimBound {
    DirectedReal value;            // k m^{kn} / (m^{n/k} (k+1)^{(k+1)/k})
    DirectedReal asymptotic_rate;  // m^{k - 1/k}
};

// Same argument for k-dimensional corners. Throws InvalidArgument for k < 2, n < 1
// or the trivial group.
KdimBound kdim_prob_bound(const GroupSpec& g, int n, int k);

// Samples every vertex of the corner hypergraph of G^n with probability
// p = 1/sqrt(3(m^n - 1)), then walks the edges in lexicographic order and removes
// the largest vertex of each edge still inside the set. Trial t uses an mt19937_64
// seeded with seed_seq{seed, t}. Returns the largest set, earliest trial on ties.
GroundSubset randomized_cornerfree(const GroupSpec& g, int n, std::uint64_t seed, int trials);

struct BoundReport {
    GroupSpec group{{2}};
    int n = 0;  // 0: symbolic in n
    int k = 2;
    std::string corner_free_size;
    DirectedReal capacity_lower;
    std::string capacity_lower_source;
    DirectedReal capacity_upper;
    std::string capacity_upper_source;
    DirectedReal coloring_base;  // |G|^2 / rate
    std::string coloring_upper;  // "c * n * <base>^n", c unspecified
    DirectedReal nof_upper_coefficient;  // log2(|G|^2 / rate)
};

// Turns a capacity lower bound for the corner hypergraph of G into colouring and
// three-player NOF upper bounds. Throws InvalidArgument unless 1 <= rate <= |G|^2.
BoundReport nof_from_rate(const GroupSpec& g, const RateSpec& rate);

struct KPlayerBound {
    // (n/k) log|G| + log n + log log|G| + (1 + 1/k) log(1 + k) + k, logs base 2.
    DirectedReal value;
    DirectedReal coefficient;  // log|G| / k
    // "(n / log n) * log|G| + O(log n)" when k is floor or ceil of log2 n.
    std::optional<std::string> sublinear;
};

// Upper bound on the (k+1)-player NOF complexity of Eval over G^n. Throws
// InvalidArgument for k < 2, n < 1 or the trivial group.
KPlayerBound kplayer_nof_bound(const GroupSpec& g, std::int64_t n, int k);

// (s^{1/n}, |V|) for an independent set of size s in the n-th power of h.
std::pair<DirectedReal, DirectedReal> trivial_bounds(const Hypergraph& h, const mpz_class& s, int n);

// One "bound: name = value (source)" line per claim.
std::string render(const ProbCornerBound& bound, const GroupSpec& g, int n);
std::string render(const KdimBound& bound, const GroupSpec& g, int n, int k);
std::string render(const BoundReport& report);
std::string render(const KPlayerBound& bound, const GroupSpec& g, std::int64_t n, int k);

}  // namespace capdeg
