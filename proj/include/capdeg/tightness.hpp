#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "capdeg/constructions.hpp"
#include "capdeg/hypergraph.hpp"

namespace capdeg {

// Injective maps u_i : I_i -> Z with u_1(x_1) + ... + u_k(x_k) = 0 on a support.
struct TightnessCertificate {
    int k = 0;
    std::vector<std::vector<std::int64_t>> maps;  // maps[i][a] = u_{i+1}(a)

    friend bool operator==(const TightnessCertificate&, const TightnessCertificate&) = default;
};

// Injectivity of every map on its whole ground set and zero sums on phi. A
// certificate of the wrong shape is reported as false.
bool verify_tight(const SupportSet& phi, const TightnessCertificate& cert);

// On the corner support of G, with vertex (g1, g2) = m phi(g1) + phi(g2):
//   u_1 = phi(g1) + m phi(g2)
//   u_2 = m^2 phi(g1 + g2) - m phi(g2)
//   u_3 = -m^2 phi(g1 + g2) - phi(g1)
// Throws VerificationFailure if the result does not verify.
TightnessCertificate corner_tight_certificate(const GroupSpec& g);

struct TightSearchOptions {
    std::int64_t value_bound = 16;
    std::uint64_t max_nodes = 10'000'000;
};

// Exact search for a certificate with |u_i(a)| <= value_bound. The zero-sum
// equations are put in reduced row echelon form over Q; the free variables are
// enumerated in [-bound, bound] and the pivots follow. nullopt means no
// certificate within the bound (or the node cap was hit), except when some pair
// u_i(a) = u_i(b) is implied by the equations, which rules out every bound.
std::optional<TightnessCertificate> find_tight_certificate(const SupportSet& phi,
                                                          const TightSearchOptions& options = {});

struct EntropyOptions {
    double tolerance = 1e-9;  // on the exponent min_i H(P_i), in bits
    std::uint64_t max_iterations = 1'000'000;
};

struct EntropyResult {
    double value = 0.0;        // 2^exponent
    double exponent = 0.0;     // min_i H(P_i) at the returned distribution
    double upper_exponent = 0.0;  // certified upper bound on the optimum
    double residual = 0.0;     // upper_exponent - exponent
    std::vector<double> distribution;  // indexed like phi.elements()
    std::vector<std::vector<double>> marginals;
    std::uint64_t iterations = 0;
    bool uniform_shortcut = false;
};

// max over distributions P on phi of min_i 2^{H(P_i)}. Tries the uniform
// distribution first; if its marginals are uniform it is optimal. Otherwise runs
// exponentiated gradient on a soft-min of the marginal entropies. The upper bound
// is max_x sum_i lambda_i (-log2 P_i(x_i)) for the current soft-min weights.
// Throws InvalidArgument unless phi has arity 3 and is nonempty, NonConvergence
// at the iteration cap.
EntropyResult entropy_im_bound(const SupportSet& phi, const EntropyOptions& options = {});

struct BarrierReport {
    EntropyResult entropy;
    bool tightness_verified = false;
    std::optional<TightnessCertificate> certificate;
    std::size_t vertex_count = 0;
    std::string label;  // "asymptotic induced matching number" or "entropy program value (tightness unverified)"
};

// Entropy value of supp(h) as the limit for induced-matching upper bounds on
// Theta(h). Uses `cert` when given, otherwise searches for one. Throws
// InvalidArgument when h is not 3-uniform or a given certificate does not verify.
BarrierReport im_barrier_report(const Hypergraph& h, const std::optional<TightnessCertificate>& cert = std::nullopt,
                                const EntropyOptions& options = {});

std::string render(const BarrierReport& report);

}  // namespace capdeg
