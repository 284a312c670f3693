#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "capdeg/exact_solvers.hpp"
#include "capdeg/hypergraph.hpp"

namespace capdeg {

// Integer maps u_1, ..., u_k on the coordinate ground sets, claimed to witness that
// the diagonal {(v,...,v) : v in S} is a combinatorial degeneration of a support.
struct DegenerationCertificate {
    int k = 0;
    std::vector<Vertex> subset;                  // S, sorted
    std::vector<std::vector<std::int64_t>> maps;  // maps[i][a] = u_{i+1}(a)

    friend bool operator==(const DegenerationCertificate&, const DegenerationCertificate&) = default;
};

struct DegenerationRow {
    std::vector<Vertex> element;
    std::vector<std::int64_t> evaluation;  // (u_1(x_1), ..., u_k(x_k))
    std::int64_t sum = 0;
    bool in_phi = false;
    bool ok = false;  // sum == 0 inside phi, sum > 0 outside
};

struct DegenerationReport {
    bool valid = false;
    // Diagonal elements first, then the remaining elements, each part in
    // lexicographic order.
    std::vector<DegenerationRow> rows;
    std::vector<std::size_t> violations;  // indices into rows
};

// Checks every element of psi: zero sum on phi, positive sum on psi \ phi.
// Throws InvalidArgument when phi is not contained in psi or the maps do not match
// the ground sets, and ResourceLimit when a sum overflows 64 bits.
DegenerationReport verify_degeneration(const SupportSet& psi, const SupportSet& phi,
                                       const DegenerationCertificate& cert);

// psi = adjacency support of h, phi = diagonal of cert.subset.
DegenerationReport verify_degeneration(const Hypergraph& h, const DegenerationCertificate& cert);

struct FeasibilityOptions {
    // Box |u_j(a)| <= max_abs on the rational solution; 0 means unbounded.
    std::int64_t max_abs = 0;
    // Upper bound on the diagonal sum of vertices outside S; 0 means unbounded.
    std::int64_t big_m = 0;
};

// Exact rational LP for the maps with S fixed: sums zero on the diagonal of S and at
// least one elsewhere in psi. A rational solution is scaled to integers. Requires
// psi to have equal ground sizes.
std::optional<DegenerationCertificate> subset_feasible(const SupportSet& psi, std::span<const Vertex> subset,
                                                       const FeasibilityOptions& options = {});

struct BetaOptions {
    std::int64_t max_abs = 20;
    std::int64_t big_m = 40;
    // For vertex-transitive h: some optimal S contains vertex 0, so fix t(0) = 1.
    bool assume_transitive = false;
    Budget budget;
};

struct BetaOutcome {
    SolveOutcome search;  // witness = S
    std::optional<DegenerationCertificate> certificate;
    std::uint64_t lp_checks = 0;
    std::uint64_t nogoods = 0;
};

// Branch and bound over t (the indicator of S) with an exact LP for the maps at
// every node and nogoods learned from infeasibility explanations. Vertices are
// branched in order of decreasing projected-digraph degree.
BetaOutcome beta_search(const Hypergraph& h, const BetaOptions& options = {});

// Strings of S^n in which every element of S occurs exactly n/|S| times. They form
// an independent set of H^n when cert verifies against h. Throws InvalidArgument
// when n is not a positive multiple of |S| or cert does not verify, and
// ResourceLimit when the set has more than max_strings members.
std::vector<VertexString> extract_independent_set(const Hypergraph& h, const DegenerationCertificate& cert, int n,
                                                  std::uint64_t max_strings = 10'000'000);

// n! / ((n/s)!)^s for s = |S|.
mpz_class uniform_string_count(std::size_t subset_size, int n);

struct SliceCount {
    std::vector<std::int64_t> sums;  // (p_1, ..., p_k)
    mpz_class count;
};

struct SliceReport {
    // The slice containing the uniform strings; present when |S| divides n.
    std::optional<SliceCount> uniform;
    // A largest slice among those with p_1 + ... + p_k = 0 (every slice of S^n).
    SliceCount best;
    std::size_t slices = 0;
};

// Counts the strings x in S^n with sum_j u_i(x_j) = p_i for all i, by dynamic
// programming over positions. Every such slice is an independent set of H^n.
SliceReport refined_slice_count(const Hypergraph& h, const DegenerationCertificate& cert, int n);

}  // namespace capdeg
