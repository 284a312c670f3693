#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "capdeg/hypergraph.hpp"

namespace capdeg {

struct Budget {
    std::uint64_t max_nodes = 100'000'000;
    std::chrono::duration<double> max_time = std::chrono::minutes(30);
};

enum class SolveStatus { exact, lower_bound_only };

std::string to_string(SolveStatus status);

struct SolveOutcome {
    std::size_t value = 0;
    // Vertex indices for independence-type problems; support element indices for
    // induced matchings.
    std::vector<Vertex> witness;
    SolveStatus status = SolveStatus::exact;
    std::uint64_t nodes_explored = 0;
    std::chrono::duration<double> wall_time{0};
};

// A family of forbidden vertex sets: a set of vertices is feasible iff it contains
// no forbidden set entirely. Independent sets and induced matchings are both
// maximum feasible sets of such a family.
struct ForbiddenSetFamily {
    std::size_t vertex_count = 0;
    std::vector<std::vector<Vertex>> sets;
};

// Exact maximum feasible set by branch and bound with greedy clique-partition
// bounds over the pairwise (and dynamically induced pairwise) conflicts.
SolveOutcome max_feasible_set(const ForbiddenSetFamily& family, const Budget& budget = {});

// Forbidden sets of the independence problem: the vertex set of every edge.
ForbiddenSetFamily independence_family(const Hypergraph& h);

// Forbidden sets of the induced-matching problem over the elements of `phi`: pairs
// sharing a coordinate, and every minimal group of elements whose coordinates
// assemble another element of `phi`.
ForbiddenSetFamily induced_matching_family(const SupportSet& phi);

SolveOutcome independence_number(const Hypergraph& h, const Budget& budget = {});
SolveOutcome induced_matching_number(const SupportSet& phi, const Budget& budget = {});

bool verify_independent(const Hypergraph& h, std::span<const Vertex> set);

// `elements` are indices into phi.elements().
bool verify_induced_matching(const SupportSet& phi, std::span<const Vertex> elements);

}  // namespace capdeg
