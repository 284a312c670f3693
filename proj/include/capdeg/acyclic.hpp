#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "capdeg/degeneration.hpp"
#include "capdeg/exact_solvers.hpp"
#include "capdeg/hypergraph.hpp"

namespace capdeg {

// Arcs (a_1, a_2) for every edge (a_1, a_2, ...). An edge with a_1 == a_2 gives a
// self-loop.
struct ProjectedDigraph {
    std::size_t vertex_count = 0;
    std::vector<std::pair<Vertex, Vertex>> arcs;  // sorted, unique

    std::vector<std::size_t> degrees() const;  // in-degree + out-degree
};

ProjectedDigraph project_digraph(const Hypergraph& h);

// Topological order of the projected digraph of the induced hypergraph H[A], or
// nullopt when it has a cycle (self-loops included). Among the vertices of
// in-degree zero the lowest index is removed first.
std::optional<std::vector<Vertex>> is_acyclic_set(const Hypergraph& h, std::span<const Vertex> set);

// Largest acyclic set by branch and bound with incremental cycle detection.
SolveOutcome max_acyclic_set(const Hypergraph& h, const Budget& budget = {});

// Maps u_1 = -rank, u_2 = rank, u_3 = ... = u_k = 0 on A, where rank is the
// position in the topological order, and the constant 1 + k |V| (max rank)
// on every coordinate outside A. Throws InvalidArgument when A is not acyclic.
DegenerationCertificate acyclic_to_degeneration(const Hypergraph& h, std::span<const Vertex> set);

// For a digraph (k = 2): whether it is acyclic. Throws InvalidArgument for k != 2.
bool digraph_full_capacity_check(const Hypergraph& g);

}  // namespace capdeg
