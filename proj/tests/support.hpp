#pragma once

// Brute-force oracles and random generators shared by the test binaries. None of
// these call into the solvers they are used to check.

#include <algorithm>
#include <cstdint>
#include <bit>
#include <functional>
#include <random>
#include <set>
#include <vector>

#include "capdeg/hypergraph.hpp"

namespace capdeg::testing {

inline Hypergraph random_hypergraph(std::mt19937_64& rng, std::size_t vertices, int arity, double edge_probability) {
    std::vector<std::vector<Vertex>> edges;
    std::vector<Vertex> tuple(static_cast<std::size_t>(arity), 0);
    std::bernoulli_distribution keep(edge_probability);
    std::function<void(int)> walk = [&](int i) {
        if (i == arity) {
            if (!is_constant(tuple) && keep(rng)) {
                edges.push_back(tuple);
            }
            return;
        }
        for (Vertex v = 0; v < vertices; ++v) {
            tuple[static_cast<std::size_t>(i)] = v;
            walk(i + 1);
        }
    };
    walk(0);
    std::vector<Label> labels;
    for (std::size_t v = 0; v < vertices; ++v) {
        labels.push_back({static_cast<int>(v)});
    }
    return Hypergraph(arity, labels, edges);
}

// Random instance with at most max_vertices vertices and a random edge density.
inline Hypergraph random_small_hypergraph(std::mt19937_64& rng, std::size_t max_vertices, int arity) {
    std::uniform_int_distribution<std::size_t> size(1, max_vertices);
    std::uniform_real_distribution<double> density(0.0, 0.15);
    const std::size_t v = size(rng);
    return random_hypergraph(rng, v, arity, density(rng));
}

inline bool subset_contains(std::uint64_t mask, std::span<const Vertex> tuple) {
    return std::all_of(tuple.begin(), tuple.end(), [&](Vertex v) { return (mask >> v) & 1U; });
}

inline bool brute_independent(const Hypergraph& h, std::uint64_t mask) {
    for (std::size_t e = 0; e < h.edge_count(); ++e) {
        if (subset_contains(mask, h.edges()[e])) {
            return false;
        }
    }
    return true;
}

inline std::size_t brute_alpha(const Hypergraph& h) {
    std::size_t best = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << h.vertex_count()); ++mask) {
        if (brute_independent(h, mask)) {
            best = std::max<std::size_t>(best, static_cast<std::size_t>(std::popcount(mask)));
        }
    }
    return best;
}

// Acyclicity of the digraph with an arc (e_1, e_2) for every edge inside the mask,
// by repeatedly deleting sources.
inline bool brute_acyclic(const Hypergraph& h, std::uint64_t mask) {
    std::vector<std::pair<Vertex, Vertex>> arcs;
    for (std::size_t e = 0; e < h.edge_count(); ++e) {
        const auto edge = h.edges()[e];
        if (subset_contains(mask, edge)) {
            arcs.emplace_back(edge[0], edge[1]);
        }
    }
    std::uint64_t alive = mask;
    bool changed = true;
    while (changed) {
        changed = false;
        for (Vertex v = 0; v < h.vertex_count(); ++v) {
            if (!((alive >> v) & 1U)) {
                continue;
            }
            const bool has_in = std::any_of(arcs.begin(), arcs.end(), [&](const auto& a) {
                return a.second == v && ((alive >> a.first) & 1U);
            });
            if (!has_in) {
                alive &= ~(std::uint64_t{1} << v);
                changed = true;
            }
        }
    }
    return alive == 0;
}

inline std::size_t brute_max_acyclic(const Hypergraph& h) {
    std::size_t best = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << h.vertex_count()); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) > best && brute_acyclic(h, mask)) {
            best = static_cast<std::size_t>(std::popcount(mask));
        }
    }
    return best;
}

// Definition check: pairwise different in every coordinate and phi restricted to
// D_1 x ... x D_k equals D.
inline bool brute_is_induced_matching(const SupportSet& phi, const std::vector<std::size_t>& d) {
    const int k = phi.arity();
    for (std::size_t a = 0; a < d.size(); ++a) {
        for (std::size_t b = a + 1; b < d.size(); ++b) {
            for (int i = 0; i < k; ++i) {
                if (phi.elements()[d[a]][static_cast<std::size_t>(i)] == phi.elements()[d[b]][static_cast<std::size_t>(i)]) {
                    return false;
                }
            }
        }
    }
    std::vector<std::set<Vertex>> projections(static_cast<std::size_t>(k));
    for (std::size_t e : d) {
        for (int i = 0; i < k; ++i) {
            projections[static_cast<std::size_t>(i)].insert(phi.elements()[e][static_cast<std::size_t>(i)]);
        }
    }
    for (std::size_t e = 0; e < phi.size(); ++e) {
        bool inside = true;
        for (int i = 0; i < k && inside; ++i) {
            inside = projections[static_cast<std::size_t>(i)].contains(phi.elements()[e][static_cast<std::size_t>(i)]);
        }
        if (inside && std::find(d.begin(), d.end(), e) == d.end()) {
            return false;
        }
    }
    return true;
}

// Exhaustive over matchings, which are few when the ground sets are small.
inline std::size_t brute_induced_matching(const SupportSet& phi) {
    std::size_t best = 0;
    std::vector<std::size_t> current;
    std::function<void(std::size_t)> walk = [&](std::size_t from) {
        if (brute_is_induced_matching(phi, current)) {
            best = std::max(best, current.size());
        }
        for (std::size_t e = from; e < phi.size(); ++e) {
            bool disjoint = true;
            for (std::size_t c : current) {
                for (int i = 0; i < phi.arity() && disjoint; ++i) {
                    disjoint = phi.elements()[c][static_cast<std::size_t>(i)] != phi.elements()[e][static_cast<std::size_t>(i)];
                }
            }
            if (disjoint) {
                current.push_back(e);
                walk(e + 1);
                current.pop_back();
            }
        }
    };
    walk(0);
    return best;
}

inline std::vector<Vertex> mask_to_set(std::uint64_t mask) {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < 64; ++v) {
        if ((mask >> v) & 1U) {
            out.push_back(v);
        }
    }
    return out;
}

}  // namespace capdeg::testing
