#include "capdeg/acyclic.hpp"

#include <algorithm>
#include <chrono>
#include <queue>

#include "capdeg/error.hpp"

namespace capdeg {

namespace {

using Clock = std::chrono::steady_clock;

// Kahn's algorithm over the arcs among `inside`, lowest index first.
std::optional<std::vector<Vertex>> topological_order(std::size_t vertex_count, const std::vector<char>& inside,
                                                     const std::vector<std::pair<Vertex, Vertex>>& arcs) {
    std::vector<std::vector<Vertex>> out(vertex_count);
    std::vector<std::size_t> indegree(vertex_count, 0);
    for (const auto& [a, b] : arcs) {
        if (a == b) {
            return std::nullopt;
        }
        out[a].push_back(b);
        ++indegree[b];
    }
    std::priority_queue<Vertex, std::vector<Vertex>, std::greater<>> ready;
    std::size_t members = 0;
    for (Vertex v = 0; v < vertex_count; ++v) {
        if (inside[v]) {
            ++members;
            if (indegree[v] == 0) {
                ready.push(v);
            }
        }
    }
    std::vector<Vertex> order;
    while (!ready.empty()) {
        const Vertex v = ready.top();
        ready.pop();
        order.push_back(v);
        for (Vertex w : out[v]) {
            if (--indegree[w] == 0) {
                ready.push(w);
            }
        }
    }
    if (order.size() != members) {
        return std::nullopt;
    }
    return order;
}

std::vector<std::pair<Vertex, Vertex>> induced_arcs(const Hypergraph& h, const std::vector<char>& inside) {
    std::vector<std::pair<Vertex, Vertex>> arcs;
    const auto& edges = h.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto edge = edges[e];
        if (std::all_of(edge.begin(), edge.end(), [&](Vertex v) { return inside[v] != 0; })) {
            arcs.emplace_back(edge[0], edge[1]);
        }
    }
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
    return arcs;
}

std::vector<char> membership(std::size_t vertex_count, std::span<const Vertex> set) {
    std::vector<char> inside(vertex_count, 0);
    for (Vertex v : set) {
        if (v >= vertex_count) {
            throw InvalidArgument("vertex index out of range");
        }
        inside[v] = 1;
    }
    return inside;
}

}  // namespace

std::vector<std::size_t> ProjectedDigraph::degrees() const {
    std::vector<std::size_t> degree(vertex_count, 0);
    for (const auto& [a, b] : arcs) {
        ++degree[a];
        ++degree[b];
    }
    return degree;
}

ProjectedDigraph project_digraph(const Hypergraph& h) {
    ProjectedDigraph g;
    g.vertex_count = h.vertex_count();
    g.arcs = induced_arcs(h, std::vector<char>(h.vertex_count(), 1));
    return g;
}

std::optional<std::vector<Vertex>> is_acyclic_set(const Hypergraph& h, std::span<const Vertex> set) {
    const auto inside = membership(h.vertex_count(), set);
    return topological_order(h.vertex_count(), inside, induced_arcs(h, inside));
}

SolveOutcome max_acyclic_set(const Hypergraph& h, const Budget& budget) {
    const auto start = Clock::now();
    const auto deadline = start + std::chrono::duration_cast<Clock::duration>(budget.max_time);
    const std::size_t n = h.vertex_count();

    // Edges by their largest vertex: an edge becomes induced when that vertex joins.
    std::vector<std::vector<std::size_t>> closing(n);
    const auto& edges = h.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto edge = edges[e];
        closing[*std::max_element(edge.begin(), edge.end())].push_back(e);
    }

    std::vector<char> inside(n, 0);
    std::vector<std::pair<Vertex, Vertex>> arcs;
    std::vector<Vertex> chosen;
    std::vector<Vertex> best;
    std::uint64_t nodes = 0;
    bool aborted = false;

    auto recurse = [&](auto&& self, Vertex v) -> void {
        if (++nodes > budget.max_nodes || ((nodes & 1023u) == 0 && Clock::now() > deadline)) {
            aborted = true;
        }
        if (aborted) {
            return;
        }
        if (chosen.size() > best.size()) {
            best = chosen;
        }
        if (v == n || chosen.size() + (n - v) <= best.size()) {
            return;
        }
        const std::size_t arc_mark = arcs.size();
        inside[v] = 1;
        for (std::size_t e : closing[v]) {
            const auto edge = edges[e];
            if (std::all_of(edge.begin(), edge.end(), [&](Vertex w) { return inside[w] != 0; })) {
                arcs.emplace_back(edge[0], edge[1]);
            }
        }
        if (arcs.size() == arc_mark || topological_order(n, inside, arcs)) {
            chosen.push_back(v);
            self(self, v + 1);
            chosen.pop_back();
        }
        arcs.resize(arc_mark);
        inside[v] = 0;
        self(self, v + 1);
    };
    recurse(recurse, 0);

    SolveOutcome out;
    out.value = best.size();
    out.witness = best;
    out.status = aborted ? SolveStatus::lower_bound_only : SolveStatus::exact;
    out.nodes_explored = nodes;
    out.wall_time = Clock::now() - start;
    if (!is_acyclic_set(h, out.witness)) {
        throw VerificationFailure("acyclic set witness does not verify");
    }
    return out;
}

DegenerationCertificate acyclic_to_degeneration(const Hypergraph& h, std::span<const Vertex> set) {
    auto order = is_acyclic_set(h, set);
    if (!order) {
        throw InvalidArgument("the set is not acyclic");
    }
    const std::size_t n = h.vertex_count();
    const int k = h.arity();
    const std::int64_t max_rank = order->empty() ? 0 : static_cast<std::int64_t>(order->size() - 1);
    const std::int64_t outside = 1 + static_cast<std::int64_t>(k) * static_cast<std::int64_t>(n) * max_rank;

    DegenerationCertificate cert;
    cert.k = k;
    cert.subset.assign(order->begin(), order->end());
    std::sort(cert.subset.begin(), cert.subset.end());
    cert.maps.assign(static_cast<std::size_t>(k), std::vector<std::int64_t>(n, outside));
    for (std::size_t r = 0; r < order->size(); ++r) {
        const Vertex v = (*order)[r];
        const auto rank = static_cast<std::int64_t>(r);
        cert.maps[0][v] = -rank;
        cert.maps[1][v] = rank;
        for (int i = 2; i < k; ++i) {
            cert.maps[static_cast<std::size_t>(i)][v] = 0;
        }
    }
    return cert;
}

bool digraph_full_capacity_check(const Hypergraph& g) {
    if (g.arity() != 2) {
        throw InvalidArgument("full capacity check needs a digraph (k = 2)");
    }
    std::vector<Vertex> all(g.vertex_count());
    for (Vertex v = 0; v < all.size(); ++v) {
        all[v] = v;
    }
    return is_acyclic_set(g, all).has_value();
}

}  // namespace capdeg
