#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace capdeg {

using Vertex = std::uint32_t;
using Label = std::vector<int>;
using VertexString = std::vector<Vertex>;

// A set of k-tuples of indices stored flat, sorted lexicographically, without duplicates.
class TupleSet {
public:
    TupleSet() = default;
    explicit TupleSet(int arity) : arity_(arity) {}

    // Sorts and deduplicates `flat`, whose length must be a multiple of `arity`.
    static TupleSet from_flat(int arity, std::vector<Vertex> flat);
    static TupleSet from_tuples(int arity, const std::vector<std::vector<Vertex>>& tuples);

    int arity() const noexcept { return arity_; }
    std::size_t size() const noexcept { return arity_ == 0 ? 0 : data_.size() / static_cast<std::size_t>(arity_); }
    bool empty() const noexcept { return data_.empty(); }

    std::span<const Vertex> operator[](std::size_t i) const {
        return {data_.data() + i * static_cast<std::size_t>(arity_), static_cast<std::size_t>(arity_)};
    }

    std::optional<std::size_t> find(std::span<const Vertex> tuple) const;
    bool contains(std::span<const Vertex> tuple) const { return find(tuple).has_value(); }

    const std::vector<Vertex>& flat() const noexcept { return data_; }

    friend bool operator==(const TupleSet&, const TupleSet&) = default;

private:
    int arity_ = 0;
    std::vector<Vertex> data_;
};

bool is_constant(std::span<const Vertex> tuple);

// Directed k-uniform hypergraph. Immutable after construction.
//
// Edges never contain the constant tuples (v,...,v); those live only in the
// adjacency support. Vertex labels are tuples of small integers and must be
// pairwise distinct; products concatenate factor labels.
class Hypergraph {
public:
    Hypergraph(int arity, std::vector<Label> labels, TupleSet edges);
    Hypergraph(int arity, std::vector<Label> labels, const std::vector<std::vector<Vertex>>& edges);

    // Vertices labelled (0), (1), ..., no edges.
    static Hypergraph edgeless(int arity, std::size_t vertex_count);

    int arity() const noexcept { return arity_; }
    std::size_t vertex_count() const noexcept { return labels_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Label>& labels() const noexcept { return labels_; }
    const TupleSet& edges() const noexcept { return edges_; }
    bool has_edge(std::span<const Vertex> tuple) const { return edges_.contains(tuple); }

    friend bool operator==(const Hypergraph&, const Hypergraph&) = default;

private:
    int arity_;
    std::vector<Label> labels_;
    TupleSet edges_;
};

// A subset of I_1 x ... x I_k with I_i = {0, ..., ground_sizes[i]-1}.
class SupportSet {
public:
    SupportSet(std::vector<std::size_t> ground_sizes, TupleSet elements);

    int arity() const noexcept { return elements_.arity(); }
    const std::vector<std::size_t>& ground_sizes() const noexcept { return ground_sizes_; }
    std::size_t ground_size(int coordinate) const { return ground_sizes_.at(static_cast<std::size_t>(coordinate)); }
    const TupleSet& elements() const noexcept { return elements_; }
    std::size_t size() const noexcept { return elements_.size(); }
    bool contains(std::span<const Vertex> tuple) const { return elements_.contains(tuple); }

    friend bool operator==(const SupportSet&, const SupportSet&) = default;

private:
    std::vector<std::size_t> ground_sizes_;
    TupleSet elements_;
};

struct ResourceCaps {
    std::uint64_t max_support = 10'000'000;
};

// Psi = E together with the diagonal {(v,...,v)}.
SupportSet adjacency_support(const Hypergraph& h);

// Phi_S = {(v,...,v) : v in subset} inside V^k.
SupportSet diagonal_support(int arity, std::size_t vertex_count, std::span<const Vertex> subset);

// Coordinate-wise product: ((a_1,b_1),...,(a_k,b_k)) with pair index a_i * |I_i^B| + b_i.
SupportSet support_product(const SupportSet& a, const SupportSet& b);
SupportSet support_power(const SupportSet& base, int n, const ResourceCaps& caps = {});

Hypergraph strong_product(const Hypergraph& g, const Hypergraph& h);
Hypergraph power(const Hypergraph& h, int n, const ResourceCaps& caps = {});

// Index of the product vertex (x_1,...,x_n) in the n-th power of a hypergraph on
// `base_size` vertices: mixed radix, first factor most significant.
std::uint64_t encode_string(std::size_t base_size, std::span<const Vertex> string);
VertexString decode_string(std::size_t base_size, int n, std::uint64_t index);

// Streaming membership in the n-fold coordinate-wise power of `base`: true iff for
// every position j the tuple (strings[0][j], ..., strings[k-1][j]) lies in `base`.
bool power_support_contains(const SupportSet& base, std::span<const VertexString> strings);

// Edge membership in H^{boxtimes n} given the support of H: in the power support and
// not a constant tuple of strings.
bool is_power_edge(const SupportSet& base_support, std::span<const VertexString> strings);

// Visits every element of the n-fold power support in lexicographic order of the
// per-position element indices, without materializing it.
void for_each_power_support_element(const SupportSet& base, int n,
                                    const std::function<void(std::span<const VertexString>)>& visit);

}  // namespace capdeg
