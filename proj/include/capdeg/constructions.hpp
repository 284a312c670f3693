#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "capdeg/hypergraph.hpp"

namespace capdeg {

using GroupElement = std::vector<std::uint32_t>;

// Finite abelian group Z_{m_1} x ... x Z_{m_r}. Elements are encoded by the
// mixed-radix bijection phi onto {0, ..., m-1}, first modulus most significant.
class GroupSpec {
public:
    explicit GroupSpec(std::vector<std::uint32_t> moduli);

    // Parses "2", "3", "2,2", ...
    static GroupSpec parse(const std::string& text);

    // G^n: the moduli list repeated n times.
    GroupSpec power(int n) const;

    const std::vector<std::uint32_t>& moduli() const noexcept { return moduli_; }
    std::uint32_t order() const noexcept { return order_; }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
    std::uint32_t negate(std::uint32_t a) const;
    std::uint32_t subtract(std::uint32_t a, std::uint32_t b) const { return add(a, negate(b)); }

    GroupElement decode(std::uint32_t code) const;
    std::uint32_t encode(const GroupElement& element) const;

    std::string to_string() const;

    friend bool operator==(const GroupSpec&, const GroupSpec&) = default;

private:
    std::vector<std::uint32_t> moduli_;
    std::uint32_t order_;
};

// A set of d-tuples of group elements (each entry an encoded element).
class GroundSubset {
public:
    GroundSubset(GroupSpec group, int dimension, std::vector<std::vector<std::uint32_t>> elements);

    const GroupSpec& group() const noexcept { return group_; }
    int dimension() const noexcept { return dimension_; }
    const std::vector<std::vector<std::uint32_t>>& elements() const noexcept { return elements_; }
    std::size_t size() const noexcept { return elements_.size(); }

    // Index of a dimension-2 element (g1, g2) as a corner-hypergraph vertex: m*g1 + g2.
    std::vector<Vertex> as_vertices() const;

    friend bool operator==(const GroundSubset&, const GroundSubset&) = default;

private:
    GroupSpec group_;
    int dimension_;
    std::vector<std::vector<std::uint32_t>> elements_;
};

// Vertices G x G labelled (phi(g1), phi(g2)) with index m*phi(g1) + phi(g2); one
// edge ((g1,g2), (g1+l,g2), (g1,g2+l)) per g1, g2 and l != 0.
Hypergraph corner_hypergraph(const GroupSpec& group);

// (k+1)-uniform hypergraph of k-dimensional corners on G^k.
Hypergraph kcorner_hypergraph(const GroupSpec& group, int k);

// Three vertices and all six orderings of the single edge {0,1,2}.
Hypergraph capset_hypergraph();

bool is_apfree(const GroundSubset& s);
bool is_cornerfree(const GroundSubset& t);

// T = {(x, y) : x - y in S}. Throws InvalidArgument when S contains a three-term
// progression or two elements differing by an element of order two, and
// VerificationFailure if the result is not corner-free.
GroundSubset lift_apfree_to_cornerfree(const GroundSubset& s);

}  // namespace capdeg
