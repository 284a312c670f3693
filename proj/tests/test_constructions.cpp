#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "capdeg/constructions.hpp"
#include "capdeg/error.hpp"
#include "capdeg/exact_solvers.hpp"
#include "capdeg/hypergraph.hpp"
#include "support.hpp"

using namespace capdeg;

namespace {

std::set<std::vector<Vertex>> tuples_of(const TupleSet& s) {
    std::set<std::vector<Vertex>> out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        out.emplace(s[i].begin(), s[i].end());
    }
    return out;
}

// Corner check straight from the definition over encoded group elements.
bool brute_cornerfree(const GroupSpec& g, const std::set<std::pair<std::uint32_t, std::uint32_t>>& t) {
    for (auto [x, y] : t) {
        for (std::uint32_t l = 1; l < g.order(); ++l) {
            if (t.contains({g.add(x, l), y}) && t.contains({x, g.add(y, l)})) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

TEST_CASE("tuple sets sort and deduplicate") {
    const auto s = TupleSet::from_flat(2, {3, 1, 0, 2, 3, 1});
    CHECK(s.size() == 2);
    CHECK(s[0][0] == 0);
    CHECK(s.contains(std::vector<Vertex>{3, 1}));
    CHECK_FALSE(s.contains(std::vector<Vertex>{1, 3}));
    CHECK_THROWS_AS(TupleSet::from_flat(2, {1, 2, 3}), InvalidArgument);
}

TEST_CASE("hypergraph rejects constant edges and bad indices") {
    CHECK_THROWS_AS(Hypergraph(3, {{0}, {1}}, std::vector<std::vector<Vertex>>{{1, 1, 1}}), InvalidArgument);
    CHECK_THROWS_AS(Hypergraph(3, {{0}, {1}}, std::vector<std::vector<Vertex>>{{0, 1, 2}}), InvalidArgument);
    CHECK_THROWS_AS(Hypergraph(3, {{0}, {0}}, std::vector<std::vector<Vertex>>{}), InvalidArgument);
    CHECK_THROWS_AS(Hypergraph::edgeless(1, 3), InvalidArgument);
}

TEST_CASE("corner hypergraph over F2 matches the listed edges") {
    const Hypergraph h = corner_hypergraph(GroupSpec({2}));
    CHECK(h.vertex_count() == 4);
    CHECK(tuples_of(h.edges()) == std::set<std::vector<Vertex>>{{0, 2, 1}, {1, 3, 0}, {2, 0, 3}, {3, 1, 2}});
}

TEST_CASE("corner hypergraph over F3 has the listed support") {
    const std::set<std::vector<Vertex>> expected{
        {0, 0, 0}, {1, 1, 1}, {2, 2, 2}, {3, 3, 3}, {4, 4, 4}, {5, 5, 5}, {6, 6, 6}, {7, 7, 7}, {8, 8, 8},
        {0, 3, 1}, {0, 6, 2}, {1, 4, 2}, {1, 7, 0}, {2, 5, 0}, {2, 8, 1}, {3, 6, 4}, {3, 0, 5}, {4, 7, 5},
        {4, 1, 3}, {5, 8, 3}, {5, 2, 4}, {6, 0, 7}, {6, 3, 8}, {7, 1, 8}, {7, 4, 6}, {8, 2, 6}, {8, 5, 7}};
    CHECK(tuples_of(adjacency_support(corner_hypergraph(GroupSpec({3}))).elements()) == expected);
}

TEST_CASE("corner hypergraph edge count is m^2 (m-1)") {
    for (std::uint32_t m = 1; m <= 9; ++m) {
        const Hypergraph h = corner_hypergraph(GroupSpec({m}));
        CHECK(h.vertex_count() == m * m);
        CHECK(h.edge_count() == m * m * (m - 1));
    }
    const Hypergraph h = corner_hypergraph(GroupSpec({2, 2}));
    CHECK(h.edge_count() == 16 * 3);
}

TEST_CASE("k-dimensional corners") {
    CHECK(kcorner_hypergraph(GroupSpec({2}), 2) == corner_hypergraph(GroupSpec({2})));
    const Hypergraph f2 = kcorner_hypergraph(GroupSpec({2}), 3);
    CHECK(f2.arity() == 4);
    CHECK(f2.vertex_count() == 8);
    CHECK(f2.edge_count() == 8);
    const Hypergraph f3 = kcorner_hypergraph(GroupSpec({3}), 3);
    CHECK(f3.vertex_count() == 27);
    CHECK(f3.edge_count() == 54);
    CHECK_THROWS_AS(kcorner_hypergraph(GroupSpec({2}), 1), InvalidArgument);
}

TEST_CASE("cap set hypergraph") {
    const Hypergraph h = capset_hypergraph();
    CHECK(h.vertex_count() == 3);
    CHECK(h.edge_count() == 6);
    CHECK(adjacency_support(h).size() == 9);
    CHECK(testing::brute_alpha(h) == 2);
}

TEST_CASE("group encoding is a mixed-radix bijection") {
    const GroupSpec g({2, 3, 4});
    CHECK(g.order() == 24);
    for (std::uint32_t c = 0; c < g.order(); ++c) {
        CHECK(g.encode(g.decode(c)) == c);
        CHECK(g.add(c, g.negate(c)) == 0);
    }
    CHECK(g.decode(23) == GroupElement{1, 2, 3});
    CHECK(GroupSpec::parse("2,2") == GroupSpec({2, 2}));
    CHECK(GroupSpec({3}).power(2) == GroupSpec({3, 3}));
    CHECK_THROWS_AS(GroupSpec::parse("2,x"), InvalidArgument);
    CHECK_THROWS_AS(GroupSpec({0}), InvalidArgument);
}

TEST_CASE("trivial group gives one vertex and no edges") {
    const Hypergraph h = corner_hypergraph(GroupSpec({1}));
    CHECK(h.vertex_count() == 1);
    CHECK(h.edge_count() == 0);
}

TEST_CASE("corner-freeness examples") {
    const GroupSpec g({3});
    std::vector<std::vector<std::uint32_t>> diagonal_shift;
    for (std::uint32_t l = 0; l < 3; ++l) {
        diagonal_shift.push_back({1, g.add(1, l)});
    }
    CHECK(is_cornerfree(GroundSubset(g, 2, diagonal_shift)));

    std::vector<std::vector<std::uint32_t>> everything;
    for (std::uint32_t a = 0; a < 3; ++a) {
        for (std::uint32_t b = 0; b < 3; ++b) {
            everything.push_back({a, b});
        }
    }
    CHECK_FALSE(is_cornerfree(GroundSubset(g, 2, everything)));
}

TEST_CASE("lift of an AP-free set") {
    const GroupSpec g({3});
    const GroundSubset t = lift_apfree_to_cornerfree(GroundSubset(g, 1, {{0}, {1}}));
    CHECK(t.size() == 6);
    std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
    for (const auto& e : t.elements()) {
        pairs.insert({e[0], e[1]});
    }
    CHECK(brute_cornerfree(g, pairs));
    CHECK(lift_apfree_to_cornerfree(GroundSubset(g, 1, {})).size() == 0);
    CHECK_THROWS_AS(lift_apfree_to_cornerfree(GroundSubset(g, 1, {{0}, {1}, {2}})), InvalidArgument);
    // {0, 4} has no proper progression in Z_8 but 4 + 4 = 0 makes its lift contain corners.
    CHECK(is_apfree(GroundSubset(GroupSpec({8}), 1, {{0}, {4}})));
    CHECK_THROWS_AS(lift_apfree_to_cornerfree(GroundSubset(GroupSpec({8}), 1, {{0}, {4}})), InvalidArgument);
}

TEST_CASE("lift of a maximum AP-free set in F3^2") {
    const GroupSpec g({3, 3});
    // The independent sets of the square of the cap hypergraph are the AP-free sets of F3^2.
    const auto outcome = independence_number(power(capset_hypergraph(), 2));
    REQUIRE(outcome.value == 4);
    std::vector<std::vector<std::uint32_t>> s;
    for (Vertex v : outcome.witness) {
        s.push_back({v});
    }
    const GroundSubset t = lift_apfree_to_cornerfree(GroundSubset(g, 1, s));
    CHECK(t.size() == 36);
    std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
    for (const auto& e : t.elements()) {
        pairs.insert({e[0], e[1]});
    }
    CHECK(brute_cornerfree(g, pairs));
}

TEST_CASE("property: corner-free iff independent in the corner hypergraph") {
    std::mt19937_64 rng(11);
    for (std::uint32_t m = 2; m <= 4; ++m) {
        const GroupSpec g({m});
        const Hypergraph h = corner_hypergraph(g);
        for (int trial = 0; trial < 200; ++trial) {
            std::uint64_t mask = rng() & ((std::uint64_t{1} << (m * m)) - 1);
            std::vector<std::vector<std::uint32_t>> elements;
            for (Vertex v : testing::mask_to_set(mask)) {
                elements.push_back({v / m, v % m});
            }
            const GroundSubset t(g, 2, elements);
            CHECK(is_cornerfree(t) == testing::brute_independent(h, mask));
        }
    }
}

TEST_CASE("property: lifts of random AP-free sets are corner-free") {
    std::mt19937_64 rng(5);
    for (std::uint32_t m : {5U, 7U, 9U, 11U}) {
        const GroupSpec g({m});
        for (int trial = 0; trial < 30; ++trial) {
            // Greedy random AP-free set: add elements in random order while no 3-AP appears.
            std::vector<std::uint32_t> order(m);
            std::iota(order.begin(), order.end(), 0U);
            std::shuffle(order.begin(), order.end(), rng);
            std::vector<std::vector<std::uint32_t>> s;
            for (std::uint32_t x : order) {
                auto candidate = s;
                candidate.push_back({x});
                if (is_apfree(GroundSubset(g, 1, candidate))) {
                    s = std::move(candidate);
                }
            }
            const GroundSubset t = lift_apfree_to_cornerfree(GroundSubset(g, 1, s));
            CHECK(t.size() == m * s.size());
            std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
            for (const auto& e : t.elements()) {
                pairs.insert({e[0], e[1]});
            }
            CHECK(brute_cornerfree(g, pairs));
        }
    }
}

TEST_CASE("strong product and support multiplicativity") {
    const Hypergraph f2 = corner_hypergraph(GroupSpec({2}));
    const Hypergraph sq = power(f2, 2);
    CHECK(sq.vertex_count() == 16);
    CHECK(adjacency_support(sq).size() == 64);
    CHECK(power(f2, 3).edge_count() == 448);
    CHECK(adjacency_support(sq) == support_power(adjacency_support(f2), 2));
    CHECK(adjacency_support(strong_product(f2, capset_hypergraph())) ==
          support_product(adjacency_support(f2), adjacency_support(capset_hypergraph())));
    CHECK(decode_string(4, 3, encode_string(4, std::vector<Vertex>{3, 0, 2})) == VertexString{3, 0, 2});
}

TEST_CASE("property: power support streaming agrees with the materialized support") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const Hypergraph h = testing::random_hypergraph(rng, 3, 3, 0.1);
        const SupportSet base = adjacency_support(h);
        const SupportSet sq = support_power(base, 2);
        std::size_t visited = 0;
        for_each_power_support_element(base, 2, [&](std::span<const VertexString> strings) {
            ++visited;
            std::vector<Vertex> tuple;
            for (const auto& s : strings) {
                tuple.push_back(static_cast<Vertex>(encode_string(3, s)));
            }
            CHECK(sq.contains(tuple));
            CHECK(power_support_contains(base, strings));
        });
        CHECK(visited == sq.size());
        CHECK(sq.size() == base.size() * base.size());
    }
}
