#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "capdeg/rational_simplex.hpp"
#include "symmetry.hpp"

using namespace capdeg;
using capdeg::detail::ColouredGraph;
using capdeg::detail::Refiner;

namespace {

ColouredGraph random_graph(std::mt19937_64& rng, std::uint32_t n, double p, std::uint32_t colours) {
    std::bernoulli_distribution keep(p);
    std::uniform_int_distribution<std::uint32_t> colour(0, colours - 1);
    std::vector<std::uint32_t> c(n);
    for (auto& x : c) {
        x = colour(rng);
    }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t a = 0; a < n; ++a) {
        for (std::uint32_t b = a + 1; b < n; ++b) {
            if (keep(rng)) {
                edges.emplace_back(a, b);
            }
        }
    }
    return ColouredGraph(c, edges);
}

// Exhaustive: does some automorphism map a to b?
bool brute_maps(const ColouredGraph& g, std::uint32_t a, std::uint32_t b) {
    std::vector<std::uint32_t> perm(g.size());
    std::iota(perm.begin(), perm.end(), 0U);
    do {
        if (perm[a] == b && g.is_automorphism(perm)) {
            return true;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

}  // namespace

TEST_CASE("automorphisms of a cycle") {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t v = 0; v < 6; ++v) {
        edges.emplace_back(v, (v + 1) % 6);
    }
    const ColouredGraph cycle(std::vector<std::uint32_t>(6, 0), edges);
    Refiner refiner(cycle);
    const auto base = refiner.initial();
    for (std::uint32_t b = 0; b < 6; ++b) {
        const auto perm = refiner.find(base, 0, b, 1'000'000);
        REQUIRE(perm);
        CHECK((*perm)[0] == b);
        CHECK(cycle.is_automorphism(*perm));
    }
}

TEST_CASE("colours block automorphisms") {
    const ColouredGraph path({0, 1, 0}, {{0, 1}, {1, 2}});
    Refiner refiner(path);
    const auto base = refiner.initial();
    CHECK(refiner.find(base, 0, 2, 1000));
    CHECK_FALSE(refiner.find(base, 0, 1, 1000));
    CHECK_FALSE(refiner.exhausted());
}

TEST_CASE("property: automorphism search agrees with exhaustive search") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 150; ++trial) {
        const std::uint32_t n = 3 + static_cast<std::uint32_t>(trial % 5);
        const ColouredGraph g = random_graph(rng, n, 0.4, 1 + static_cast<std::uint32_t>(trial % 2));
        Refiner refiner(g);
        const auto base = refiner.initial();
        for (std::uint32_t b = 0; b < n; ++b) {
            const auto perm = refiner.find(base, 0, b, 10'000'000);
            REQUIRE_FALSE(refiner.exhausted());
            CHECK(perm.has_value() == brute_maps(g, 0, b));
            if (perm) {
                CHECK(g.is_automorphism(*perm));
                CHECK((*perm)[0] == b);
            }
        }
    }
}

TEST_CASE("simplex finds a feasible point") {
    // x + y <= 4, x - y >= 1, y >= 1
    RationalSimplex lp(2);
    const auto s = lp.add_row({{0, 1}, {1, 1}});
    const auto d = lp.add_row({{0, 1}, {1, -1}});
    lp.set_upper(s, mpq_class(4));
    lp.set_lower(d, mpq_class(1));
    lp.set_lower(1, mpq_class(1));
    REQUIRE(lp.check() == RationalSimplex::Result::feasible);
    const mpq_class x = lp.value(0);
    const mpq_class y = lp.value(1);
    CHECK(x + y <= 4);
    CHECK(x - y >= 1);
    CHECK(y >= 1);
}

TEST_CASE("simplex explains infeasibility") {
    // x + y >= 3 with x <= 1 and y <= 1.
    RationalSimplex lp(2);
    const auto s = lp.add_row({{0, 1}, {1, 1}});
    lp.set_lower(s, mpq_class(3));
    lp.set_upper(0, mpq_class(1));
    lp.set_upper(1, mpq_class(1));
    REQUIRE(lp.check() == RationalSimplex::Result::infeasible);
    CHECK_FALSE(lp.conflict().empty());
}

TEST_CASE("property: simplex agrees with exhaustive integer search on boxed systems") {
    // Random rows sum_j a_ij x_j >= b_i over the box [-3,3]^3: an integer solution
    // forces feasibility, and every returned point must satisfy the rows.
    std::mt19937_64 rng(58);
    std::uniform_int_distribution<int> coef(-3, 3);
    for (int trial = 0; trial < 200; ++trial) {
        const int rows = 2 + trial % 4;
        std::vector<std::vector<int>> a(static_cast<std::size_t>(rows), std::vector<int>(3));
        std::vector<int> b(static_cast<std::size_t>(rows));
        RationalSimplex lp(3);
        for (int j = 0; j < 3; ++j) {
            lp.set_bounds(static_cast<std::size_t>(j), mpq_class(-3), mpq_class(3));
        }
        for (int i = 0; i < rows; ++i) {
            std::vector<std::pair<RationalSimplex::Var, mpq_class>> row;
            for (int j = 0; j < 3; ++j) {
                a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = coef(rng);
                row.emplace_back(static_cast<std::size_t>(j), a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
            }
            b[static_cast<std::size_t>(i)] = coef(rng) * 2;
            lp.set_lower(lp.add_row(row), mpq_class(b[static_cast<std::size_t>(i)]));
        }
        bool integer_point = false;
        for (int x = -3; x <= 3 && !integer_point; ++x) {
            for (int y = -3; y <= 3 && !integer_point; ++y) {
                for (int z = -3; z <= 3 && !integer_point; ++z) {
                    bool ok = true;
                    for (int i = 0; i < rows && ok; ++i) {
                        const auto& r = a[static_cast<std::size_t>(i)];
                        ok = r[0] * x + r[1] * y + r[2] * z >= b[static_cast<std::size_t>(i)];
                    }
                    integer_point = ok;
                }
            }
        }
        const auto result = lp.check();
        REQUIRE(result != RationalSimplex::Result::pivot_limit);
        if (integer_point) {
            CHECK(result == RationalSimplex::Result::feasible);
        }
        if (result == RationalSimplex::Result::feasible) {
            for (int i = 0; i < rows; ++i) {
                mpq_class lhs = 0;
                for (int j = 0; j < 3; ++j) {
                    lhs += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * lp.value(static_cast<std::size_t>(j));
                }
                CHECK(lhs >= b[static_cast<std::size_t>(i)]);
            }
            for (int j = 0; j < 3; ++j) {
                CHECK(abs(lp.value(static_cast<std::size_t>(j))) <= 3);
            }
        }
    }
}
