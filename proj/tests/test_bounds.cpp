#include <doctest.h>

#include <cmath>

#include "capdeg/bounds.hpp"
#include "capdeg/constructions.hpp"
#include "capdeg/error.hpp"

using namespace capdeg;

namespace {

// Closed forms in long double, independent of the library's MPFR evaluation.
long double corner_closed_form(long double m, int n) {
    const long double mn = std::pow(m, static_cast<long double>(n));
    return 2 * mn * mn / (3 * std::sqrt(3 * (mn - 1)));
}

long double kdim_closed_form(long double m, int n, int k) {
    return k * std::pow(m, static_cast<long double>(k * n)) /
           (std::pow(m, static_cast<long double>(n) / k) * std::pow(k + 1.0L, (k + 1.0L) / k));
}

long double kplayer_closed_form(long double order, long double n, int k) {
    return n / k * std::log2(order) + std::log2(n) + std::log2(std::log2(order)) +
           (1.0L + 1.0L / k) * std::log2(1.0L + k) + k;
}

void check_close(const DirectedReal& x, long double expected, Rounding direction, double tolerance = 1e-12) {
    CHECK(x.direction == direction);
    CHECK(std::fabs(static_cast<long double>(x.value) - expected) <= tolerance * std::max(1.0L, std::fabs(expected)));
}

}  // namespace

TEST_CASE("probabilistic corner bound") {
    const auto b = prob_corner_bound(GroupSpec({2}), 1);
    check_close(b.value, 8.0L / (3 * std::sqrt(3.0L)), Rounding::down);
    CHECK(b.value.value == doctest::Approx(1.5396).epsilon(1e-4));
    check_close(b.asymptotic_rate, std::sqrt(8.0L), Rounding::down);
    for (std::uint32_t m : {2U, 3U, 5U}) {
        for (int n : {1, 2, 3, 7}) {
            const auto bound = prob_corner_bound(GroupSpec({m}), n);
            check_close(bound.value, corner_closed_form(m, n), Rounding::down);
            check_close(bound.rate_at_n, std::pow(corner_closed_form(m, n), 1.0L / n), Rounding::down);
        }
    }
    CHECK_THROWS_AS(prob_corner_bound(GroupSpec({1}), 3), InvalidArgument);
    CHECK_THROWS_AS(prob_corner_bound(GroupSpec({2}), 0), InvalidArgument);
}

TEST_CASE("property: rates increase towards m^(3/2) from below") {
    for (std::uint32_t m : {2U, 3U, 4U}) {
        double previous = 0;
        for (int n : {2, 4, 8, 16, 32}) {
            const auto b = prob_corner_bound(GroupSpec({m}), n);
            CHECK(b.rate_at_n.value > previous);
            CHECK(b.rate_at_n.value < std::pow(m, 1.5));
            previous = b.rate_at_n.value;
        }
    }
}

TEST_CASE("k-dimensional corner bound") {
    check_close(kdim_prob_bound(GroupSpec({2}), 4, 3).value, 768.0L, Rounding::down);
    check_close(kdim_prob_bound(GroupSpec({2}), 4, 3).asymptotic_rate, std::pow(2.0L, 8.0L / 3), Rounding::down);
    CHECK(kdim_prob_bound(GroupSpec({2}), 1, 3).asymptotic_rate.value == doctest::Approx(6.3496).epsilon(1e-4));
    for (int n : {1, 2, 5}) {
        check_close(kdim_prob_bound(GroupSpec({3}), n, 4).value, kdim_closed_form(3, n, 4), Rounding::down);
    }
    CHECK(kdim_prob_bound(GroupSpec({3}), 3, 2).asymptotic_rate.value ==
          doctest::Approx(prob_corner_bound(GroupSpec({3}), 3).asymptotic_rate.value));
}

TEST_CASE("rate parsing") {
    CHECK(RateSpec::parse("7").base == 7);
    CHECK(RateSpec::parse("39^(1/3)").root == 3);
    CHECK(RateSpec::parse("39^1/3").base == 39);
    CHECK(RateSpec::parse("2.5").base == mpq_class(5, 2));
    CHECK(RateSpec::parse("39/4").base == mpq_class(39, 4));
    CHECK_THROWS_AS(RateSpec::parse("seven"), ParseError);
}

TEST_CASE("NOF coefficients") {
    const auto f2 = nof_from_rate(GroupSpec({2}), RateSpec::parse("39^(1/3)"));
    check_close(f2.nof_upper_coefficient, 2 - std::log2(39.0L) / 3, Rounding::up);
    CHECK(f2.nof_upper_coefficient.value <= 0.24);
    const auto f3 = nof_from_rate(GroupSpec({3}), RateSpec::parse("7"));
    check_close(f3.nof_upper_coefficient, std::log2(9.0L / 7), Rounding::up);
    CHECK(f3.nof_upper_coefficient.value <= 0.37);
    CHECK(nof_from_rate(GroupSpec({2}), RateSpec::parse("4")).nof_upper_coefficient.value == doctest::Approx(0.0));
    CHECK(f3.capacity_lower.value <= f3.capacity_upper.value);
    CHECK_THROWS_AS(nof_from_rate(GroupSpec({2}), RateSpec::parse("5")), InvalidArgument);
    CHECK_THROWS_AS(nof_from_rate(GroupSpec({2}), RateSpec::parse("1/2")), InvalidArgument);
}

TEST_CASE("property: NOF coefficient is antitone in the rate") {
    double previous = 1e9;
    for (int num = 4; num <= 36; ++num) {
        const auto r = nof_from_rate(GroupSpec({3}), RateSpec::parse(std::to_string(num) + "/4"));
        CHECK(r.nof_upper_coefficient.value < previous);
        previous = r.nof_upper_coefficient.value;
    }
}

TEST_CASE("k-player bound") {
    CHECK(kplayer_nof_bound(GroupSpec({2}), 1000, 2).coefficient.value == doctest::Approx(0.5));
    check_close(kplayer_nof_bound(GroupSpec({2}), 1024, 10).value, kplayer_closed_form(2, 1024, 10), Rounding::up);
    check_close(kplayer_nof_bound(GroupSpec({3}), 500, 3).value, kplayer_closed_form(3, 500, 3), Rounding::up);
    CHECK(kplayer_nof_bound(GroupSpec({2}), 1024, 10).sublinear.has_value());
    double previous = 1e9;
    for (int k : {2, 4, 8}) {
        const double v = kplayer_nof_bound(GroupSpec({2}), 1024, k).value.value;
        CHECK(v < previous);
        previous = v;
    }
}

TEST_CASE("trivial bounds") {
    const Hypergraph f2 = corner_hypergraph(GroupSpec({2}));
    const auto [lo, hi] = trivial_bounds(f2, 8, 2);
    check_close(lo, std::sqrt(8.0L), Rounding::down);
    check_close(hi, 4, Rounding::up);
    check_close(trivial_bounds(f2, 1, 5).first, 1, Rounding::down);
    check_close(trivial_bounds(f2, 24, 3).first, std::cbrt(24.0L), Rounding::down);
    CHECK(trivial_bounds(f2, 24, 3).first.value == doctest::Approx(2.884).epsilon(1e-3));
}

TEST_CASE("randomized corner-free sets") {
    const GroupSpec g({2});
    const auto a = randomized_cornerfree(g, 3, 42, 20);
    CHECK(is_cornerfree(a));
    CHECK(randomized_cornerfree(g, 3, 42, 20) == a);
    CHECK(is_cornerfree(randomized_cornerfree(g, 1, 1, 5)));
    const auto b = randomized_cornerfree(GroupSpec({3}), 2, 7, 3);
    CHECK(b == randomized_cornerfree(GroupSpec({3}), 2, 7, 3));
}

TEST_CASE("property: randomized outputs are always corner-free") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        for (std::uint32_t m : {2U, 3U}) {
            CHECK(is_cornerfree(randomized_cornerfree(GroupSpec({m}), m == 2 ? 4 : 2, seed, 2)));
        }
    }
}

TEST_CASE("bound reports render one line per claim") {
    const std::string text = render(nof_from_rate(GroupSpec({2}), RateSpec::parse("39^(1/3)")));
    std::size_t lines = 0;
    for (char c : text) {
        lines += c == '\n';
    }
    CHECK(lines == 5);
    CHECK(text.rfind("bound: ", 0) == 0);
}
