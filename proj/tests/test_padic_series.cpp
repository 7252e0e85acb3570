#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "piqlab/errors.hpp"
#include "piqlab/series/polydisc.hpp"
#include "test_support.hpp"

using namespace piqlab;
using namespace piqlab::series;

namespace {

PolydiscSeries uni(long p, std::map<int, long> terms, int D = 8)
{
    std::map<MultiIndex, Rational> t;
    for (auto [k, c] : terms) t[{k}] = Rational(c);
    return PolydiscSeries::from_rational_terms(p, 1, D, t, 20);
}

Radius r1(const Rational& m) { return Radius::uniform(1, m); }

// random polynomial in n variables whose coefficients are p^k * unit
PolydiscSeries random_series(testing::Gen& gen, long p, int n, int max_deg)
{
    std::map<MultiIndex, Rational> t;
    for (const auto& I : indices_up_to(n, max_deg)) {
        if (gen.range(0, 2) == 0) continue;
        long unit = 0;
        while (unit % p == 0) unit = gen.range(-30, 30);
        Rational c(unit);
        c *= numeric::pow(Rational(p), gen.range(-1, 3));
        t[I] = c;
    }
    if (t.empty()) t[MultiIndex(static_cast<std::size_t>(n), 0)] = 1;
    return PolydiscSeries::from_rational_terms(p, n, max_deg, t, 20);
}

Radius random_radius(testing::Gen& gen, int n)
{
    Radius r;
    for (int k = 0; k < n; ++k) r.exponents.emplace_back(gen.range(0, 4), 2);
    for (auto& m : r.exponents) m.canonicalize();
    return r;
}

} // namespace

TEST_CASE("gauss_norm examples")
{
    CHECK(gauss_norm(uni(5, {{1, 5}, {2, 1}}), r1(1)) == 2);
    CHECK(gauss_norm(uni(5, {{0, 7}}), r1(1)) == 0);
    CHECK(gauss_norm(uni(5, {{0, 25}, {1, 5}, {3, 1}}), r1(2)) == 2);
    CHECK_THROWS_AS(gauss_norm(PolydiscSeries(5, 1, 3), r1(0)), std::domain_error);
}

TEST_CASE("ord examples")
{
    CHECK(ord(uni(5, {{1, 5}, {2, 1}}), r1(1)) == 2);
    CHECK(ord(uni(5, {{1, 5}, {2, 1}}), r1(2)) == 1);
    CHECK(ord(uni(5, {{0, 3}}), r1(1)) == 0);
}

TEST_CASE("tail bounds gate certification")
{
    auto f = uni(5, {{1, 5}, {2, 1}}, 2);
    f.add_tail(2, r1(1));  // omitted terms could tie with the norm at radius 1/5
    CHECK_THROWS_AS(gauss_norm(f, r1(1)), TailDominates);
    // at a smaller radius the tail shrinks by (D+1) per unit of exponent
    CHECK(gauss_norm(f, r1(2)) == 3);
    CHECK_THROWS_AS(gauss_norm(f, r1(0)), TailDominates);

    auto g = uni(5, {{0, 1}}, 4);
    g.add_tail(Rational(1, 2), r1(0));
    CHECK(gauss_norm(g, r1(0)) == 0);

    // an approximate-zero coefficient is uncertain, not zero
    PolydiscSeries h(5, 1, 3);
    h.set_coefficient({0}, numeric::PadicNumber::from_rational(25, 5, 3));
    h.set_coefficient({1}, numeric::PadicNumber::approximate_zero(5, 1));
    CHECK_THROWS_AS(gauss_norm(h, r1(0)), TailDominates);
    CHECK(gauss_norm(h, r1(2)) == 2);
}

TEST_CASE("staircase_set examples")
{
    CHECK(staircase_set(uni(5, {{1, 5}, {2, 1}}), r1(1), 3) == std::set<MultiIndex>{{1}, {2}});
    CHECK(staircase_set(uni(5, {{0, 2}}), r1(0), 3) == std::set<MultiIndex>{{0}});
    auto f = PolydiscSeries::from_rational_terms(5, 2, 4, {{{1, 1}, 1}, {{2, 0}, 5}}, 10);
    CHECK(staircase_set(f, Radius::uniform(2, 0), 3) == std::set<MultiIndex>{{1, 1}, {2, 0}});
}

TEST_CASE("prime_factor_bound examples")
{
    CHECK(prime_factor_bound(uni(5, {{2, 1}, {1, 5}}), r1(0)) == 2);
    CHECK(prime_factor_bound(uni(5, {{0, 4}}), r1(0)) == 0);
    // (z-1)(z-2)(z-3) = z^3 - 6z^2 + 11z - 6
    CHECK(prime_factor_bound(uni(7, {{3, 1}, {2, -6}, {1, 11}, {0, -6}}), r1(0)) == 3);
}

TEST_CASE("ord is additive and the norm multiplicative")
{
    testing::Gen gen(2024);
    int certified = 0;
    for (int trial = 0; trial < 1000 && certified < 200; ++trial) {
        long p = gen.coin() ? 5 : 3;
        int n = static_cast<int>(gen.range(1, 2));
        auto f = random_series(gen, p, n, static_cast<int>(gen.range(1, 4)));
        auto g = random_series(gen, p, n, static_cast<int>(gen.range(1, 4)));
        Radius r = random_radius(gen, n);
        if (gen.range(0, 3) == 0) {
            // attach a tail comfortably below the norm
            Rational e = gauss_norm(f, r);
            f.add_tail(e + gen.range(1, 3), r);
        }
        try {
            auto fg = f * g;
            int o = ord(fg, r);
            Rational e = gauss_norm(fg, r);
            CHECK(o == ord(f, r) + ord(g, r));
            CHECK(e == gauss_norm(f, r) + gauss_norm(g, r));
            ++certified;
        } catch (const TailDominates&) {
        }
    }
    CHECK(certified == 200);
}

TEST_CASE("ord zero exactly for units")
{
    testing::Gen gen(77);
    int units = 0, nonunits = 0;
    for (int trial = 0; trial < 100; ++trial) {
        long p = 5;
        int n = static_cast<int>(gen.range(1, 2));
        auto f = random_series(gen, p, n, 3);
        Radius r = random_radius(gen, n);
        int o = ord(f, r);
        if (o == 0) {
            ++units;
            auto inv = certified_inverse(f, r);
            CHECK(gauss_norm(inv, r) == -gauss_norm(f, r));
            auto one = PolydiscSeries::constant(p, n, f.truncation(), numeric::PadicNumber::from_rational(1, p, 20));
            auto defect = f * inv - one;
            // ||f * inv - 1|| < 1, certified including the tail
            if (!defect.is_exact_zero()) CHECK(defect.norm_exponent_lower_bound(r) > 0);
        } else {
            ++nonunits;
            CHECK_THROWS_AS(certified_inverse(f, r), NotDivisible);
        }
    }
    CHECK(units > 10);
    CHECK(nonunits > 10);
}

TEST_CASE("inverse of 1 - 5z is the geometric series")
{
    auto f = uni(5, {{0, 1}, {1, -5}}, 6);
    auto inv = certified_inverse(f, r1(0));
    for (int k = 0; k <= 6; ++k) {
        CHECK(inv.coefficient({k}).agrees_with(numeric::PadicNumber::from_rational(numeric::pow(Rational(5), k), 5, 20)));
    }
    REQUIRE(inv.has_tail());
    CHECK(*inv.tail_exponent() >= 1);
}

TEST_CASE("staircase sets are monotone and stabilize")
{
    testing::Gen gen(99);
    for (int trial = 0; trial < 50; ++trial) {
        int n = static_cast<int>(gen.range(1, 2));
        int D = static_cast<int>(gen.range(1, 3));
        auto f = random_series(gen, 5, n, D);
        Radius r = random_radius(gen, n);
        std::size_t prev = 0;
        std::size_t stable_from = 0;
        for (int M = 0; M <= 4 * D + 4; ++M) {
            auto s = staircase_set(f, r, M);
            CHECK(s.size() >= prev);
            if (s.size() != prev) stable_from = static_cast<std::size_t>(M);
            prev = s.size();
        }
        CHECK(stable_from < static_cast<std::size_t>(4 * D));
    }
}

TEST_CASE("prime_factor_bound counts explicit non-unit factors")
{
    testing::Gen gen(5150);
    for (int trial = 0; trial < 50; ++trial) {
        int k = static_cast<int>(gen.range(1, 5));
        auto prod = uni(7, {{0, 1}}, 0);
        for (int j = 0; j < k; ++j) {
            // z - a with |a| <= 1 is not a unit on the closed unit disc
            prod = prod * uni(7, {{1, 1}, {0, gen.range(-20, 20)}}, 1);
        }
        if (gen.coin()) prod = prod * uni(7, {{0, 1}, {1, 7}}, 1);  // a unit factor
        CHECK(prime_factor_bound(prod, r1(0)) >= k);
    }
}

TEST_CASE("divisibility_descent_check examples")
{
    using numeric::GaussianRational;
    ExactSeries one{1, {{{0}, GaussianRational(1)}}};
    ExactSeries h{1, {{{0}, GaussianRational(3)}, {{2}, GaussianRational(Rational(1, 2))}}};
    auto a = divisibility_descent_check(one, h, 5);
    CHECK(a.quotient == h);
    CHECK(a.verdict == DescentVerdict::RationalQuotient);

    ExactSeries f{1, {{{0}, GaussianRational(1)}, {{1}, GaussianRational(1)}}};
    ExactSeries h2{1, {{{0}, GaussianRational(1)}, {{2}, GaussianRational(-1)}}};
    auto b = divisibility_descent_check(f, h2, 6);
    CHECK(b.quotient == ExactSeries{1, {{{0}, GaussianRational(1)}, {{1}, GaussianRational(-1)}}});
    CHECK(b.verdict == DescentVerdict::RationalQuotient);

    ExactSeries g_i{1, {{{0}, GaussianRational(1)}, {{1}, GaussianRational::i_unit()}}};
    auto c = divisibility_descent_check(f, f * g_i, 6);
    CHECK(c.quotient == g_i);
    CHECK(c.verdict == DescentVerdict::NotDivisibleWithinBase);
    REQUIRE(c.witness);
    CHECK(*c.witness == MultiIndex{1});

    ExactSeries t{1, {{{1}, GaussianRational(1)}}};
    CHECK_THROWS_AS(divisibility_descent_check(t, h, 3), std::invalid_argument);
}

TEST_CASE("descent over Q returns rational quotients of rational products")
{
    testing::Gen gen(8);
    for (int trial = 0; trial < 40; ++trial) {
        int n = static_cast<int>(gen.range(1, 2));
        ExactSeries f{n, {}}, g{n, {}};
        for (const auto& I : indices_up_to(n, 3)) {
            if (gen.coin()) f.terms[I] = numeric::GaussianRational(gen.rational(6));
            if (gen.coin()) g.terms[I] = numeric::GaussianRational(gen.rational(6));
        }
        f.terms[MultiIndex(static_cast<std::size_t>(n), 0)] = numeric::GaussianRational(gen.nonzero_rational(5));
        auto res = divisibility_descent_check(f, f * g, 6);
        CHECK(res.verdict == DescentVerdict::RationalQuotient);
        CHECK(res.quotient == g.truncated(6));
    }
}
