#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "piqlab/errors.hpp"
#include "piqlab/uniformize/uniformize.hpp"
#include "test_support.hpp"

using namespace piqlab;
using namespace piqlab::uniformize;

namespace {

constexpr long kPrec = 40;

PadicNumber padic(const Rational& q, long p) { return PadicNumber::from_rational(q, p, kPrec); }

Germ germ(long p, std::vector<long> coeffs, int D = 12)
{
    std::vector<Rational> c(coeffs.begin(), coeffs.end());
    return Germ::from_rational(p, c, D, kPrec);
}

PadicNumber eval_poly(const PolydiscSeries& f, const PadicNumber& x)
{
    PadicNumber acc = PadicNumber::zero(f.prime());
    for (int k = f.truncation(); k >= 0; --k) acc = acc * x + f.coefficient({k});
    return acc;
}

// exact rational power series helpers, independent of the p-adic code
using RSeries = std::vector<Rational>;

RSeries rmul(const RSeries& a, const RSeries& b, int D)
{
    RSeries out(static_cast<std::size_t>(D) + 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size() && static_cast<int>(i + j) <= D; ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

RSeries rcompose(const RSeries& F, const RSeries& phi, int D)
{
    RSeries acc(static_cast<std::size_t>(D) + 1, Rational(0));
    RSeries power(static_cast<std::size_t>(D) + 1, Rational(0));
    power[0] = 1;
    for (std::size_t k = 0; k < F.size(); ++k) {
        for (int i = 0; i <= D; ++i) acc[static_cast<std::size_t>(i)] += F[k] * power[static_cast<std::size_t>(i)];
        power = rmul(power, phi, D);
    }
    return acc;
}

// phi with F(phi(z)) = phi(z^2) for F = z^2 + z^3, found by solving one
// unknown coefficient at a time: the degree-(m+1) equation is linear in b_m
RSeries boettcher_oracle(int D)
{
    RSeries F{0, 0, 1, 1};
    RSeries phi(static_cast<std::size_t>(D) + 1, Rational(0));
    phi[1] = 1;
    for (int m = 2; m <= D; ++m) {
        auto defect = [&](const Rational& b) -> Rational {
            RSeries trial = phi;
            trial[static_cast<std::size_t>(m)] = b;
            RSeries lhs = rcompose(F, trial, m + 1);
            Rational rhs = (m + 1) % 2 == 0 ? trial[static_cast<std::size_t>((m + 1) / 2)] : Rational(0);
            return lhs[static_cast<std::size_t>(m + 1)] - rhs;
        };
        Rational d0 = defect(0);
        Rational slope = defect(1) - d0;
        phi[static_cast<std::size_t>(m)] = -d0 / slope;
    }
    return phi;
}

} // namespace

TEST_CASE("germ invariants")
{
    CHECK_NOTHROW(germ(5, {5, 1, 1}));
    CHECK_THROWS_AS(germ(5, {1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(Germ::from_rational(5, {0, Rational(1, 5)}, 4, kPrec), std::invalid_argument);
}

TEST_CASE("attracting fixed point examples")
{
    PadicNumber c0 = find_attracting_fixed_point(germ(5, {0, 0, 1}));
    CHECK(c0.is_indistinguishable_from_zero());

    PadicNumber c1 = find_attracting_fixed_point(germ(5, {5, 5}));
    CHECK(c1.agrees_with(padic(Rational(-5, 4), 5)));
    CHECK(*c1.valuation() == 1);

    Germ G = germ(5, {5, 0, 1});
    PadicNumber c2 = find_attracting_fixed_point(G);
    CHECK(c2.residue(2) == 5);
    CHECK((G.evaluate(c2) - c2).is_indistinguishable_from_zero());
    CHECK(c2.absolute_precision() >= 20);

    CHECK_THROWS_AS(find_attracting_fixed_point(germ(5, {5, 1})), PrecisionLoss);
}

TEST_CASE("Koenigs examples")
{
    Conjugacy lin = koenigs_linearize(germ(5, {0, 5}), 6);
    CHECK(lin.phi.coefficient({1}).agrees_with(padic(1, 5)));
    for (int k = 2; k <= 6; ++k) CHECK(lin.phi.coefficient({k}).is_indistinguishable_from_zero());

    Conjugacy quad = koenigs_linearize(germ(5, {0, 5, 1}), 8);
    CHECK(quad.phi.coefficient({2}).agrees_with(padic(Rational(1, 20), 5)));
    CHECK(quad.residual_within_certificate);
    CHECK(quad.certified);

    CHECK_THROWS_AS(koenigs_linearize(germ(5, {0, 1, 1}), 4), std::invalid_argument);
}

TEST_CASE("Koenigs residual on random germs")
{
    testing::Gen gen(101);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<long> c{0, 5};
        for (int k = 2; k <= 5; ++k) c.push_back(gen.range(-20, 20));
        Conjugacy conj = koenigs_linearize(germ(5, c), 12);
        CHECK(conj.residual_within_certificate);
        CHECK(conj.certified);
        CHECK(conj.precision_exponent > 0);
        CHECK(conj.target_exponent == conj.source_exponent);
    }
}

TEST_CASE("Boettcher examples")
{
    Conjugacy id = boettcher_coordinate(germ(7, {0, 0, 0, 1}), 6);
    CHECK(id.phi.coefficient({1}).agrees_with(padic(1, 7)));
    for (int k = 2; k <= 6; ++k) CHECK(id.phi.coefficient({k}).is_indistinguishable_from_zero());

    for (long a : {3L, -2L, 49L, 10L}) {
        Conjugacy c = boettcher_coordinate(germ(7, {0, 0, a}), 6);
        CHECK(c.phi.coefficient({1}).agrees_with(padic(Rational(1, a), 7)));
        for (int k = 2; k <= 6; ++k) CHECK(c.phi.coefficient({k}).is_indistinguishable_from_zero());
        CHECK(c.residual_within_certificate);
    }

    // 3 has no square root in Q_7
    CHECK_THROWS_AS(boettcher_coordinate(germ(7, {0, 0, 0, 3}), 6), ExtensionRequired);
    CHECK_THROWS_AS(boettcher_coordinate(germ(7, {0, 1, 1}), 6), std::invalid_argument);
}

TEST_CASE("Boettcher coordinate of z^2 + z^3 over Z_7 matches an exact rational solve")
{
    const int D = 10;
    Conjugacy c = boettcher_coordinate(germ(7, {0, 0, 1, 1}, 16), D);
    RSeries oracle = boettcher_oracle(D);
    for (int k = 1; k <= D; ++k) {
        CHECK(c.phi.coefficient({k}).agrees_with(padic(oracle[static_cast<std::size_t>(k)], 7)));
    }
    RSeries lhs = rcompose({0, 0, 1, 1}, oracle, D + 1);
    for (int k = 0; k <= D + 1; ++k) {
        Rational rhs = k % 2 == 0 ? oracle[static_cast<std::size_t>(k / 2)] : Rational(0);
        CHECK(lhs[static_cast<std::size_t>(k)] == rhs);
    }
    CHECK(c.residual_within_certificate);
    CHECK(c.certified);
}

TEST_CASE("certify_isometry examples")
{
    auto poly = [](long p, std::map<int, long> t) {
        std::map<series::MultiIndex, Rational> terms;
        for (auto [k, v] : t) terms[{k}] = v;
        return PolydiscSeries::from_rational_terms(p, 1, 4, terms, kPrec);
    };
    CHECK(certify_isometry(poly(5, {{1, 1}}), Radius::uniform(1, 0)));
    CHECK(certify_isometry(poly(5, {{1, 1}}), Radius::uniform(1, 3)));
    CHECK(certify_isometry(poly(5, {{1, 1}, {2, 1}}), Radius::uniform(1, 1)));
    CHECK_FALSE(certify_isometry(poly(5, {{1, 1}, {2, 1}}), Radius::uniform(1, 0)));
    CHECK_THROWS_AS(certify_isometry(poly(5, {{0, 1}, {1, 1}}), Radius::uniform(1, 1)), std::invalid_argument);
}

TEST_CASE("certified isometries preserve distances")
{
    testing::Gen gen(202);
    const long p = 5;
    for (int trial = 0; trial < 6; ++trial) {
        std::vector<long> c{0, 5};
        for (int k = 2; k <= 4; ++k) c.push_back(gen.range(-30, 30));
        Conjugacy conj = koenigs_linearize(germ(p, c), 8);
        REQUIRE(conj.certified);
        long m = conj.source_exponent.get_num().get_si();
        Integer scale = 1;
        for (long k = 0; k < m; ++k) scale *= p;
        for (int pair = 0; pair < 50; ++pair) {
            Integer xi = gen.integer(10000) * scale;
            Integer yi = gen.integer(10000) * scale;
            if (xi == yi) continue;
            PadicNumber x = padic(Rational(xi), p);
            PadicNumber y = padic(Rational(yi), p);
            PadicNumber dphi = eval_poly(conj.phi, x) - eval_poly(conj.phi, y);
            REQUIRE(dphi.is_known_nonzero());
            CHECK(*dphi.valuation() == *(x - y).valuation());
        }
    }
}

TEST_CASE("local case examples")
{
    CHECK(classify_local_case(germ(5, {0, 2, 1}), germ(5, {0, 3})) == LocalCase::Case1);
    CHECK(classify_local_case(germ(5, {0, 2, 1}), germ(5, {0, 5, 1})) == LocalCase::Case2a);
    CHECK(classify_local_case(germ(5, {0, 0, 1}), germ(5, {0, 0, 0, 1})) == LocalCase::Case3b);
    CHECK(classify_local_case(germ(5, {0, 0, 1}), germ(5, {0, 2})) == LocalCase::Case2b);
    CHECK(classify_local_case(germ(5, {0, 5}), germ(5, {0, 0, 1})) == LocalCase::Case3a);
    CHECK(to_string(LocalCase::Case2a) == "Case2a");
}

TEST_CASE("local case is invariant under translation to the fixed point")
{
    testing::Gen gen(303);
    const long p = 5;
    for (int trial = 0; trial < 40; ++trial) {
        auto random_germ = [&](bool unit_derivative) {
            std::vector<long> c{5 * gen.range(-3, 3)};
            long a1 = unit_derivative ? 1 + 5 * gen.range(0, 3) : 5 * gen.range(-2, 2);
            c.push_back(a1);
            for (int k = 2; k <= 4; ++k) c.push_back(gen.range(-9, 9));
            return germ(p, c, 8);
        };
        Germ F = random_germ(gen.coin());
        Germ G = random_germ(false);
        LocalCase before = classify_local_case(F, G);
        Germ G_shift = G.conjugated_by_translation(find_attracting_fixed_point(G));
        CHECK(G_shift.coefficient(0).is_indistinguishable_from_zero());
        CHECK(classify_local_case(F, G_shift) == before);
        if (F.coefficient(1).valuation_bound() >= 1) {
            Germ F_shift = F.conjugated_by_translation(find_attracting_fixed_point(F));
            CHECK(classify_local_case(F_shift, G) == before);
        }
    }
}

TEST_CASE("root-of-unity limit test examples")
{
    const long p = 5;
    std::vector<PadicNumber> x_minus_1{padic(-1, p), padic(1, p)};

    LimitTestResult teich = root_of_unity_limit_test_teichmuller(2, p, kPrec, x_minus_1, 2, 8);
    CHECK(teich.verdict == LimitVerdict::ConvergesToZero);
    REQUIRE(teich.root_of_unity.has_value());
    CHECK(*teich.root_of_unity);

    CHECK(root_of_unity_limit_test(padic(1, p), x_minus_1, 2, 6).verdict == LimitVerdict::ConvergesToZero);

    LimitTestResult six = root_of_unity_limit_test(padic(6, p), x_minus_1, 2, 10);
    CHECK(six.verdict == LimitVerdict::BoundedAway);
    // (1 + 5)^(2^n) - 1 = 2^n * 5 + (terms divisible by 25)
    for (long v : six.valuations) CHECK(v == 1);
    CHECK_FALSE(six.root_of_unity.has_value());

    LimitTestResult gauss = root_of_unity_limit_test_gaussian({0, 1}, p, kPrec, x_minus_1, 2, 8);
    CHECK(gauss.verdict == LimitVerdict::ConvergesToZero);
    CHECK(*gauss.root_of_unity);

    LimitTestResult not_root = root_of_unity_limit_test_gaussian({6, 0}, p, kPrec, x_minus_1, 2, 10);
    CHECK(not_root.verdict == LimitVerdict::BoundedAway);
    CHECK_FALSE(*not_root.root_of_unity);

    CHECK_THROWS_AS(root_of_unity_limit_test(padic(6, p), x_minus_1, 5, 4), std::invalid_argument);
    CHECK_THROWS_AS(root_of_unity_limit_test(padic(5, p), x_minus_1, 2, 4), std::invalid_argument);
}

TEST_CASE("exact roots of unity never report BoundedAway")
{
    testing::Gen gen(404);
    for (long p : {5L, 7L, 13L}) {
        for (int trial = 0; trial < 30; ++trial) {
            std::vector<PadicNumber> P;
            int deg = static_cast<int>(gen.range(1, 3));
            for (int k = 0; k <= deg; ++k) P.push_back(padic(Rational(gen.integer(40)), p));
            P.back() = padic(Rational(gen.nonzero_integer(40)), p);
            long d = 0;
            while (d == 0 || d % p == 0) d = gen.range(1, 6);
            Integer residue = gen.range(1, p - 1);
            LimitTestResult r = root_of_unity_limit_test_teichmuller(residue, p, 30, P, d, 10);
            CHECK(r.verdict != LimitVerdict::BoundedAway);
            CHECK(*r.root_of_unity);
        }
    }
    // xi = 1 and P = X - 6: |P(1)| = 1/5 for every n
    std::vector<PadicNumber> P{padic(-6, 5), padic(1, 5)};
    LimitTestResult one = root_of_unity_limit_test_gaussian({1, 0}, 5, 30, P, 2, 8);
    CHECK(one.verdict != LimitVerdict::BoundedAway);
}
