#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "piqlab/poly/bihom.hpp"
#include "piqlab/poly/binary_form.hpp"
#include "piqlab/poly/cyclotomic.hpp"
#include "piqlab/poly/division_polynomial.hpp"
#include "piqlab/poly/squarefree.hpp"
#include "test_support.hpp"

using namespace piqlab;
using namespace piqlab::poly;
using numeric::GaussianRational;
using numeric::Rational;

namespace {

QPoly q(std::initializer_list<long> c)
{
    std::vector<Rational> v;
    for (long a : c) v.emplace_back(a);
    return QPoly(v);
}

QPoly t_minus(long a) { return q({-a, 1}); }

template <class K>
Polynomial<K> reconstruct(const std::vector<SquarefreeFactor<K>>& fs)
{
    Polynomial<K> out(K(1));
    for (const auto& f : fs) out *= f.factor.pow(static_cast<unsigned>(f.exponent));
    return out;
}

} // namespace

TEST_CASE("polynomial basics")
{
    QPoly p = q({1, 2, 3});
    CHECK(p.degree() == 2);
    CHECK(p(Rational(2)) == 17);
    CHECK(p.derivative() == q({2, 6}));
    CHECK((p * q({1, 1})).exact_div(q({1, 1})) == p);
    CHECK_THROWS_AS(p.exact_div(q({0, 1})), NotDivisible);
    CHECK(gcd(q({-1, 0, 1}), q({1, 1})) == q({1, 1}));
    CHECK(q({0, 1}).compose(q({1, 1})) == q({1, 1}));
    CHECK(q({-1, 0, 1}).to_string() == "t^2 - 1");
}

TEST_CASE("squarefree_decomposition examples")
{
    auto a = squarefree_decomposition(t_minus(1) * t_minus(1) * t_minus(-2));
    REQUIRE(a.size() == 2);
    CHECK(a[0].factor == t_minus(-2));
    CHECK(a[0].exponent == 1);
    CHECK(a[1].factor == t_minus(1));
    CHECK(a[1].exponent == 2);

    auto b = squarefree_decomposition(q({0, 1}));
    REQUIRE(b.size() == 1);
    CHECK(b[0].factor == q({0, 1}));
    CHECK(b[0].exponent == 1);

    auto c = squarefree_decomposition(q({1, 0, 1}).pow(3));
    REQUIRE(c.size() == 1);
    CHECK(c[0].factor == q({1, 0, 1}));
    CHECK(c[0].exponent == 3);

    CHECK_THROWS(squarefree_decomposition(QPoly()));
}

TEST_CASE("squarefree_decomposition reconstructs random products")
{
    testing::Gen gen(101);
    for (int trial = 0; trial < 200; ++trial) {
        QPoly P(Rational(1));
        int nfactors = static_cast<int>(gen.range(1, 3));
        for (int k = 0; k < nfactors; ++k) {
            QPoly f = q({gen.range(-5, 5), gen.range(-3, 3), 1});
            if (gen.coin()) f = t_minus(gen.range(-6, 6));
            P *= f.pow(static_cast<unsigned>(gen.range(1, 3)));
        }
        Rational lead = gen.nonzero_rational(5);
        P *= lead;
        auto fs = squarefree_decomposition(P);
        CHECK(reconstruct(fs) * P.leading() == P);
        for (std::size_t i = 0; i < fs.size(); ++i) {
            // squarefree and pairwise coprime
            CHECK(gcd(fs[i].factor, fs[i].factor.derivative()).degree() == 0);
            for (std::size_t j = i + 1; j < fs.size(); ++j) CHECK(gcd(fs[i].factor, fs[j].factor).degree() == 0);
        }
    }
}

TEST_CASE("squarefree over Q(i)")
{
    QiPoly x_minus_i({-GaussianRational::i_unit(), GaussianRational(1)});
    QiPoly x_plus_i({GaussianRational::i_unit(), GaussianRational(1)});
    auto fs = squarefree_decomposition(x_minus_i.pow(2) * x_plus_i);
    REQUIRE(fs.size() == 2);
    CHECK(fs[0].factor == x_plus_i);
    CHECK(fs[1].factor == x_minus_i);
}

TEST_CASE("euler phi and the sweep range")
{
    CHECK(euler_phi(1) == 1);
    CHECK(euler_phi(12) == 4);
    CHECK(euler_phi(13) == 12);
    CHECK(orders_with_phi_at_most(1) == std::vector<long>{1, 2});
    CHECK(orders_with_phi_at_most(4) == std::vector<long>{1, 2, 3, 4, 5, 6, 8, 10, 12});
    CHECK(cyclotomic_polynomial(3) == q({1, 1, 1}));
    CHECK(cyclotomic_polynomial(12) == q({1, 0, -1, 0, 1}));
}

TEST_CASE("cyclotomic_part examples")
{
    auto a = cyclotomic_part(q({1, 1, 1}));
    CHECK(a.cyclotomic == q({1, 1, 1}));
    CHECK(a.remainder == q({1}));

    auto b = cyclotomic_part(q({-2, 0, 1}) * t_minus(1));
    CHECK(b.cyclotomic == t_minus(1));
    CHECK(b.remainder == q({-2, 0, 1}));

    auto c = cyclotomic_part(q({-1, 0, 0, 0, 1}));
    CHECK(c.cyclotomic == q({-1, 0, 0, 0, 1}));
    CHECK(c.remainder == q({1}));

    CHECK_THROWS(cyclotomic_part(q({1, 2})));
}

TEST_CASE("cyclotomic_part on random products")
{
    testing::Gen gen(7);
    for (int trial = 0; trial < 60; ++trial) {
        QPoly P(Rational(1));
        QPoly expected_c(Rational(1));
        int k = static_cast<int>(gen.range(0, 3));
        for (int j = 0; j < k; ++j) {
            QPoly phi = cyclotomic_polynomial(gen.range(1, 12));
            P *= phi;
            expected_c *= phi;
        }
        // t^2 + a t + b with b in {2, -3} and |a| <= 1 has no root of unity
        QPoly other = q({gen.coin() ? 2 : -3, gen.range(-1, 1), 1});
        if (gen.coin()) P *= other;
        auto split = cyclotomic_part(P);
        CHECK(split.cyclotomic * split.remainder == P);
        CHECK(split.cyclotomic == expected_c);
        CHECK(is_cyclotomic_free(split.remainder));
        for (long n : orders_with_phi_at_most(std::max(1, split.remainder.degree()))) {
            QPoly tn = QPoly::monomial(Rational(1), static_cast<int>(n)) - q({1});
            CHECK(gcd(split.remainder, tn).degree() == 0);
        }
    }
}

TEST_CASE("division polynomial examples")
{
    WeierstrassCurve E{1, 0};
    auto psi1 = division_polynomial(E, 1);
    CHECK(psi1.y_degree == 0);
    CHECK(psi1.x_part == q({1}));

    auto psi2 = division_polynomial(E, 2);
    CHECK(psi2.squared(E) == q({0, 4, 0, 4}));

    auto psi5 = division_polynomial(E, 5);
    CHECK(psi5.y_degree == 0);
    CHECK(psi5.x_part.degree() == 12);
    CHECK(psi5.x_part.leading() == 5);

    CHECK_THROWS_AS(division_polynomial(Rational(0), Rational(0), 3), std::invalid_argument);
    CHECK_THROWS_AS(division_polynomial(Rational(-3), Rational(2), 3), std::invalid_argument);
}

TEST_CASE("x-maps of multiplication compose")
{
    for (auto E : {WeierstrassCurve{1, 0}, WeierstrassCurve{-1, 1}, WeierstrassCurve{2, -3}}) {
        auto x2 = multiplication_x_map(E, 2);
        auto x3 = multiplication_x_map(E, 3);
        CHECK(x2.compose(x2) == multiplication_x_map(E, 4));
        CHECK(x2.compose(x3) == multiplication_x_map(E, 6));
        CHECK(x3.compose(x2) == multiplication_x_map(E, 6));
        CHECK(multiplication_x_map(E, 5).degree() == 25);
    }
}

TEST_CASE("doubling y ratio satisfies the curve equation")
{
    WeierstrassCurve E{1, 0};
    QRationalFunction f(E.rhs());
    auto x2 = multiplication_x_map(E, 2);
    auto s = doubling_y_ratio(E);
    // (y2/y)^2 * f(x) = f(x2)
    QRationalFunction fx2 = f.compose(x2);
    CHECK(s * s * f == fx2);
}

namespace {

using Form = BinaryForm<GaussianRational>;

BiHomPoly random_bihom(testing::Gen& gen, int a, int b)
{
    BiHomPoly out(a, b);
    for (int i = 0; i <= a; ++i) {
        for (int j = 0; j <= b; ++j) {
            if (gen.range(0, 2) == 0) continue;
            out.add_term(i, j, GaussianRational(gen.integer(4), gen.coin() ? gen.integer(3) : 0));
        }
    }
    if (out.is_zero()) out.add_term(0, 0, GaussianRational(1));
    return out;
}

BiHomPoly mono(int a, int b, int i, int j, long c = 1)
{
    BiHomPoly m(a, b);
    m.add_term(i, j, GaussianRational(c));
    return m;
}

} // namespace

TEST_CASE("bihom_divides examples")
{
    auto phi = BiHomPoly::diagonal();
    auto x0y0 = mono(1, 1, 0, 0);
    auto r = bihom_divides(phi, phi * x0y0);
    CHECK(r.divides);
    REQUIRE(r.cofactor);
    CHECK(*r.cofactor == x0y0);

    // x0^2 y1^2 - x1^2 y0^2 = (x0 y1 - x1 y0)(x0 y1 + x1 y0)
    BiHomPoly psi = mono(2, 2, 0, 2) - mono(2, 2, 2, 0);
    auto r2 = bihom_divides(phi, psi);
    CHECK(r2.divides);
    REQUIRE(r2.cofactor);
    CHECK(*r2.cofactor == mono(1, 1, 0, 1) + mono(1, 1, 1, 0));

    CHECK_FALSE(bihom_divides(phi, x0y0).divides);
    CHECK_FALSE(bihom_divides(phi, mono(1, 0, 0, 0)).divides);
    CHECK_THROWS(bihom_divides(BiHomPoly(1, 1), x0y0));
}

TEST_CASE("bihom_divides recovers random cofactors")
{
    testing::Gen gen(31);
    for (int trial = 0; trial < 150; ++trial) {
        auto phi = random_bihom(gen, static_cast<int>(gen.range(0, 3)), static_cast<int>(gen.range(0, 3)));
        auto theta = random_bihom(gen, static_cast<int>(gen.range(0, 3)), static_cast<int>(gen.range(0, 3)));
        auto r = bihom_divides(phi, phi * theta);
        CHECK(r.divides);
        REQUIRE(r.cofactor);
        CHECK(*r.cofactor == theta);
        // a perturbed product is not divisible unless the perturbation is a multiple
        auto bumped = phi * theta + mono(phi.degree_x() + theta.degree_x(), phi.degree_y() + theta.degree_y(), 0, 0);
        auto r2 = bihom_divides(phi, bumped);
        if (r2.divides) CHECK(phi * *r2.cofactor == bumped);
    }
}

TEST_CASE("bihom evaluation and substitution")
{
    auto phi = BiHomPoly::diagonal();
    // points (x0:x1) = (2:1), (y0:y1) = (2:1) lie on the diagonal
    CHECK(phi.evaluate(GaussianRational(2), GaussianRational(1), GaussianRational(2), GaussianRational(1)).is_zero());
    CHECK(!phi.evaluate(GaussianRational(2), GaussianRational(1), GaussianRational(3), GaussianRational(1)).is_zero());
    // z -> z^2 on both factors: Phi(F(x), F(y)) = x0^2 y1^2 - x1^2 y0^2
    Form F0 = Form::x0().pow(2), F1 = Form::x1().pow(2);
    auto pulled = phi.substitute(F0, F1, F0, F1);
    CHECK(pulled == mono(2, 2, 0, 2) - mono(2, 2, 2, 0));
    CHECK(bihom_divides(phi, pulled).divides);
    // x1*y1 under polynomials: the lines through infinity are invariant
    Form G0 = Form::x0().pow(3) + Form::x1().pow(3), G1 = Form::x1().pow(3);
    auto lines = mono(1, 1, 1, 1);
    CHECK(bihom_divides(lines, lines.substitute(F0, F1, G0, G1)).divides);
}

TEST_CASE("bihom normalization")
{
    BiHomPoly p = mono(1, 1, 0, 1, 4) - mono(1, 1, 1, 0, 6);
    auto n = p.normalized();
    CHECK(n == mono(1, 1, 0, 1, -2) + mono(1, 1, 1, 0, 3));
    CHECK(n.normalized() == n);
}

TEST_CASE("binary form evaluation")
{
    BinaryForm<Rational> f(2, {Rational(1), Rational(0), Rational(1)});  // x0^2 + x1^2
    CHECK(f.evaluate(Rational(1), Rational(1)) == 2);
    CHECK(f.evaluate(Rational(2), Rational(3)) == 13);
    CHECK(BinaryForm<Rational>::x0().evaluate(Rational(5), Rational(7)) == 5);
    CHECK(BinaryForm<Rational>::x1().evaluate(Rational(5), Rational(7)) == 7);
}
