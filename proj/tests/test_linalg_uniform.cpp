#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "piqlab/errors.hpp"
#include "piqlab/linalg/linalg.hpp"
#include "piqlab/poly/cyclotomic.hpp"
#include "test_support.hpp"

#include <numeric>

using namespace piqlab;
using namespace piqlab::linalg;

namespace {

Matrix mat(std::vector<std::vector<long>> rows)
{
    std::vector<std::vector<Rational>> q;
    for (const auto& r : rows) q.emplace_back(r.begin(), r.end());
    return Matrix::from_rows(q);
}

QPoly qp(std::vector<long> c)
{
    std::vector<Rational> q(c.begin(), c.end());
    return QPoly(q);
}

Matrix random_matrix(testing::Gen& gen, std::size_t n)
{
    Matrix M(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) M(i, j) = gen.rational(4);
    }
    return M;
}

// product of random elementary matrices: integral with determinant +-1
Matrix random_unimodular(testing::Gen& gen, std::size_t n)
{
    Matrix S = Matrix::identity(n);
    for (int step = 0; step < 3 * static_cast<int>(n); ++step) {
        auto i = static_cast<std::size_t>(gen.range(0, static_cast<long>(n) - 1));
        auto j = static_cast<std::size_t>(gen.range(0, static_cast<long>(n) - 1));
        if (i == j) continue;
        Matrix E = Matrix::identity(n);
        E(i, j) = gen.range(-2, 2);
        S = S * E;
    }
    return S;
}

// a scaled cyclotomic companion block with known line periods
struct Block {
    long order;  // Phi_order
    long scale;
    Matrix M;
    long line_period;  // least n with zeta^n = +-1, the period of any line inside the block
};

Block random_block(testing::Gen& gen, long max_degree)
{
    static const long orders[] = {1, 2, 3, 4, 5, 6, 8, 10, 12};
    while (true) {
        long m = orders[gen.range(0, 8)];
        QPoly phi = poly::cyclotomic_polynomial(m);
        if (phi.degree() > max_degree) continue;
        long scale = gen.range(1, 3) * (gen.coin() ? 1 : -1);
        long period = phi.degree() == 1 ? 1 : (m % 2 == 1 ? m : m / 2);
        return {m, scale, Rational(scale) * Matrix::companion(phi), period};
    }
}

} // namespace

TEST_CASE("exterior power examples")
{
    Matrix M = mat({{1, 2}, {3, 4}});
    CHECK(exterior_power(M, 1) == M);
    Matrix L2 = exterior_power(M, 2);
    CHECK(L2.rows() == 1);
    CHECK(L2(0, 0) == -2);
    Matrix N = mat({{2, 0, 1}, {1, 3, 0}, {0, 1, 4}});
    CHECK(exterior_power(N, 3)(0, 0) == N.determinant());
    CHECK(exterior_power(N, 2).rows() == 3);
    // minor of rows {0,1}, cols {0,2}: 2*0 - 1*1
    CHECK(exterior_power(N, 2)(0, 1) == -1);
    CHECK_THROWS_AS(exterior_power(N, 0), std::invalid_argument);
    CHECK_THROWS_AS(exterior_power(N, 4), std::invalid_argument);
    CHECK(exterior_basis(4, 2).size() == 6);
    CHECK(exterior_basis(4, 2)[1] == std::vector<std::size_t>{0, 2});
}

TEST_CASE("exterior power is functorial")
{
    testing::Gen gen(5);
    for (int trial = 0; trial < 50; ++trial) {
        auto n = static_cast<std::size_t>(gen.range(1, 4));
        auto k = static_cast<std::size_t>(gen.range(1, static_cast<long>(n)));
        Matrix A = random_matrix(gen, n), B = random_matrix(gen, n);
        CHECK(exterior_power(A * B, k) == exterior_power(A, k) * exterior_power(B, k));
    }
}

TEST_CASE("subspace_period examples")
{
    Matrix rot = mat({{0, -1}, {1, 0}});
    SubspaceBasis e1({{Rational(1), Rational(0)}});
    CHECK(subspace_period(rot, e1, 10) == 2);
    Matrix two = Rational(2) * Matrix::identity(3);
    SubspaceBasis W({{Rational(1), Rational(2), Rational(3)}, {Rational(0), Rational(1), Rational(-1)}});
    CHECK(subspace_period(two, W, 10) == 1);
    Matrix c3 = Rational(3) * Matrix::companion(qp({1, 1, 1}));
    CHECK(subspace_period(c3, e1, 10) == 3);
    // a unipotent shear never returns a non-invariant line
    Matrix shear = mat({{1, 1}, {0, 1}});
    CHECK_FALSE(subspace_period(shear, SubspaceBasis({{Rational(0), Rational(1)}}), 50).has_value());
    CHECK(subspace_period(shear, e1, 50) == 1);
    CHECK_THROWS_AS(subspace_period(mat({{1, 0}, {0, 0}}), e1, 5), std::invalid_argument);
    CHECK_THROWS_AS(SubspaceBasis({{Rational(1), Rational(2)}, {Rational(2), Rational(4)}}), std::invalid_argument);
}

TEST_CASE("period_bound examples")
{
    CHECK(period_bound(1) == 4);
    CHECK(period_bound(2) == 240);
    CHECK(period_bound(3) >= period_bound(2));
    CHECK(period_bound(4) % period_bound(3) == 0);
    // independent enumeration of phi for n = 2
    Integer L = 1;
    for (long m = 1; m <= 100; ++m) {
        long phi = 0;
        for (long k = 1; k <= m; ++k) phi += std::gcd(k, m) == 1 ? 1 : 0;
        if (phi <= 4) L = numeric::lcm(L, Integer(m));
    }
    CHECK(period_bound(2) == 2 * L);
}

TEST_CASE("periods of conjugated block matrices respect the bound")
{
    testing::Gen gen(2024);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Block> blocks;
        long n = 0;
        long target = gen.range(1, 4);
        while (n < target) {
            blocks.push_back(random_block(gen, target - n));
            n += blocks.back().M.rows();
        }
        std::vector<Matrix> mats;
        for (const auto& b : blocks) mats.push_back(b.M);
        Matrix B = Matrix::block_diagonal(mats);
        Matrix S = random_unimodular(gen, static_cast<std::size_t>(n));
        Matrix M = S * B * S.inverse();
        // a line inside one block, and the whole block, moved by S
        auto which = static_cast<std::size_t>(gen.range(0, static_cast<long>(blocks.size()) - 1));
        std::size_t off = 0;
        for (std::size_t k = 0; k < which; ++k) off += blocks[k].M.rows();
        std::vector<Rational> e(static_cast<std::size_t>(n), Rational(0));
        e[off] = 1;
        Matrix line = S * SubspaceBasis({e}).matrix();
        long bound = period_bound(n).get_si();
        auto p = subspace_period(M, SubspaceBasis::from_columns(line), bound);
        REQUIRE(p.has_value());
        CHECK(*p == blocks[which].line_period);
        CHECK(*p <= bound);
        CHECK(bound % *p == 0);
        std::vector<std::size_t> idx;
        for (std::size_t k = 0; k < blocks[which].M.rows(); ++k) idx.push_back(off + k);
        Matrix block_space = S * Matrix::identity(static_cast<std::size_t>(n)).columns(idx);
        CHECK(subspace_period(M, SubspaceBasis::from_columns(block_space), bound) == 1);
    }
}

TEST_CASE("exterior power reduces subspaces to lines")
{
    testing::Gen gen(99);
    int periodic = 0;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Matrix> mats;
        std::size_t n = 0;
        while (n < 3) {
            Block b = random_block(gen, 4 - static_cast<long>(n));
            mats.push_back(b.M);
            n += b.M.rows();
        }
        Matrix M = Matrix::block_diagonal(mats);
        Matrix S = random_unimodular(gen, n);
        M = S * M * S.inverse();
        auto k = static_cast<std::size_t>(gen.range(1, static_cast<long>(n) - 1));
        // coordinate subspaces of the block basis are often periodic; random ones rarely
        Matrix W(n, k);
        while (true) {
            for (std::size_t c = 0; c < k; ++c) {
                if (gen.coin()) {
                    for (std::size_t i = 0; i < n; ++i) W(i, c) = gen.integer(2);
                } else {
                    for (std::size_t i = 0; i < n; ++i) W(i, c) = 0;
                    W(static_cast<std::size_t>(gen.range(0, static_cast<long>(n) - 1)), c) = 1;
                }
            }
            if (W.rank() == k) break;
        }
        SubspaceBasis Wb = SubspaceBasis::from_columns(S * W);
        auto direct = subspace_period(M, Wb, 60);
        auto via_line = subspace_period(exterior_power(M, k), exterior_line(Wb), 60);
        CHECK(direct == via_line);
        if (direct) ++periodic;
    }
    CHECK(periodic > 10);
}

TEST_CASE("minimal polynomial")
{
    CHECK(minimal_polynomial(Matrix::identity(3)) == qp({-1, 1}));
    CHECK(minimal_polynomial(Matrix::companion(qp({1, 1, 1}))) == qp({1, 1, 1}));
    CHECK(minimal_polynomial(mat({{1, 1}, {0, 1}})) == qp({1, -2, 1}));
    testing::Gen gen(8);
    for (int trial = 0; trial < 30; ++trial) {
        auto n = static_cast<std::size_t>(gen.range(1, 4));
        Matrix M = random_matrix(gen, n);
        QPoly mp = minimal_polynomial(M);
        // mp(M) = 0 by Horner
        Matrix acc(n, n);
        for (int k = mp.degree(); k >= 0; --k) acc = acc * M + mp.coeff(k) * Matrix::identity(n);
        CHECK(acc == Matrix(n, n));
        CHECK(mp.degree() <= static_cast<int>(n));
    }
}

TEST_CASE("minpoly_cyclotomic_split examples")
{
    auto c3 = minpoly_cyclotomic_split(Matrix::companion(qp({1, 1, 1})));
    CHECK(c3.n0 == 3);
    CHECK(c3.m == 1);
    CHECK(c3.Q == qp({1}));
    auto id = minpoly_cyclotomic_split(Matrix::identity(2));
    CHECK(id.n0 == 1);
    CHECK(id.m == 1);
    CHECK(id.Q == qp({1}));
    auto d = minpoly_cyclotomic_split(mat({{1, 0}, {0, 2}}));
    CHECK(d.n0 == 1);
    CHECK(d.m == 1);
    CHECK(d.Q == qp({-2, 1}));
    CHECK_THROWS_AS(minpoly_cyclotomic_split(Matrix::companion(qp({1, 1, 1})), 2), SearchExhausted);
}

TEST_CASE("cyclotomic split reconstructs the minimal polynomial")
{
    testing::Gen gen(123);
    const QPoly t1 = qp({-1, 1});
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Matrix> mats;
        std::size_t n = 0;
        long target = gen.range(1, 4);
        while (static_cast<long>(n) < target) {
            if (gen.coin()) {
                Block b = random_block(gen, target - static_cast<long>(n));
                // unscaled cyclotomic block
                mats.push_back(Matrix::companion(poly::cyclotomic_polynomial(b.order)));
            } else {
                mats.push_back(mat({{gen.range(2, 4) * (gen.coin() ? 1 : -1)}}));
            }
            n += mats.back().rows();
        }
        Matrix M = Matrix::block_diagonal(mats);
        Matrix S = random_unimodular(gen, n);
        M = S * M * S.inverse();
        auto r = minpoly_cyclotomic_split(M);
        CHECK(t1.pow(static_cast<unsigned>(r.m)) * r.Q == r.minpoly);
        CHECK(r.minpoly == minimal_polynomial(M.pow(static_cast<unsigned long>(r.n0))));
        CHECK(poly::is_cyclotomic_free(r.Q));
    }
}
