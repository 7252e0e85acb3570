#include "piqlab/linalg/linalg.hpp"

#include "piqlab/errors.hpp"
#include "piqlab/poly/cyclotomic.hpp"

#include <algorithm>
#include <stdexcept>

namespace piqlab::linalg {

namespace {

// reduced row echelon form in place; returns the pivot columns
std::vector<std::size_t> row_reduce(Matrix& A)
{
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < A.cols() && r < A.rows(); ++c) {
        std::size_t p = r;
        while (p < A.rows() && A(p, c) == 0) ++p;
        if (p == A.rows()) continue;
        if (p != r) {
            for (std::size_t j = 0; j < A.cols(); ++j) std::swap(A(p, j), A(r, j));
        }
        Rational inv = Rational(1) / A(r, c);
        for (std::size_t j = c; j < A.cols(); ++j) A(r, j) *= inv;
        for (std::size_t i = 0; i < A.rows(); ++i) {
            if (i == r || A(i, c) == 0) continue;
            Rational factor = A(i, c);
            for (std::size_t j = c; j < A.cols(); ++j) A(i, j) -= factor * A(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

Matrix submatrix(const Matrix& M, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols)
{
    Matrix out(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = M(rows[i], cols[j]);
    }
    return out;
}

QPoly poly_lcm(const QPoly& a, const QPoly& b)
{
    return (a * b).exact_div(poly::gcd(a, b)).monic();
}

Matrix column(const std::vector<Rational>& v)
{
    Matrix out(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) out(i, 0) = v[i];
    return out;
}

// minimal polynomial of M relative to v
QPoly vector_minpoly(const Matrix& M, const Matrix& v)
{
    const std::size_t n = M.rows();
    std::vector<Matrix> krylov{v};
    while (true) {
        Matrix next = M * krylov.back();
        // solve next = sum c_i krylov[i]
        Matrix system(n, krylov.size() + 1);
        for (std::size_t j = 0; j < krylov.size(); ++j) {
            for (std::size_t i = 0; i < n; ++i) system(i, j) = krylov[j](i, 0);
        }
        for (std::size_t i = 0; i < n; ++i) system(i, krylov.size()) = next(i, 0);
        Matrix reduced = system;
        auto pivots = row_reduce(reduced);
        if (pivots.empty() || pivots.back() != krylov.size()) {
            std::vector<Rational> c(krylov.size() + 1, Rational(0));
            c.back() = 1;
            for (std::size_t r = 0; r < pivots.size(); ++r) c[pivots[r]] = -reduced(r, krylov.size());
            return QPoly(c);
        }
        krylov.push_back(next);
    }
}

} // namespace

Matrix Matrix::identity(std::size_t n)
{
    Matrix I(n, n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1;
    return I;
}

Matrix Matrix::from_rows(const std::vector<std::vector<Rational>>& rows)
{
    if (rows.empty()) return Matrix();
    Matrix M(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != M.cols()) throw std::invalid_argument("ragged matrix rows");
        for (std::size_t j = 0; j < M.cols(); ++j) M(i, j) = rows[i][j];
    }
    return M;
}

Matrix Matrix::companion(const QPoly& p)
{
    if (p.degree() < 1 || p.leading() != 1) throw std::invalid_argument("companion matrix needs a monic nonconstant polynomial");
    const auto n = static_cast<std::size_t>(p.degree());
    Matrix C(n, n);
    for (std::size_t i = 1; i < n; ++i) C(i, i - 1) = 1;
    for (std::size_t i = 0; i < n; ++i) C(i, n - 1) = -p.coeff(static_cast<int>(i));
    return C;
}

Matrix Matrix::block_diagonal(const std::vector<Matrix>& blocks)
{
    std::size_t n = 0;
    for (const auto& B : blocks) {
        if (!B.is_square()) throw std::invalid_argument("blocks must be square");
        n += B.rows();
    }
    Matrix M(n, n);
    std::size_t off = 0;
    for (const auto& B : blocks) {
        for (std::size_t i = 0; i < B.rows(); ++i) {
            for (std::size_t j = 0; j < B.cols(); ++j) M(off + i, off + j) = B(i, j);
        }
        off += B.rows();
    }
    return M;
}

Matrix operator*(const Matrix& A, const Matrix& B)
{
    if (A.cols_ != B.rows_) throw std::invalid_argument("matrix dimensions do not match");
    Matrix C(A.rows_, B.cols_);
    for (std::size_t i = 0; i < A.rows_; ++i) {
        for (std::size_t k = 0; k < A.cols_; ++k) {
            const Rational& a = A(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < B.cols_; ++j) C(i, j) += a * B(k, j);
        }
    }
    return C;
}

Matrix operator*(const Rational& s, Matrix A)
{
    for (auto& x : A.a_) x *= s;
    return A;
}

Matrix operator+(Matrix A, const Matrix& B)
{
    if (A.rows_ != B.rows_ || A.cols_ != B.cols_) throw std::invalid_argument("matrix dimensions do not match");
    for (std::size_t k = 0; k < A.a_.size(); ++k) A.a_[k] += B.a_[k];
    return A;
}

Matrix operator-(Matrix A, const Matrix& B)
{
    if (A.rows_ != B.rows_ || A.cols_ != B.cols_) throw std::invalid_argument("matrix dimensions do not match");
    for (std::size_t k = 0; k < A.a_.size(); ++k) A.a_[k] -= B.a_[k];
    return A;
}

Matrix Matrix::transpose() const
{
    Matrix T(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) T(j, i) = (*this)(i, j);
    }
    return T;
}

Matrix Matrix::pow(unsigned long n) const
{
    if (!is_square()) throw std::invalid_argument("power of a non-square matrix");
    Matrix result = identity(rows_), base = *this;
    while (n > 0) {
        if (n & 1UL) result = result * base;
        n >>= 1UL;
        if (n > 0) base = base * base;
    }
    return result;
}

std::size_t Matrix::rank() const
{
    Matrix A = *this;
    return row_reduce(A).size();
}

Rational Matrix::determinant() const
{
    if (!is_square()) throw std::invalid_argument("determinant of a non-square matrix");
    Matrix A = *this;
    Rational det = 1;
    for (std::size_t c = 0; c < rows_; ++c) {
        std::size_t p = c;
        while (p < rows_ && A(p, c) == 0) ++p;
        if (p == rows_) return 0;
        if (p != c) {
            for (std::size_t j = 0; j < cols_; ++j) std::swap(A(p, j), A(c, j));
            det = -det;
        }
        det *= A(c, c);
        for (std::size_t i = c + 1; i < rows_; ++i) {
            if (A(i, c) == 0) continue;
            Rational factor = A(i, c) / A(c, c);
            for (std::size_t j = c; j < cols_; ++j) A(i, j) -= factor * A(c, j);
        }
    }
    return det;
}

Matrix Matrix::inverse() const
{
    if (!is_square()) throw std::invalid_argument("inverse of a non-square matrix");
    Matrix aug = hstack(identity(rows_));
    auto pivots = row_reduce(aug);
    if (pivots.size() < rows_ || pivots.back() >= rows_) throw std::domain_error("matrix is singular");
    Matrix inv(rows_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < rows_; ++j) inv(i, j) = aug(i, rows_ + j);
    }
    return inv;
}

Matrix Matrix::columns(const std::vector<std::size_t>& idx) const
{
    std::vector<std::size_t> all(rows_);
    for (std::size_t i = 0; i < rows_; ++i) all[i] = i;
    return submatrix(*this, all, idx);
}

Matrix Matrix::hstack(const Matrix& B) const
{
    if (rows_ != B.rows_) throw std::invalid_argument("row counts differ");
    Matrix C(rows_, cols_ + B.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) C(i, j) = (*this)(i, j);
        for (std::size_t j = 0; j < B.cols_; ++j) C(i, cols_ + j) = B(i, j);
    }
    return C;
}

std::string Matrix::to_string() const
{
    std::string out;
    for (std::size_t i = 0; i < rows_; ++i) {
        if (i > 0) out += "; ";
        for (std::size_t j = 0; j < cols_; ++j) {
            if (j > 0) out += " ";
            out += (*this)(i, j).get_str();
        }
    }
    return out;
}

SubspaceBasis::SubspaceBasis(std::vector<std::vector<Rational>> vectors)
{
    if (vectors.empty()) throw std::invalid_argument("a subspace basis needs at least one vector");
    n_ = vectors[0].size();
    k_ = vectors.size();
    W_ = Matrix(n_, k_);
    for (std::size_t j = 0; j < k_; ++j) {
        if (vectors[j].size() != n_) throw std::invalid_argument("basis vectors have different lengths");
        for (std::size_t i = 0; i < n_; ++i) W_(i, j) = vectors[j][i];
    }
    if (W_.rank() != k_) throw std::invalid_argument("basis vectors are linearly dependent");
}

SubspaceBasis SubspaceBasis::from_columns(const Matrix& W)
{
    if (W.cols() == 0) throw std::invalid_argument("a subspace basis needs at least one vector");
    if (W.rank() != W.cols()) throw std::invalid_argument("basis vectors are linearly dependent");
    SubspaceBasis B;
    B.n_ = W.rows();
    B.k_ = W.cols();
    B.W_ = W;
    return B;
}

bool same_column_space(const Matrix& A, const Matrix& B)
{
    std::size_t ra = A.rank(), rb = B.rank();
    return ra == rb && A.hstack(B).rank() == ra;
}

std::vector<std::vector<std::size_t>> exterior_basis(std::size_t n, std::size_t k)
{
    std::vector<std::vector<std::size_t>> out;
    if (k > n) return out;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        out.push_back(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

Matrix exterior_power(const Matrix& M, std::size_t k)
{
    if (k < 1 || k > std::min(M.rows(), M.cols())) throw std::invalid_argument("exterior power degree out of range");
    auto rows = exterior_basis(M.rows(), k);
    auto cols = exterior_basis(M.cols(), k);
    Matrix out(rows.size(), cols.size());
    for (std::size_t I = 0; I < rows.size(); ++I) {
        for (std::size_t J = 0; J < cols.size(); ++J) out(I, J) = submatrix(M, rows[I], cols[J]).determinant();
    }
    return out;
}

SubspaceBasis exterior_line(const SubspaceBasis& W)
{
    return SubspaceBasis::from_columns(exterior_power(W.matrix(), W.dimension()));
}

std::optional<long> subspace_period(const Matrix& M, const SubspaceBasis& W, long n_max)
{
    if (!M.is_square() || M.rows() != W.ambient()) throw std::invalid_argument("matrix and subspace dimensions differ");
    if (M.determinant() == 0) throw std::invalid_argument("subspace_period needs an invertible matrix");
    Matrix cur = W.matrix();
    for (long n = 1; n <= n_max; ++n) {
        cur = M * cur;
        if (same_column_space(cur, W.matrix())) return n;
    }
    return std::nullopt;
}

Integer period_bound(long n)
{
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    Integer L = 1;
    for (long m : poly::orders_with_phi_at_most(n * n)) L = numeric::lcm(L, Integer(m));
    return 2 * L;
}

QPoly minimal_polynomial(const Matrix& M)
{
    if (!M.is_square() || M.rows() == 0) throw std::invalid_argument("minimal polynomial of a non-square matrix");
    QPoly out(Rational(1));
    for (std::size_t i = 0; i < M.rows(); ++i) {
        std::vector<Rational> e(M.rows(), Rational(0));
        e[i] = 1;
        out = poly_lcm(out, vector_minpoly(M, column(e)));
    }
    return out;
}

CyclotomicMinpolySplit minpoly_cyclotomic_split(const Matrix& M, long max_candidate)
{
    if (!M.is_square() || M.rows() == 0) throw std::invalid_argument("square matrix required");
    Integer L = 1;
    for (long m : poly::orders_with_phi_at_most(static_cast<long>(M.rows()))) L = numeric::lcm(L, Integer(m));
    long Ll = L.get_si();
    std::vector<long> divisors;
    for (long d = 1; d <= Ll; ++d) {
        if (Ll % d == 0 && (max_candidate <= 0 || d <= max_candidate)) divisors.push_back(d);
    }
    const QPoly t_minus_1(std::vector<Rational>{Rational(-1), Rational(1)});
    for (long n0 : divisors) {
        QPoly mp = minimal_polynomial(M.pow(static_cast<unsigned long>(n0)));
        poly::CyclotomicSplit split = poly::cyclotomic_part(mp);
        long m = split.cyclotomic.degree();
        if (!(split.cyclotomic == t_minus_1.pow(static_cast<unsigned>(m)))) continue;
        return {n0, m, mp, split.remainder};
    }
    throw SearchExhausted("no candidate exponent makes the cyclotomic part a power of t - 1");
}

} // namespace piqlab::linalg
