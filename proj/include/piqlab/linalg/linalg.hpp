#pragma once

#include "piqlab/numeric/rational.hpp"
#include "piqlab/poly/polynomial.hpp"

#include <optional>
#include <string>
#include <vector>

namespace piqlab::linalg {

using numeric::Integer;
using numeric::Rational;
using poly::QPoly;

/// Dense matrix over Q, row-major.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, Rational(0)) {}

    static Matrix identity(std::size_t n);
    /// Throws std::invalid_argument on ragged rows.
    static Matrix from_rows(const std::vector<std::vector<Rational>>& rows);
    /// Companion matrix of a monic polynomial (columns shift up, last column -coefficients).
    static Matrix companion(const QPoly& p);
    /// Block diagonal matrix.
    static Matrix block_diagonal(const std::vector<Matrix>& blocks);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Rational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    friend Matrix operator*(const Matrix& A, const Matrix& B);
    friend Matrix operator*(const Rational& s, Matrix A);
    friend Matrix operator+(Matrix A, const Matrix& B);
    friend Matrix operator-(Matrix A, const Matrix& B);
    friend bool operator==(const Matrix& A, const Matrix& B)
    {
        return A.rows_ == B.rows_ && A.cols_ == B.cols_ && A.a_ == B.a_;
    }

    Matrix transpose() const;
    Matrix pow(unsigned long n) const;
    std::size_t rank() const;
    Rational determinant() const;
    /// Throws std::domain_error when singular.
    Matrix inverse() const;
    /// The columns listed, in order.
    Matrix columns(const std::vector<std::size_t>& idx) const;
    /// [A | B].
    Matrix hstack(const Matrix& B) const;
    /// Rows "a b c" joined by "; ".
    std::string to_string() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> a_;
};

/// Linearly independent column vectors spanning a subspace of Q^n.
class SubspaceBasis {
public:
    /// Throws std::invalid_argument when the vectors are dependent, empty or ragged.
    explicit SubspaceBasis(std::vector<std::vector<Rational>> vectors);
    /// Columns of an n x k matrix of rank k.
    static SubspaceBasis from_columns(const Matrix& W);

    std::size_t dimension() const { return k_; }
    std::size_t ambient() const { return n_; }
    /// n x k matrix with the basis as columns.
    const Matrix& matrix() const { return W_; }

private:
    SubspaceBasis() = default;
    std::size_t n_ = 0;
    std::size_t k_ = 0;
    Matrix W_;
};

/// Whether the column spaces of A and B agree.
bool same_column_space(const Matrix& A, const Matrix& B);

/// k-subsets of {0..n-1} in lexicographic order: the basis of the k-th exterior power.
std::vector<std::vector<std::size_t>> exterior_basis(std::size_t n, std::size_t k);

/// The k x k minors of M in the lexicographic basis. Throws
/// std::invalid_argument unless 1 <= k <= min(rows, cols).
Matrix exterior_power(const Matrix& M, std::size_t k);

/// w_1 ^ ... ^ w_k as a line in the k-th exterior power (Plucker coordinates).
SubspaceBasis exterior_line(const SubspaceBasis& W);

/// Least n in [1, n_max] with M^n W = W; nullopt when there is none.
/// Throws std::invalid_argument for a singular or non-square M.
std::optional<long> subspace_period(const Matrix& M, const SubspaceBasis& W, long n_max);

/// 2 lcm{m >= 1 : phi(m) <= n^2}: every periodic subspace of an automorphism
/// of Q^n has period dividing this.
Integer period_bound(long n);

/// Minimal polynomial over Q via Krylov sequences of the standard basis.
QPoly minimal_polynomial(const Matrix& M);

struct CyclotomicMinpolySplit {
    long n0 = 1;
    long m = 0;
    /// Minimal polynomial of M^n0 = (t - 1)^m Q.
    QPoly minpoly;
    QPoly Q;
};

/// Least n0 among the divisors of lcm{m : phi(m) <= dim} (at most
/// max_candidate when positive) for which the cyclotomic part of the minimal
/// polynomial of M^n0 is a power of t - 1. Throws SearchExhausted.
CyclotomicMinpolySplit minpoly_cyclotomic_split(const Matrix& M, long max_candidate = 0);

} // namespace piqlab::linalg
