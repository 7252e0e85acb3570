#pragma once

#include "piqlab/numeric/gaussian.hpp"
#include "piqlab/numeric/padic.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace piqlab::series {

using numeric::GaussianRational;
using numeric::Integer;
using numeric::PadicNumber;
using numeric::Rational;

using MultiIndex = std::vector<int>;

int total_degree(const MultiIndex& I);

/// Polyradius r = (p^(-m_1), ..., p^(-m_n)) with exact rational m_i >= 0.
struct Radius {
    std::vector<Rational> exponents;

    static Radius uniform(int nvars, const Rational& m);
    std::size_t size() const { return exponents.size(); }
    /// m . I, so that |T^I| = p^(-weight(I)) on the polydisc.
    Rational weight(const MultiIndex& I) const;
    friend bool operator==(const Radius& a, const Radius& b) { return a.exponents == b.exponents; }
};

/// Element of K{r^-1 T} known as a truncated sum plus a tail bound.
///
/// Stored coefficients have total degree <= D. Every omitted coefficient obeys
/// |a_I| r^I <= p^(-tau) at the reference radius r; a missing tail means the
/// stored sum is the whole series. Coefficients may themselves be p-adic
/// approximations, including approximate zeros, whose uncertainty is part of
/// every certificate.
class PolydiscSeries {
public:
    PolydiscSeries() = default;
    PolydiscSeries(Integer p, int nvars, int truncation);

    /// Exact polynomial with rational coefficients, each known to the given
    /// relative precision.
    static PolydiscSeries from_rational_terms(const Integer& p, int nvars, int truncation,
                                              const std::map<MultiIndex, Rational>& terms, long precision);
    static PolydiscSeries constant(const Integer& p, int nvars, int truncation, const PadicNumber& c);

    const Integer& prime() const { return p_; }
    int nvars() const { return n_; }
    int truncation() const { return D_; }
    const std::map<MultiIndex, PadicNumber>& terms() const { return terms_; }
    PadicNumber coefficient(const MultiIndex& I) const;
    bool is_exact_zero() const { return terms_.empty() && !tail_; }

    void set_coefficient(const MultiIndex& I, const PadicNumber& c);
    /// Tail exponent tau at the reference radius; merges with an existing tail
    /// by keeping the weaker bound.
    void add_tail(const Rational& tau, const Radius& reference);
    bool has_tail() const { return tail_.has_value(); }
    const std::optional<Rational>& tail_exponent() const { return tail_; }
    const Radius& tail_radius() const { return tail_radius_; }

    /// Tail exponent valid at radius s (nullopt: no tail). Throws TailDominates
    /// when s is larger than the reference radius in some coordinate.
    std::optional<Rational> tail_exponent_at(const Radius& s) const;

    /// Lower bound on -log_p of the norm: every term, uncertain coefficient and
    /// the tail are bounded by p^(-value). Throws when the series is exactly zero.
    Rational norm_exponent_lower_bound(const Radius& s) const;

    /// Drop terms of total degree > D into the tail (taken at the reference
    /// radius, or at the given radius when there is no tail yet).
    PolydiscSeries truncated(int D, const Radius& reference) const;

    friend PolydiscSeries operator+(const PolydiscSeries& f, const PolydiscSeries& g);
    friend PolydiscSeries operator-(const PolydiscSeries& f, const PolydiscSeries& g);
    PolydiscSeries operator-() const;
    /// Product truncated at min(D_f, D_g); exact inputs keep D_f + D_g.
    friend PolydiscSeries operator*(const PolydiscSeries& f, const PolydiscSeries& g);
    PolydiscSeries scaled(const PadicNumber& c) const;

    std::string to_string() const;

private:
    void check_compatible(const PolydiscSeries& o) const;
    Radius reference_for(const PolydiscSeries& o) const;

    Integer p_ = 2;
    int n_ = 1;
    int D_ = 0;
    std::map<MultiIndex, PadicNumber> terms_;
    std::optional<Rational> tail_;
    Radius tail_radius_;
};

/// Exact exponent e with ||f||_r = p^(-e). Throws TailDominates unless the
/// attained maximum strictly exceeds every uncertain contribution.
Rational gauss_norm(const PolydiscSeries& f, const Radius& r);

/// Largest total degree attaining the Gauss norm.
int ord(const PolydiscSeries& f, const Radius& r);

/// Multi-indices attaining the norm at r itself and at every grid radius with
/// exponents m_r + k, k in {0, ..., M}^n.
std::set<MultiIndex> staircase_set(const PolydiscSeries& f, const Radius& r, int grid_depth);

/// Upper bound for the number of non-unit factors of f at any radius s <= r;
/// equal to ord(f, r).
int prime_factor_bound(const PolydiscSeries& f, const Radius& r);

/// Inverse of f in K{r^-1 T} when ord(f, r) = 0: a0^-1 * sum (-u)^k with
/// f = a0 (1 + u), truncated at D with a certified tail. Throws NotDivisible
/// when the constant term does not strictly dominate.
PolydiscSeries certified_inverse(const PolydiscSeries& f, const Radius& r);

/// Exact multivariate power series over Q(i), truncated at total degree D.
struct ExactSeries {
    int nvars = 1;
    std::map<MultiIndex, GaussianRational> terms;

    GaussianRational coefficient(const MultiIndex& I) const;
    ExactSeries truncated(int D) const;
    friend ExactSeries operator*(const ExactSeries& f, const ExactSeries& g);
    friend bool operator==(const ExactSeries& f, const ExactSeries& g)
    {
        return f.nvars == g.nvars && f.terms == g.terms;
    }
};

enum class DescentVerdict { RationalQuotient, NotDivisibleWithinBase };

struct DescentResult {
    ExactSeries quotient;
    DescentVerdict verdict = DescentVerdict::RationalQuotient;
    /// A multi-index whose quotient coefficient leaves Q, when there is one.
    std::optional<MultiIndex> witness;
};

/// g = h / f to total degree D and whether g has rational coefficients. f must
/// have a nonzero constant term (std::invalid_argument otherwise).
DescentResult divisibility_descent_check(const ExactSeries& f, const ExactSeries& h, int D);

/// All multi-indices in n variables with total degree <= D, in graded order.
std::vector<MultiIndex> indices_up_to(int nvars, int D);

} // namespace piqlab::series
