#pragma once

#include "piqlab/numeric/rational.hpp"

#include <climits>
#include <optional>
#include <string>

namespace piqlab::numeric {

/// A p-adic number x = p^v * u known to a fixed number of unit digits.
///
/// Three states are distinguished:
///   - exact zero (valuation +infinity, infinite precision);
///   - known nonzero: v exact, u a unit known modulo p^precision, precision >= 1;
///   - approximate zero O(p^A): every digit that is known is zero; only the
///     lower bound v >= A is available.
///
/// Arithmetic never invents digits. Cancellation shrinks the precision of the
/// result; operations that need a nonzero value (inverse, exact valuation) on
/// an approximate zero throw PrecisionLoss.
class PadicNumber {
public:
    static constexpr long kInfinity = LONG_MAX;

    PadicNumber() = default;

    static PadicNumber zero(const Integer& p);
    static PadicNumber approximate_zero(const Integer& p, long valuation_bound);
    /// p^valuation * unit with the unit taken modulo p^precision.
    static PadicNumber from_parts(const Integer& p, long valuation, const Integer& unit, long precision);
    static PadicNumber from_rational(const Rational& q, const Integer& p, long precision);
    static PadicNumber from_integer(const Integer& z, const Integer& p, long precision)
    {
        return from_rational(Rational(z), p, precision);
    }

    const Integer& prime() const { return p_; }
    bool is_exact_zero() const { return exact_zero_; }
    bool is_known_nonzero() const { return !exact_zero_ && precision_ > 0; }
    /// True for exact zeros and approximate zeros.
    bool is_indistinguishable_from_zero() const { return !is_known_nonzero(); }

    /// Exact valuation; nullopt for exact zero. Throws PrecisionLoss for an
    /// approximate zero.
    std::optional<long> valuation() const;
    /// Exact valuation for nonzero values, the known lower bound otherwise
    /// (kInfinity for exact zero).
    long valuation_bound() const;
    /// x is known modulo p^absolute_precision (kInfinity for exact zero).
    long absolute_precision() const;
    long precision() const { return precision_; }
    const Integer& unit() const { return unit_; }

    PadicNumber operator-() const;
    PadicNumber& operator+=(const PadicNumber& o);
    PadicNumber& operator-=(const PadicNumber& o);
    PadicNumber& operator*=(const PadicNumber& o);
    PadicNumber& operator/=(const PadicNumber& o);

    PadicNumber inverse() const;
    PadicNumber pow(long exp) const;

    /// The representative of x modulo p^k in [0, p^k). Requires x to be
    /// p-integral and known to absolute precision >= k.
    Integer residue(long k) const;

    /// Equality of the common known digits; an exact zero equals anything whose
    /// known digits vanish.
    bool agrees_with(const PadicNumber& o) const;

    std::string to_string() const;

private:
    void check_prime(const PadicNumber& o) const;

    Integer p_ = 2;
    bool exact_zero_ = true;
    long valuation_ = kInfinity;
    Integer unit_ = 0;
    long precision_ = 0;
};

PadicNumber operator+(PadicNumber a, const PadicNumber& b);
PadicNumber operator-(PadicNumber a, const PadicNumber& b);
PadicNumber operator*(PadicNumber a, const PadicNumber& b);
PadicNumber operator/(PadicNumber a, const PadicNumber& b);

inline PadicNumber padic_from_rational(const Rational& q, const Integer& p, long precision)
{
    return PadicNumber::from_rational(q, p, precision);
}

/// The Teichmueller representative of the residue a (not divisible by p),
/// i.e. the (p-1)-th root of unity congruent to a modulo p.
PadicNumber teichmuller(const Integer& a, const Integer& p, long precision);

/// y with y^n = x to the working precision, choosing the smallest residue root
/// modulo p as the branch. nullopt when n does not divide v(x) or the unit
/// part has no n-th root in Z_p (the value needs a field extension).
std::optional<PadicNumber> nth_root_padic(const PadicNumber& x, long n);

} // namespace piqlab::numeric
