#pragma once

#include "piqlab/numeric/rational.hpp"

#include <functional>
#include <string>
#include <string_view>

namespace piqlab::numeric {

/// Element re + im*i of Z[i].
struct GaussianInteger {
    Integer re;
    Integer im;

    GaussianInteger() = default;
    GaussianInteger(Integer r, Integer i = 0) : re(std::move(r)), im(std::move(i)) {}
    GaussianInteger(long r) : re(r), im(0) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }
    Integer norm() const { return re * re + im * im; }
    GaussianInteger conj() const { return {re, -im}; }

    GaussianInteger& operator+=(const GaussianInteger& o);
    GaussianInteger& operator-=(const GaussianInteger& o);
    GaussianInteger& operator*=(const GaussianInteger& o);

    friend bool operator==(const GaussianInteger& a, const GaussianInteger& b)
    {
        return a.re == b.re && a.im == b.im;
    }
};

GaussianInteger operator+(GaussianInteger a, const GaussianInteger& b);
GaussianInteger operator-(GaussianInteger a, const GaussianInteger& b);
GaussianInteger operator-(const GaussianInteger& a);
GaussianInteger operator*(const GaussianInteger& a, const GaussianInteger& b);

/// Division with remainder in Z[i]: a = q*b + r with N(r) <= N(b)/2.
void divmod(const GaussianInteger& a, const GaussianInteger& b, GaussianInteger& q, GaussianInteger& r);
/// Exact quotient; throws NotDivisible when b does not divide a.
GaussianInteger divexact(const GaussianInteger& a, const GaussianInteger& b);
GaussianInteger gcd(GaussianInteger a, GaussianInteger b);
/// The associate u*z (u in {1, i, -1, -i}) with re > 0 and im >= 0; zero maps to zero.
GaussianInteger canonical_associate(const GaussianInteger& z);
/// Unit u such that u*z is the canonical associate (1 for zero).
GaussianInteger canonical_unit(const GaussianInteger& z);

std::string to_string(const GaussianInteger& z);

/// Element re + im*i of Q(i). Arithmetic is exact.
struct GaussianRational {
    Rational re;
    Rational im;

    GaussianRational() = default;
    GaussianRational(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}
    GaussianRational(long r) : re(r), im(0) {}
    GaussianRational(const Integer& r) : re(r), im(0) {}
    GaussianRational(const GaussianInteger& z) : re(z.re), im(z.im) {}

    static GaussianRational i_unit() { return {0, 1}; }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }
    Rational norm() const { return re * re + im * im; }
    GaussianRational conj() const { return {re, -im}; }
    GaussianRational inverse() const;

    GaussianRational& operator+=(const GaussianRational& o);
    GaussianRational& operator-=(const GaussianRational& o);
    GaussianRational& operator*=(const GaussianRational& o);
    GaussianRational& operator/=(const GaussianRational& o);

    friend bool operator==(const GaussianRational& a, const GaussianRational& b)
    {
        return a.re == b.re && a.im == b.im;
    }
};

GaussianRational operator+(GaussianRational a, const GaussianRational& b);
GaussianRational operator-(GaussianRational a, const GaussianRational& b);
GaussianRational operator-(const GaussianRational& a);
GaussianRational operator*(GaussianRational a, const GaussianRational& b);
GaussianRational operator/(GaussianRational a, const GaussianRational& b);
GaussianRational pow(const GaussianRational& z, long exp);

/// Least positive integer L with L*z in Z[i].
Integer common_denominator(const GaussianRational& z);

/// Serialization "a+bi" with a, b in lowest terms. Pure reals print as "a",
/// pure imaginaries as "bi"; a unit imaginary part prints as "i" / "-i".
std::string to_string(const GaussianRational& z);
GaussianRational parse_gaussian(std::string_view text);

/// True iff z^n = 1 for some n >= 1. In Q(i) the roots of unity are exactly
/// {1, -1, i, -i}. Zero is rejected with std::domain_error.
bool is_root_of_unity_gaussian(const GaussianRational& z);

} // namespace piqlab::numeric
