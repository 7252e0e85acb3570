#pragma once

#include "piqlab/poly/polynomial.hpp"

namespace piqlab::poly {

/// num/den in lowest terms with a monic denominator.
template <class K>
class RationalFunction {
public:
    RationalFunction() : num_(), den_(K(1)) {}
    RationalFunction(Polynomial<K> p) : num_(std::move(p)), den_(K(1)) {}
    RationalFunction(Polynomial<K> num, Polynomial<K> den) : num_(std::move(num)), den_(std::move(den))
    {
        normalize();
    }

    const Polynomial<K>& num() const { return num_; }
    const Polynomial<K>& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    /// max(deg num, deg den).
    int degree() const { return std::max(num_.degree(), den_.degree()); }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b)
    {
        return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b)
    {
        return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
    }
    friend RationalFunction operator-(const RationalFunction& a) { return {-a.num_, a.den_}; }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b)
    {
        return {a.num_ * b.num_, a.den_ * b.den_};
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b)
    {
        if (b.is_zero()) throw std::domain_error("rational function division by zero");
        return {a.num_ * b.den_, a.den_ * b.num_};
    }
    friend bool operator==(const RationalFunction& a, const RationalFunction& b)
    {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    /// this(inner) computed by homogeneous substitution.
    RationalFunction compose(const RationalFunction& inner) const
    {
        int d = degree();
        // N(u/v) / D(u/v) = v^d N(u/v) / v^d D(u/v)
        std::vector<Polynomial<K>> upow{Polynomial<K>(K(1))}, vpow{Polynomial<K>(K(1))};
        for (int k = 1; k <= d; ++k) {
            upow.push_back(upow.back() * inner.num_);
            vpow.push_back(vpow.back() * inner.den_);
        }
        auto substitute = [&](const Polynomial<K>& p) {
            Polynomial<K> acc;
            for (int k = 0; k <= p.degree(); ++k) {
                const K& a = p.coefficients()[static_cast<std::size_t>(k)];
                if (poly::is_zero(a)) continue;
                acc += upow[static_cast<std::size_t>(k)] * vpow[static_cast<std::size_t>(d - k)] * a;
            }
            return acc;
        };
        return {substitute(num_), substitute(den_)};
    }

    RationalFunction scaled(const K& s) const { return {num_ * s, den_}; }

private:
    void normalize()
    {
        if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
        if (num_.is_zero()) {
            den_ = Polynomial<K>(K(1));
            return;
        }
        Polynomial<K> g = gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = num_.exact_div(g);
            den_ = den_.exact_div(g);
        }
        K lead = den_.leading();
        if (!(lead == K(1))) {
            K inv = K(1) / lead;
            num_ *= inv;
            den_ *= inv;
        }
    }

    Polynomial<K> num_;
    Polynomial<K> den_;
};

using QRationalFunction = RationalFunction<Rational>;
using QiRationalFunction = RationalFunction<GaussianRational>;

} // namespace piqlab::poly
