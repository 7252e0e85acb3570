#pragma once

#include "piqlab/poly/polynomial.hpp"

#include <stdexcept>
#include <vector>

namespace piqlab::poly {

/// Homogeneous binary form of fixed degree d in (x0, x1). coeff(k) is the
/// coefficient of x0^k x1^(d-k), so dehomogenizing at x1 = 1 gives the
/// polynomial sum coeff(k) z^k in z = x0/x1.
template <class K>
class BinaryForm {
public:
    BinaryForm() = default;
    BinaryForm(int degree, std::vector<K> coeffs) : d_(degree), c_(std::move(coeffs))
    {
        if (d_ < 0) throw std::invalid_argument("negative form degree");
        if (static_cast<int>(c_.size()) > d_ + 1) {
            for (std::size_t k = static_cast<std::size_t>(d_) + 1; k < c_.size(); ++k) {
                if (!poly::is_zero(c_[k])) throw std::invalid_argument("form coefficient beyond its degree");
            }
        }
        c_.resize(static_cast<std::size_t>(d_) + 1, K(0));
    }
    /// Homogenize p to degree d >= deg p.
    static BinaryForm homogenize(const Polynomial<K>& p, int degree)
    {
        if (p.degree() > degree) throw std::invalid_argument("polynomial degree exceeds form degree");
        return BinaryForm(degree, p.coefficients());
    }
    static BinaryForm constant(const K& value) { return BinaryForm(0, {value}); }
    static BinaryForm x0() { return BinaryForm(1, {K(0), K(1)}); }
    static BinaryForm x1() { return BinaryForm(1, {K(1), K(0)}); }

    int degree() const { return d_; }
    const std::vector<K>& coefficients() const { return c_; }
    const K& coeff(int k) const { return c_[static_cast<std::size_t>(k)]; }
    bool is_zero() const
    {
        for (const auto& a : c_) {
            if (!poly::is_zero(a)) return false;
        }
        return true;
    }
    Polynomial<K> dehomogenize() const { return Polynomial<K>(c_); }

    friend BinaryForm operator*(const BinaryForm& a, const BinaryForm& b)
    {
        std::vector<K> out(static_cast<std::size_t>(a.d_ + b.d_) + 1, K(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (poly::is_zero(a.c_[i])) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
        }
        return BinaryForm(a.d_ + b.d_, std::move(out));
    }
    friend BinaryForm operator+(BinaryForm a, const BinaryForm& b)
    {
        if (a.d_ != b.d_) throw std::invalid_argument("adding forms of different degrees");
        for (std::size_t k = 0; k < a.c_.size(); ++k) a.c_[k] += b.c_[k];
        return a;
    }
    friend BinaryForm operator-(BinaryForm a, const BinaryForm& b)
    {
        if (a.d_ != b.d_) throw std::invalid_argument("subtracting forms of different degrees");
        for (std::size_t k = 0; k < a.c_.size(); ++k) a.c_[k] -= b.c_[k];
        return a;
    }
    friend BinaryForm operator*(BinaryForm a, const K& s)
    {
        for (auto& x : a.c_) x *= s;
        return a;
    }
    friend bool operator==(const BinaryForm& a, const BinaryForm& b) { return a.d_ == b.d_ && a.c_ == b.c_; }

    BinaryForm pow(unsigned n) const
    {
        BinaryForm result = constant(K(1));
        for (unsigned k = 0; k < n; ++k) result = result * *this;
        return result;
    }

    /// Value at (x0, x1) = (u, v) for any ring element type T accepting K.
    template <class T>
    T evaluate(const T& u, const T& v) const
    {
        // Horner in u with powers of v
        T acc = T(c_[static_cast<std::size_t>(d_)]);
        T vpow = v;
        for (int k = d_ - 1; k >= 0; --k) {
            acc = acc * u + T(c_[static_cast<std::size_t>(k)]) * vpow;
            if (k > 0) vpow = vpow * v;
        }
        return acc;
    }

private:
    int d_ = 0;
    std::vector<K> c_{K(0)};
};

} // namespace piqlab::poly
