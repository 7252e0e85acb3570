#pragma once

#include "piqlab/errors.hpp"
#include "piqlab/poly/field_traits.hpp"

#include <algorithm>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace piqlab::poly {

/// Dense univariate polynomial over a field K (Rational or GaussianRational),
/// coefficients stored lowest degree first. The leading stored coefficient
/// is nonzero unless the polynomial is zero (empty storage).
template <class K>
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(std::vector<K> coeffs) : c_(std::move(coeffs)) { trim(); }
    Polynomial(std::initializer_list<K> coeffs) : c_(coeffs) { trim(); }
    explicit Polynomial(const K& constant) : c_{constant} { trim(); }

    static Polynomial monomial(const K& coeff, int degree)
    {
        std::vector<K> c(static_cast<std::size_t>(degree) + 1, K(0));
        c.back() = coeff;
        return Polynomial(std::move(c));
    }
    static Polynomial x() { return monomial(K(1), 1); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<K>& coefficients() const { return c_; }

    K coeff(int k) const
    {
        if (k < 0 || k > degree()) return K(0);
        return c_[static_cast<std::size_t>(k)];
    }
    const K& leading() const
    {
        if (c_.empty()) throw std::domain_error("leading coefficient of zero polynomial");
        return c_.back();
    }

    K operator()(const K& x) const
    {
        K acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            acc *= x;
            acc += *it;
        }
        return acc;
    }

    Polynomial& operator+=(const Polynomial& o)
    {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), K(0));
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
        trim();
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o)
    {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), K(0));
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
        trim();
        return *this;
    }
    Polynomial& operator*=(const Polynomial& o)
    {
        *this = *this * o;
        return *this;
    }
    Polynomial& operator*=(const K& s)
    {
        if (poly::is_zero(s)) {
            c_.clear();
            return *this;
        }
        for (auto& a : c_) a *= s;
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator-(Polynomial a)
    {
        for (auto& k : a.c_) k = -k;
        return a;
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<K> out(a.c_.size() + b.c_.size() - 1, K(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (poly::is_zero(a.c_[i])) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                out[i + j] += a.c_[i] * b.c_[j];
            }
        }
        return Polynomial(std::move(out));
    }
    friend Polynomial operator*(Polynomial a, const K& s) { return a *= s; }
    friend Polynomial operator*(const K& s, Polynomial a) { return a *= s; }
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

    /// Euclidean division: *this = q*d + r with deg r < deg d.
    void divmod(const Polynomial& d, Polynomial& q, Polynomial& r) const
    {
        if (d.is_zero()) throw std::domain_error("polynomial division by zero");
        r = *this;
        std::vector<K> qc;
        if (degree() >= d.degree()) qc.assign(static_cast<std::size_t>(degree() - d.degree() + 1), K(0));
        K inv_lead = K(1) / d.leading();
        while (!r.is_zero() && r.degree() >= d.degree()) {
            int shift = r.degree() - d.degree();
            K factor = r.leading() * inv_lead;
            qc[static_cast<std::size_t>(shift)] = factor;
            for (int k = 0; k <= d.degree(); ++k) {
                r.c_[static_cast<std::size_t>(k + shift)] -= factor * d.c_[static_cast<std::size_t>(k)];
            }
            r.c_.pop_back();  // leading term cancels exactly
            r.trim();
        }
        q = Polynomial(std::move(qc));
    }

    Polynomial operator/(const Polynomial& d) const
    {
        Polynomial q, r;
        divmod(d, q, r);
        return q;
    }
    Polynomial operator%(const Polynomial& d) const
    {
        Polynomial q, r;
        divmod(d, q, r);
        return r;
    }

    /// Quotient when d divides *this; throws NotDivisible otherwise.
    Polynomial exact_div(const Polynomial& d) const
    {
        Polynomial q, r;
        divmod(d, q, r);
        if (!r.is_zero()) throw NotDivisible("polynomial division leaves a remainder");
        return q;
    }

    bool divisible_by(const Polynomial& d) const { return (*this % d).is_zero(); }

    Polynomial derivative() const
    {
        if (c_.size() <= 1) return {};
        std::vector<K> out(c_.size() - 1, K(0));
        for (std::size_t k = 1; k < c_.size(); ++k) out[k - 1] = c_[k] * K(static_cast<long>(k));
        return Polynomial(std::move(out));
    }

    Polynomial monic() const
    {
        if (is_zero()) return {};
        return *this * (K(1) / leading());
    }

    Polynomial pow(unsigned n) const
    {
        Polynomial result(K(1));
        Polynomial base = *this;
        while (n > 0) {
            if (n & 1U) result *= base;
            n >>= 1U;
            if (n > 0) base *= base;
        }
        return result;
    }

    /// this(inner(x)).
    Polynomial compose(const Polynomial& inner) const
    {
        Polynomial acc;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            acc *= inner;
            acc += Polynomial(*it);
        }
        return acc;
    }

    std::string to_string(const std::string& var = "t") const
    {
        if (is_zero()) return "0";
        std::string out;
        for (int k = degree(); k >= 0; --k) {
            const K& a = c_[static_cast<std::size_t>(k)];
            if (poly::is_zero(a)) continue;
            std::string coeff = coeff_string(a);
            bool negative = !coeff.empty() && coeff.front() == '-' && !is_compound(a);
            if (negative) coeff.erase(coeff.begin());
            if (is_compound(a)) coeff = "(" + coeff + ")";
            if (!out.empty()) out += negative ? " - " : " + ";
            else if (negative) out += "-";
            std::string mono = k == 0 ? "" : (k == 1 ? var : var + "^" + std::to_string(k));
            if (mono.empty()) {
                out += coeff;
            } else if (coeff == "1") {
                out += mono;
            } else {
                out += coeff + "*" + mono;
            }
        }
        return out;
    }

private:
    void trim()
    {
        while (!c_.empty() && poly::is_zero(c_.back())) c_.pop_back();
    }

    std::vector<K> c_;
};

using QPoly = Polynomial<Rational>;
using QiPoly = Polynomial<GaussianRational>;

/// Monic gcd (zero when both inputs are zero).
template <class K>
Polynomial<K> gcd(Polynomial<K> a, Polynomial<K> b)
{
    while (!b.is_zero()) {
        Polynomial<K> r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

inline QiPoly to_gaussian(const QPoly& p)
{
    std::vector<GaussianRational> c;
    c.reserve(p.coefficients().size());
    for (const auto& a : p.coefficients()) c.emplace_back(a, 0);
    return QiPoly(std::move(c));
}

/// Real part projection; throws std::domain_error if a coefficient is not real.
inline QPoly to_rational(const QiPoly& p)
{
    std::vector<Rational> c;
    c.reserve(p.coefficients().size());
    for (const auto& a : p.coefficients()) {
        if (!a.is_real()) throw std::domain_error("polynomial has non-real coefficients");
        c.push_back(a.re);
    }
    return QPoly(std::move(c));
}

} // namespace piqlab::poly
