#pragma once

#include "piqlab/numeric/gaussian.hpp"
#include "piqlab/poly/binary_form.hpp"
#include "piqlab/poly/polynomial.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace piqlab::dynamics {

using numeric::GaussianInteger;
using numeric::GaussianRational;
using numeric::Integer;
using numeric::Rational;
using Form = poly::BinaryForm<GaussianRational>;

/// Point (x0 : x1) of P^1 over Q or Q(i), z = x0/x1.
///
/// Coordinates are coprime in Z[i]. The representative has x1 equal to its
/// canonical associate (re > 0, im >= 0), or is (1 : 0); for rational points
/// this is the usual x1 > 0 convention.
struct ProjPoint {
    GaussianInteger x0{1};
    GaussianInteger x1{0};

    /// Normalizes (a : b); throws std::invalid_argument for (0 : 0).
    static ProjPoint make(const GaussianInteger& a, const GaussianInteger& b);
    static ProjPoint from_value(const GaussianRational& z);
    static ProjPoint infinity() { return {}; }

    bool is_infinity() const { return x1.is_zero(); }
    bool is_rational() const { return x0.is_real() && x1.is_real(); }
    /// x0/x1, nullopt at infinity.
    std::optional<GaussianRational> value() const;
    /// max(|x0|, |x1|) for rational points, max(N(x0), N(x1)) otherwise.
    Integer height() const;
    std::string to_string() const;

    friend bool operator==(const ProjPoint& a, const ProjPoint& b) { return a.x0 == b.x0 && a.x1 == b.x1; }
    friend bool operator!=(const ProjPoint& a, const ProjPoint& b) { return !(a == b); }
    friend bool operator<(const ProjPoint& a, const ProjPoint& b);
};

/// Parses "inf", "a/b", "a+bi" or "(a:b)" with Gaussian-rational entries.
ProjPoint parse_point(const std::string& text);

struct ProjPointHash {
    std::size_t operator()(const ProjPoint& P) const;
};

/// Morphism (F0 : F1) of P^1 of degree d >= 1.
///
/// Coefficients are kept in Z[i] with trivial content; the first nonzero
/// coefficient of F1 (from the top degree down), or of F0 if F1 vanishes, is
/// its canonical associate. Two maps are equal iff their normal forms agree.
class RationalMap {
public:
    RationalMap() = default;
    /// Throws std::invalid_argument when the forms share a root (Res = 0).
    RationalMap(const Form& F0, const Form& F1);

    /// z -> p(z).
    static RationalMap polynomial(const poly::QiPoly& p);
    /// z -> num(z)/den(z) with d = max(deg num, deg den).
    static RationalMap fraction(const poly::QiPoly& num, const poly::QiPoly& den);
    static RationalMap identity();

    int degree() const { return d_; }
    Form F0() const;
    Form F1() const;
    const std::vector<GaussianInteger>& coeffs0() const { return a_; }
    const std::vector<GaussianInteger>& coeffs1() const { return b_; }
    bool is_rational() const { return rational_; }

    ProjPoint operator()(const ProjPoint& P) const;
    /// Unnormalized (F0(a, b), F1(a, b)) for integral coordinates.
    std::pair<GaussianInteger, GaussianInteger> evaluate_raw(const GaussianInteger& a, const GaussianInteger& b) const;

    std::string to_string() const;

    friend bool operator==(const RationalMap& f, const RationalMap& g) { return f.a_ == g.a_ && f.b_ == g.b_; }
    friend bool operator!=(const RationalMap& f, const RationalMap& g) { return !(f == g); }

private:
    void normalize();

    int d_ = 1;
    std::vector<GaussianInteger> a_{GaussianInteger(0), GaussianInteger(1)};
    std::vector<GaussianInteger> b_{GaussianInteger(1), GaussianInteger(0)};
    bool rational_ = true;
};

/// f o g.
RationalMap compose(const RationalMap& f, const RationalMap& g);
/// f^n, n >= 0.
RationalMap iterate(const RationalMap& f, int n);
/// Homogeneous resultant of F0 and F1 taken with formal degree d.
GaussianRational resultant(const Form& F0, const Form& F1);
GaussianRational resultant(const RationalMap& f);

/// P^1(Q) points of height <= H, each once, sorted by height then value.
std::vector<ProjPoint> enumerate_points(long H);
/// P^1(Q(i)) points with max(N(x0), N(x1)) <= H, each once, sorted.
std::vector<ProjPoint> enumerate_gaussian_points(long H);

/// Ramification indices e >= 2 of f over the algebraic closure, sorted.
std::vector<int> ramification_multiset(const RationalMap& f);

/// Parses "z^2 - 1", "(z^2+1)/(2*z)" and similar expressions in z with
/// Gaussian-rational coefficients.
RationalMap parse_map(const std::string& text);

} // namespace piqlab::dynamics
