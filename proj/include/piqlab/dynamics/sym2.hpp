#pragma once

#include "piqlab/dynamics/projective.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>

namespace piqlab::dynamics {

/// a + b sqrt(D) in Q(sqrt(D)) for a fixed non-square integer D.
struct QuadraticNumber {
    Rational a;
    Rational b;
    Integer D = -1;

    bool is_rational() const { return b == 0; }
    bool is_zero() const { return a == 0 && b == 0; }
    QuadraticNumber conj() const { return {a, -b, D}; }
    QuadraticNumber inverse() const;
    std::string to_string() const;

    friend QuadraticNumber operator+(const QuadraticNumber& x, const QuadraticNumber& y);
    friend QuadraticNumber operator-(const QuadraticNumber& x, const QuadraticNumber& y);
    friend QuadraticNumber operator*(const QuadraticNumber& x, const QuadraticNumber& y);
    friend QuadraticNumber operator/(const QuadraticNumber& x, const QuadraticNumber& y);
    friend bool operator==(const QuadraticNumber& x, const QuadraticNumber& y)
    {
        return x.a == y.a && x.b == y.b && (x.b == 0 || x.D == y.D);
    }
};

/// Point of P^1(Q(sqrt(D))): an affine value or infinity (nullopt).
using QuadraticPoint = std::optional<QuadraticNumber>;

/// f(x) for a map over Q.
QuadraticPoint map_quadratic(const RationalMap& f, const QuadraticPoint& x);

/// Point (u0 : u1 : u2) of P^2(Q) read as the binary quadratic
/// u0 x0^2 + u1 x0 x1 + u2 x1^2; integral, primitive, first nonzero entry > 0.
struct P2Point {
    std::array<Integer, 3> u;

    static P2Point make(const std::array<Rational, 3>& coords);
    std::string to_string() const;
    friend bool operator==(const P2Point& a, const P2Point& b) { return a.u == b.u; }
};

/// Minimal binary quadratic of x over Q; a rational x gives its square.
P2Point descend(const QuadraticPoint& x);

using Monomial3 = std::array<int, 3>;
using Poly3 = std::map<Monomial3, Rational>;

/// Self-map of P^2 = Sym^2 P^1 by three forms of degree d in (u0, u1, u2).
struct Sym2Map {
    int degree = 1;
    std::array<Poly3, 3> components;

    P2Point operator()(const P2Point& q) const;
};

/// The map on binary quadratics induced by f over Q: roots go to their
/// f-images, computed as Res_x(q(x), y1 F0(x) - y0 F1(x)) in the quadratic's
/// coefficients.
Sym2Map symmetric_square_descent(const RationalMap& f);

/// Whether both roots of q lie in Y = {Y_form = 0} in P^1, i.e. whether q is
/// a Q-point of the image of Sym^2 Y.
bool sym2_contains(const poly::BinaryForm<Rational>& Y_form, const P2Point& q);

/// Whether the quadratic point x lies on Y.
bool lies_on(const poly::BinaryForm<Rational>& Y_form, const QuadraticPoint& x);

} // namespace piqlab::dynamics
