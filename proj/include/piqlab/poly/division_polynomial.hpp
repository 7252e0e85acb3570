#pragma once

#include "piqlab/poly/rational_function.hpp"

namespace piqlab::poly {

/// Short Weierstrass curve y^2 = x^3 + a x + b over Q.
struct WeierstrassCurve {
    Rational a;
    Rational b;

    /// x^3 + a x + b.
    QPoly rhs() const;
    Rational discriminant_factor() const { return 4 * a * a * a + 27 * b * b; }
};

/// psi_n = y^{y_degree} * x_part(x) with y_degree in {0, 1}; the odd-index
/// division polynomials carry no y factor.
struct DivisionPolynomial {
    int y_degree = 0;
    QPoly x_part;

    /// psi_n^2 as a polynomial in x (y^2 replaced by the curve equation).
    QPoly squared(const WeierstrassCurve& E) const;
};

/// Classical division-polynomial recurrence. Throws std::invalid_argument on
/// a singular curve or n < 1.
DivisionPolynomial division_polynomial(const WeierstrassCurve& E, int n);

inline DivisionPolynomial division_polynomial(const Rational& a, const Rational& b, int n)
{
    return division_polynomial(WeierstrassCurve{a, b}, n);
}

/// x([n]P) = x - psi_{n-1} psi_{n+1} / psi_n^2 as a rational function of x.
QRationalFunction multiplication_x_map(const WeierstrassCurve& E, int n);

/// y([2]P) / y(P) as a rational function of x.
QRationalFunction doubling_y_ratio(const WeierstrassCurve& E);

} // namespace piqlab::poly
