#pragma once

#include "piqlab/numeric/gaussian.hpp"
#include "piqlab/numeric/rational.hpp"

#include <string>

namespace piqlab::poly {

using numeric::GaussianRational;
using numeric::Rational;

inline bool is_zero(const Rational& q) { return q == 0; }
inline bool is_zero(const GaussianRational& z) { return z.is_zero(); }

inline std::string coeff_string(const Rational& q) { return q.get_str(); }
inline std::string coeff_string(const GaussianRational& z) { return numeric::to_string(z); }

/// Whether a coefficient needs parentheses when printed in front of a monomial.
inline bool is_compound(const Rational&) { return false; }
inline bool is_compound(const GaussianRational& z) { return !z.is_real() && z.re != 0; }

} // namespace piqlab::poly
