#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace piqlab::numeric {

using Integer = mpz_class;
/// Canonical rationals: gcd(|num|, den) = 1 and den >= 1 after every operation.
using Rational = mpq_class;

Integer parse_integer(std::string_view text);
/// Accepts "a" or "a/b"; the result is canonicalized.
Rational parse_rational(std::string_view text);

std::string to_string(const Integer& z);
std::string to_string(const Rational& q);

/// Largest k with p^k | z; z must be nonzero.
long valuation(const Integer& z, const Integer& p);
/// v_p(num) - v_p(den); q must be nonzero.
long valuation(const Rational& q, const Integer& p);

Integer pow(const Integer& base, unsigned long exp);
Rational pow(const Rational& base, long exp);

Integer lcm(const Integer& a, const Integer& b);

bool is_probable_prime(const Integer& n);
Integer next_prime(const Integer& n);

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

/// Reduction of a p-integral rational modulo m; throws when the denominator
/// is not invertible modulo m.
Integer mod_reduce(const Rational& q, const Integer& m);

} // namespace piqlab::numeric
