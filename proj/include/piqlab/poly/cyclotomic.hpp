#pragma once

#include "piqlab/poly/polynomial.hpp"

#include <vector>

namespace piqlab::poly {

long euler_phi(long n);

/// All n >= 1 with phi(n) <= bound, ascending. Uses phi(n) <= D  =>  n <= D^2 + D.
std::vector<long> orders_with_phi_at_most(long bound);

/// The n-th cyclotomic polynomial over Q.
QPoly cyclotomic_polynomial(long n);

struct CyclotomicSplit {
    QPoly cyclotomic;   // every irreducible factor is cyclotomic
    QPoly remainder;    // shares no root of unity
};

/// P = C * Q for monic P. The sweep runs over every n with phi(n) <= deg P and
/// divides out gcd(P, t^n - 1) until it is trivial.
CyclotomicSplit cyclotomic_part(const QPoly& P);

/// True iff gcd(Q, t^n - 1) = 1 for every n with phi(n) <= deg Q.
bool is_cyclotomic_free(const QPoly& Q);

/// The orders n of the cyclotomic factors Phi_n dividing P (P nonzero).
std::vector<long> cyclotomic_orders(const QPoly& P);

} // namespace piqlab::poly
