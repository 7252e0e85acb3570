#pragma once

#include "piqlab/dynamics/projective.hpp"
#include "piqlab/uniformize/uniformize.hpp"

#include <string>
#include <vector>

namespace piqlab::dynamics {

/// Self-map of P^1(F_p). Index a in [0, p) is the point (a : 1); index p is
/// the point at infinity.
struct FiniteMap {
    long p = 2;
    std::vector<long> table;

    static FiniteMap identity(long p);
    long size() const { return p + 1; }
    long operator()(long x) const { return table.at(static_cast<std::size_t>(x)); }
    std::vector<long> fixed_points() const;
    std::string to_string() const;

    friend bool operator==(const FiniteMap& a, const FiniteMap& b) { return a.p == b.p && a.table == b.table; }
};

/// (f o g) on P^1(F_p).
FiniteMap compose(const FiniteMap& f, const FiniteMap& g);

/// Index of the reduction of a rational point modulo p.
long reduce_point(const ProjPoint& P, long p);

/// Why p fails the good-reduction test, or an empty string.
std::string bad_reduction_reason(const RationalMap& f, long p);

/// Smallest prime p >= p_min that is odd, keeps Res(F0, F1) a p-unit for
/// every map, and divides no ramification index. Throws SearchExhausted past
/// p_limit.
long choose_good_prime(const std::vector<RationalMap>& maps, long p_min = 2, long p_limit = 100000);

/// Induced self-map of P^1(F_p); BadReduction when p is not a good prime.
FiniteMap reduce_mod_p(const RationalMap& f, long p);

/// Expansion of f in the residue-disc coordinate around the fixed point xi of
/// the reduction (chart-swapped at infinity): F(z) = f(c + z) - c with
/// stored terms up to degree D and tail exponent D + 1 on |z| <= 1/p.
uniformize::Germ local_germ(const RationalMap& f, long xi, long p, int D, long precision);

/// The chart map of local_germ: the value of f in the disc coordinate at the
/// disc point z (exact rational arithmetic, z in pZ).
Rational chart_value(const RationalMap& f, long xi, long p, const Rational& z);

} // namespace piqlab::dynamics
