#pragma once

#include "piqlab/poly/polynomial.hpp"

#include <utility>
#include <vector>

namespace piqlab::poly {

template <class K>
struct SquarefreeFactor {
    Polynomial<K> factor;  // monic, squarefree
    int exponent;
};

/// Yun's algorithm (characteristic zero). P = lc(P) * prod factor^exponent with
/// pairwise coprime monic squarefree factors, listed by increasing exponent.
template <class K>
std::vector<SquarefreeFactor<K>> squarefree_decomposition(const Polynomial<K>& P)
{
    if (P.is_zero()) throw std::invalid_argument("squarefree decomposition of zero");
    std::vector<SquarefreeFactor<K>> out;
    if (P.degree() == 0) return out;
    Polynomial<K> f = P.monic();
    Polynomial<K> fp = f.derivative();
    Polynomial<K> a = gcd(f, fp);
    Polynomial<K> b = f.exact_div(a);
    Polynomial<K> c = fp.exact_div(a);
    Polynomial<K> d = c - b.derivative();
    int k = 1;
    while (b.degree() > 0) {
        Polynomial<K> g = gcd(b, d);
        if (g.degree() > 0) out.push_back({g, k});
        b = b.exact_div(g);
        c = d.exact_div(g);
        d = c - b.derivative();
        ++k;
    }
    return out;
}

/// Product of the distinct monic irreducible factors of P.
template <class K>
Polynomial<K> squarefree_part(const Polynomial<K>& P)
{
    Polynomial<K> out(K(1));
    for (const auto& sf : squarefree_decomposition(P)) out *= sf.factor;
    return out;
}

} // namespace piqlab::poly
