#include "piqlab/dynamics/reduction.hpp"

#include "piqlab/errors.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace piqlab::dynamics {

namespace {

long mod(const Integer& z, long p)
{
    Integer r;
    mpz_fdiv_r_ui(r.get_mpz_t(), z.get_mpz_t(), static_cast<unsigned long>(p));
    return r.get_si();
}

long inverse_mod(long a, long p)
{
    Integer r;
    Integer A(a), P(p);
    if (mpz_invert(r.get_mpz_t(), A.get_mpz_t(), P.get_mpz_t()) == 0) throw std::domain_error("not invertible mod p");
    return r.get_si();
}

long horner_mod(const std::vector<long>& c, long a, long b, long p)
{
    std::size_t n = c.size();
    long acc = c[n - 1];
    long bpow = b % p;
    for (std::size_t k = n - 1; k-- > 0;) {
        acc = static_cast<long>((static_cast<__int128>(acc) * a + static_cast<__int128>(c[k]) * bpow) % p);
        if (k > 0) bpow = static_cast<long>(static_cast<__int128>(bpow) * b % p);
    }
    return acc;
}

std::vector<long> residues(const std::vector<GaussianInteger>& c, long p)
{
    std::vector<long> out;
    for (const auto& z : c) out.push_back(mod(z.re, p));
    return out;
}

// numerator and denominator of f in the disc coordinate around xi
std::pair<poly::QPoly, poly::QPoly> chart(const RationalMap& f, long xi, long p, long& center)
{
    auto real = [](const std::vector<GaussianInteger>& c) {
        std::vector<Rational> out;
        for (const auto& z : c) out.emplace_back(z.re);
        return out;
    };
    std::vector<Rational> a = real(f.coeffs0());
    std::vector<Rational> b = real(f.coeffs1());
    if (xi == p) {
        // 1/f(1/w): numerator F1(1, w), denominator F0(1, w)
        std::reverse(a.begin(), a.end());
        std::reverse(b.begin(), b.end());
        center = 0;
        return {poly::QPoly(b), poly::QPoly(a)};
    }
    center = xi;
    poly::QPoly shift(std::vector<Rational>{Rational(xi), Rational(1)});
    return {poly::QPoly(a).compose(shift), poly::QPoly(b).compose(shift)};
}

} // namespace

FiniteMap FiniteMap::identity(long p)
{
    FiniteMap f;
    f.p = p;
    for (long x = 0; x <= p; ++x) f.table.push_back(x);
    return f;
}

std::vector<long> FiniteMap::fixed_points() const
{
    std::vector<long> out;
    for (long x = 0; x < size(); ++x) {
        if ((*this)(x) == x) out.push_back(x);
    }
    return out;
}

std::string FiniteMap::to_string() const
{
    auto name = [&](long x) { return x == p ? std::string("inf") : std::to_string(x); };
    std::string out;
    for (long x = 0; x < size(); ++x) {
        if (!out.empty()) out += ", ";
        out += name(x) + "->" + name((*this)(x));
    }
    return out;
}

FiniteMap compose(const FiniteMap& f, const FiniteMap& g)
{
    if (f.p != g.p) throw std::invalid_argument("composing finite maps over different primes");
    FiniteMap out;
    out.p = f.p;
    for (long x = 0; x < g.size(); ++x) out.table.push_back(f(g(x)));
    return out;
}

long reduce_point(const ProjPoint& P, long p)
{
    if (!P.is_rational()) throw std::invalid_argument("reduction mod p needs a rational point");
    long u = mod(P.x0.re, p), v = mod(P.x1.re, p);
    if (v == 0) return p;
    return static_cast<long>(static_cast<__int128>(u) * inverse_mod(v, p) % p);
}

std::string bad_reduction_reason(const RationalMap& f, long p)
{
    if (!f.is_rational()) return "map is not defined over Q";
    if (p < 2 || !numeric::is_probable_prime(Integer(p))) return std::to_string(p) + " is not prime";
    if (p == 2) return "p = 2 is excluded";
    GaussianRational res = resultant(f);
    if (mod(Integer(res.re.get_num()), p) == 0) return "resultant is divisible by " + std::to_string(p);
    return "";
}

long choose_good_prime(const std::vector<RationalMap>& maps, long p_min, long p_limit)
{
    std::vector<Integer> resultants;
    std::vector<int> indices;
    for (const auto& f : maps) {
        if (!f.is_rational()) throw std::invalid_argument("good primes are chosen for maps over Q");
        resultants.push_back(Integer(resultant(f).re.get_num()));
        for (int e : ramification_multiset(f)) indices.push_back(e);
    }
    Integer p = std::max(p_min, 3L) - 1;
    while (true) {
        p = numeric::next_prime(p);
        if (p > p_limit) {
            throw SearchExhausted("no good prime in [" + std::to_string(p_min) + ", " + std::to_string(p_limit) + "]");
        }
        long q = p.get_si();
        bool good = std::none_of(resultants.begin(), resultants.end(), [&](const Integer& r) { return mod(r, q) == 0; });
        good = good && std::none_of(indices.begin(), indices.end(), [&](int e) { return e % q == 0; });
        if (good) return q;
    }
}

FiniteMap reduce_mod_p(const RationalMap& f, long p)
{
    std::string why = bad_reduction_reason(f, p);
    if (!why.empty()) throw BadReduction(why);
    std::vector<long> a = residues(f.coeffs0(), p), b = residues(f.coeffs1(), p);
    FiniteMap out;
    out.p = p;
    for (long x = 0; x <= p; ++x) {
        long u = x == p ? 1 : x;
        long v = x == p ? 0 : 1;
        long F0 = horner_mod(a, u, v, p), F1 = horner_mod(b, u, v, p);
        if (F1 == 0) {
            out.table.push_back(p);
        } else {
            out.table.push_back(static_cast<long>(static_cast<__int128>(F0) * inverse_mod(F1, p) % p));
        }
    }
    return out;
}

uniformize::Germ local_germ(const RationalMap& f, long xi, long p, int D, long precision)
{
    FiniteMap fbar = reduce_mod_p(f, p);
    if (xi < 0 || xi > p) throw std::invalid_argument("residue class out of range");
    if (fbar(xi) != xi) throw std::invalid_argument("xi is not fixed by the reduction");
    if (D < 1) throw std::invalid_argument("truncation degree must be >= 1");
    long c = 0;
    auto [N, M] = chart(f, xi, p, c);
    Rational m0 = M.coeff(0);
    if (m0 == 0 || numeric::valuation(m0, Integer(p)) != 0) {
        throw DenominatorNotUnit("denominator is not a unit on the residue disc");
    }
    // power-series quotient N/M up to degree D
    std::vector<Rational> q(static_cast<std::size_t>(D) + 1, Rational(0));
    Rational inv = 1 / m0;
    for (int k = 0; k <= D; ++k) {
        Rational acc = N.coeff(k);
        for (int j = 0; j < k; ++j) acc -= q[static_cast<std::size_t>(j)] * M.coeff(k - j);
        q[static_cast<std::size_t>(k)] = acc * inv;
    }
    q[0] -= c;
    std::map<series::MultiIndex, Rational> terms;
    for (int k = 0; k <= D; ++k) {
        if (q[static_cast<std::size_t>(k)] != 0) terms[{k}] = q[static_cast<std::size_t>(k)];
    }
    series::PolydiscSeries F = series::PolydiscSeries::from_rational_terms(Integer(p), 1, D, terms, precision);
    // p-integral coefficients bound every omitted term by p^-(D+1) on |z| <= 1/p
    F.add_tail(D + 1, series::Radius::uniform(1, 1));
    return uniformize::Germ(std::move(F));
}

Rational chart_value(const RationalMap& f, long xi, long p, const Rational& z)
{
    long c = 0;
    auto [N, M] = chart(f, xi, p, c);
    Rational den = M(z);
    if (den == 0) throw DenominatorNotUnit("chart denominator vanishes");
    return N(z) / den - c;
}

} // namespace piqlab::dynamics
