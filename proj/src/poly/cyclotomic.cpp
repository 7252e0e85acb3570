#include "piqlab/poly/cyclotomic.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace piqlab::poly {

long euler_phi(long n)
{
    if (n < 1) throw std::invalid_argument("euler_phi needs n >= 1");
    long result = n;
    long m = n;
    for (long q = 2; q * q <= m; ++q) {
        if (m % q != 0) continue;
        while (m % q == 0) m /= q;
        result -= result / q;
    }
    if (m > 1) result -= result / m;
    return result;
}

std::vector<long> orders_with_phi_at_most(long bound)
{
    std::vector<long> out;
    if (bound < 1) return out;
    long limit = bound * bound + bound;
    for (long n = 1; n <= limit; ++n) {
        if (euler_phi(n) <= bound) out.push_back(n);
    }
    return out;
}

namespace {

QPoly t_pow_minus_one(long n)
{
    QPoly p = QPoly::monomial(Rational(1), static_cast<int>(n));
    return p - QPoly(Rational(1));
}

} // namespace

QPoly cyclotomic_polynomial(long n)
{
    if (n < 1) throw std::invalid_argument("cyclotomic index must be >= 1");
    static std::mutex mu;
    static std::map<long, QPoly> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    QPoly result = t_pow_minus_one(n);
    for (long d = 1; d < n; ++d) {
        if (n % d == 0) result = result.exact_div(cyclotomic_polynomial(d));
    }
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(n, result);
    return result;
}

CyclotomicSplit cyclotomic_part(const QPoly& P)
{
    if (P.is_zero() || P.leading() != 1) {
        throw std::invalid_argument("cyclotomic_part needs a monic polynomial");
    }
    QPoly C(Rational(1));
    QPoly Q = P;
    for (long n : orders_with_phi_at_most(P.degree())) {
        QPoly tn = t_pow_minus_one(n);
        while (Q.degree() > 0) {
            QPoly g = gcd(Q, tn);
            if (g.degree() <= 0) break;
            C *= g;
            Q = Q.exact_div(g);
        }
    }
    return {C, Q};
}

bool is_cyclotomic_free(const QPoly& Q)
{
    if (Q.is_zero()) return false;
    for (long n : orders_with_phi_at_most(Q.degree())) {
        if (gcd(Q, t_pow_minus_one(n)).degree() > 0) return false;
    }
    return true;
}

std::vector<long> cyclotomic_orders(const QPoly& P)
{
    std::vector<long> out;
    if (P.degree() <= 0) return out;
    for (long n : orders_with_phi_at_most(P.degree())) {
        if (euler_phi(n) > P.degree()) continue;
        if (P.divisible_by(cyclotomic_polynomial(n))) out.push_back(n);
    }
    return out;
}

} // namespace piqlab::poly
