#include "piqlab/numeric/rational.hpp"

#include "piqlab/errors.hpp"

#include <stdexcept>

namespace piqlab::numeric {

Integer parse_integer(std::string_view text)
{
    std::string s(text);
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    while (!s.empty() && s.back() == ' ') s.pop_back();
    if (!s.empty() && s.front() == '+') s.erase(s.begin());
    Integer z;
    if (s.empty() || z.set_str(s, 10) != 0) {
        throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
    }
    return z;
}

Rational parse_rational(std::string_view text)
{
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(parse_integer(text));
    }
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0) {
        throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
}

std::string to_string(const Integer& z) { return z.get_str(); }

std::string to_string(const Rational& q) { return q.get_str(); }

long valuation(const Integer& z, const Integer& p)
{
    if (z == 0) {
        throw std::domain_error("valuation of zero");
    }
    Integer t = z;
    mp_bitcnt_t k = mpz_remove(t.get_mpz_t(), t.get_mpz_t(), p.get_mpz_t());
    return static_cast<long>(k);
}

long valuation(const Rational& q, const Integer& p)
{
    return valuation(Integer(q.get_num()), p) - valuation(Integer(q.get_den()), p);
}

Integer pow(const Integer& base, unsigned long exp)
{
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

Rational pow(const Rational& base, long exp)
{
    if (exp < 0) {
        if (base == 0) {
            throw std::domain_error("negative power of zero");
        }
        Rational inv = 1 / base;
        return pow(inv, -exp);
    }
    Rational r(pow(Integer(base.get_num()), static_cast<unsigned long>(exp)),
               pow(Integer(base.get_den()), static_cast<unsigned long>(exp)));
    r.canonicalize();
    return r;
}

Integer lcm(const Integer& a, const Integer& b)
{
    Integer r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

bool is_probable_prime(const Integer& n)
{
    return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

Integer next_prime(const Integer& n)
{
    Integer r;
    mpz_nextprime(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

Integer mod_reduce(const Rational& q, const Integer& m)
{
    Integer den = q.get_den();
    Integer inv;
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()) == 0) {
        throw BadReduction("denominator " + den.get_str() + " not invertible mod " + m.get_str());
    }
    Integer r = (Integer(q.get_num()) * inv) % m;
    if (r < 0) r += m;
    return r;
}

} // namespace piqlab::numeric
