#include "piqlab/numeric/padic.hpp"

#include "piqlab/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace piqlab::numeric {

namespace {

Integer ppow(const Integer& p, long k)
{
    return pow(p, static_cast<unsigned long>(std::max(0L, k)));
}

Integer mod_positive(const Integer& a, const Integer& m)
{
    Integer r = a % m;
    if (r < 0) r += m;
    return r;
}

Integer inverse_mod(const Integer& a, const Integer& m)
{
    Integer inv;
    if (mpz_invert(inv.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
        throw std::domain_error("not invertible modulo " + m.get_str());
    }
    return inv;
}

} // namespace

PadicNumber PadicNumber::zero(const Integer& p)
{
    PadicNumber x;
    x.p_ = p;
    return x;
}

PadicNumber PadicNumber::approximate_zero(const Integer& p, long valuation_bound)
{
    PadicNumber x;
    x.p_ = p;
    x.exact_zero_ = false;
    x.valuation_ = valuation_bound;
    x.unit_ = 0;
    x.precision_ = 0;
    return x;
}

PadicNumber PadicNumber::from_parts(const Integer& p, long valuation, const Integer& unit, long precision)
{
    if (precision <= 0) return approximate_zero(p, valuation);
    Integer mod = ppow(p, precision);
    Integer u = mod_positive(unit, mod);
    if (u % p == 0) {
        if (u == 0) return approximate_zero(p, valuation + precision);
        long k = numeric::valuation(u, p);
        return from_parts(p, valuation + k, Integer(u / ppow(p, k)), precision - k);
    }
    PadicNumber x;
    x.p_ = p;
    x.exact_zero_ = false;
    x.valuation_ = valuation;
    x.unit_ = std::move(u);
    x.precision_ = precision;
    return x;
}

PadicNumber PadicNumber::from_rational(const Rational& q, const Integer& p, long precision)
{
    if (p < 2) throw std::invalid_argument("p-adic prime must be >= 2");
    if (precision < 1) throw std::invalid_argument("p-adic precision must be >= 1");
    if (q == 0) return zero(p);
    long v = numeric::valuation(q, p);
    Integer num = q.get_num();
    Integer den = q.get_den();
    if (v > 0) {
        num /= ppow(p, v);
    } else if (v < 0) {
        den /= ppow(p, -v);
    }
    Integer mod = ppow(p, precision);
    Integer unit = mod_positive(Integer(num * inverse_mod(den, mod)), mod);
    PadicNumber x;
    x.p_ = p;
    x.exact_zero_ = false;
    x.valuation_ = v;
    x.unit_ = std::move(unit);
    x.precision_ = precision;
    return x;
}

std::optional<long> PadicNumber::valuation() const
{
    if (exact_zero_) return std::nullopt;
    if (precision_ <= 0) {
        throw PrecisionLoss("valuation of a p-adic number indistinguishable from zero (O(" +
                            p_.get_str() + "^" + std::to_string(valuation_) + "))");
    }
    return valuation_;
}

long PadicNumber::valuation_bound() const
{
    return exact_zero_ ? kInfinity : valuation_;
}

long PadicNumber::absolute_precision() const
{
    return exact_zero_ ? kInfinity : valuation_ + precision_;
}

void PadicNumber::check_prime(const PadicNumber& o) const
{
    if (p_ != o.p_) throw std::invalid_argument("mixing p-adic numbers over different primes");
}

PadicNumber PadicNumber::operator-() const
{
    if (!is_known_nonzero()) return *this;
    PadicNumber r = *this;
    Integer mod = ppow(p_, precision_);
    r.unit_ = mod_positive(Integer(-unit_), mod);
    return r;
}

PadicNumber& PadicNumber::operator+=(const PadicNumber& o)
{
    check_prime(o);
    if (o.exact_zero_) return *this;
    if (exact_zero_) return *this = o;
    long abs_prec = std::min(absolute_precision(), o.absolute_precision());
    long base = std::min(valuation_, o.valuation_);
    long digits = abs_prec - base;
    if (digits <= 0) return *this = approximate_zero(p_, abs_prec);
    Integer mod = ppow(p_, digits);
    Integer sum = 0;
    if (is_known_nonzero()) sum += unit_ * ppow(p_, valuation_ - base);
    if (o.is_known_nonzero()) sum += o.unit_ * ppow(p_, o.valuation_ - base);
    sum = mod_positive(sum, mod);
    if (sum == 0) return *this = approximate_zero(p_, abs_prec);
    return *this = from_parts(p_, base, sum, digits);
}

PadicNumber& PadicNumber::operator-=(const PadicNumber& o) { return *this += -o; }

PadicNumber& PadicNumber::operator*=(const PadicNumber& o)
{
    check_prime(o);
    if (exact_zero_ || o.exact_zero_) return *this = zero(p_);
    long v = valuation_ + o.valuation_;
    if (!is_known_nonzero() || !o.is_known_nonzero()) return *this = approximate_zero(p_, v);
    long prec = std::min(precision_, o.precision_);
    Integer mod = ppow(p_, prec);
    valuation_ = v;
    unit_ = mod_positive(Integer(unit_ * o.unit_), mod);
    precision_ = prec;
    return *this;
}

PadicNumber PadicNumber::inverse() const
{
    if (exact_zero_) throw std::domain_error("inverse of exact p-adic zero");
    if (!is_known_nonzero()) throw PrecisionLoss("inverse of a p-adic number indistinguishable from zero");
    Integer mod = ppow(p_, precision_);
    PadicNumber r = *this;
    r.valuation_ = -valuation_;
    r.unit_ = inverse_mod(unit_, mod);
    return r;
}

PadicNumber& PadicNumber::operator/=(const PadicNumber& o) { return *this *= o.inverse(); }

PadicNumber PadicNumber::pow(long exp) const
{
    if (exp < 0) return inverse().pow(-exp);
    if (exp == 0) return from_rational(1, p_, is_known_nonzero() ? precision_ : 1);
    PadicNumber result = *this;
    PadicNumber base = *this;
    --exp;
    while (exp > 0) {
        if (exp & 1) result *= base;
        exp >>= 1;
        if (exp > 0) base *= base;
    }
    return result;
}

Integer PadicNumber::residue(long k) const
{
    if (k <= 0) return 0;
    if (exact_zero_) return 0;
    if (absolute_precision() < k) {
        throw PrecisionLoss("residue mod p^" + std::to_string(k) + " needs more known digits");
    }
    if (valuation_ >= k) return 0;
    if (valuation_ < 0) throw std::domain_error("residue of a non-integral p-adic number");
    Integer mod = ppow(p_, k);
    return mod_positive(Integer(unit_ * ppow(p_, valuation_)), mod);
}

bool PadicNumber::agrees_with(const PadicNumber& o) const
{
    check_prime(o);
    PadicNumber diff = *this - o;
    return diff.is_indistinguishable_from_zero();
}

std::string PadicNumber::to_string() const
{
    if (exact_zero_) return "0";
    std::string base = p_.get_str();
    if (!is_known_nonzero()) return "O(" + base + "^" + std::to_string(valuation_) + ")";
    return base + "^" + std::to_string(valuation_) + "*" + unit_.get_str() + " + O(" + base + "^" +
           std::to_string(absolute_precision()) + ")";
}

PadicNumber operator+(PadicNumber a, const PadicNumber& b) { return a += b; }
PadicNumber operator-(PadicNumber a, const PadicNumber& b) { return a -= b; }
PadicNumber operator*(PadicNumber a, const PadicNumber& b) { return a *= b; }
PadicNumber operator/(PadicNumber a, const PadicNumber& b) { return a /= b; }

PadicNumber teichmuller(const Integer& a, const Integer& p, long precision)
{
    if (a % p == 0) throw std::invalid_argument("Teichmueller lift of a non-unit residue");
    Integer mod = ppow(p, precision);
    Integer x = mod_positive(a, p);
    // x <- x^p converges to the root of unity in the residue class
    for (long k = 0; k < precision + 1; ++k) {
        Integer next;
        mpz_powm(next.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t(), mod.get_mpz_t());
        if (next == x) break;
        x = next;
    }
    return PadicNumber::from_parts(p, 0, x, precision);
}

std::optional<PadicNumber> nth_root_padic(const PadicNumber& x, long n)
{
    if (n < 1) throw std::invalid_argument("root order must be positive");
    if (x.is_exact_zero()) throw std::domain_error("n-th root of zero requested");
    long v = *x.valuation();
    if (v % n != 0) return std::nullopt;
    const Integer& p = x.prime();
    long e = numeric::valuation(Integer(n), p);
    long prec = x.precision();
    if (prec <= 2 * e) throw PrecisionLoss("not enough digits to decide an n-th root");

    // seed modulo p^(2e+1); brute force over the (small) residue ring
    long seed_digits = 2 * e + 1;
    Integer seed_mod = ppow(p, seed_digits);
    if (seed_mod > 2000000) throw PrecisionLoss("residue ring too large for the root seed search");
    Integer target = x.unit() % seed_mod;
    std::optional<Integer> seed;
    for (Integer y = 1; y < seed_mod; ++y) {
        if (y % p == 0) continue;
        Integer yn;
        mpz_powm_ui(yn.get_mpz_t(), y.get_mpz_t(), static_cast<unsigned long>(n), seed_mod.get_mpz_t());
        if (yn == target) {
            seed = y;
            break;
        }
    }
    if (!seed) return std::nullopt;

    // Newton iteration y <- y - (y^n - u) / (n y^(n-1)) with e digits of slack
    long work = prec + 2 * e;
    Integer mod = ppow(p, work);
    Integer pe = ppow(p, e);
    Integer n_unit = Integer(n) / pe;
    Integer u = x.unit();
    Integer y = *seed;
    for (int iter = 0; iter < 200; ++iter) {
        Integer yn1;
        mpz_powm_ui(yn1.get_mpz_t(), y.get_mpz_t(), static_cast<unsigned long>(n - 1), mod.get_mpz_t());
        Integer fy = mod_positive(Integer(yn1 * y - u), mod);
        if (fy % ppow(p, prec + e) == 0) break;
        // fy is divisible by p^(2e+1) at least; the division by p^e is exact
        Integer step = fy / pe;
        Integer denom = mod_positive(Integer(n_unit * yn1), mod);
        step = mod_positive(Integer(step * inverse_mod(denom, mod)), mod);
        y = mod_positive(Integer(y - step), mod);
    }
    PadicNumber root = PadicNumber::from_parts(p, v / n, y, prec - e);
    if (!root.pow(n).agrees_with(x)) return std::nullopt;
    return root;
}

} // namespace piqlab::numeric
