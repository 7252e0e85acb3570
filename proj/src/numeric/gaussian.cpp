#include "piqlab/numeric/gaussian.hpp"

#include "piqlab/errors.hpp"

#include <stdexcept>

namespace piqlab::numeric {

GaussianInteger& GaussianInteger::operator+=(const GaussianInteger& o)
{
    re += o.re;
    im += o.im;
    return *this;
}

GaussianInteger& GaussianInteger::operator-=(const GaussianInteger& o)
{
    re -= o.re;
    im -= o.im;
    return *this;
}

GaussianInteger& GaussianInteger::operator*=(const GaussianInteger& o)
{
    *this = *this * o;
    return *this;
}

GaussianInteger operator+(GaussianInteger a, const GaussianInteger& b) { return a += b; }
GaussianInteger operator-(GaussianInteger a, const GaussianInteger& b) { return a -= b; }
GaussianInteger operator-(const GaussianInteger& a) { return {-a.re, -a.im}; }

GaussianInteger operator*(const GaussianInteger& a, const GaussianInteger& b)
{
    if (a.im == 0 && b.im == 0) {
        return {Integer(a.re * b.re), Integer(0)};
    }
    // Three multiplications: (a+bi)(c+di) = (ac - bd) + ((a+b)(c+d) - ac - bd)i
    Integer ac = a.re * b.re;
    Integer bd = a.im * b.im;
    Integer cross = (a.re + a.im) * (b.re + b.im);
    return {Integer(ac - bd), Integer(cross - ac - bd)};
}

namespace {

// Nearest integer to num/den, den > 0.
Integer round_div(const Integer& num, const Integer& den)
{
    Integer twice = 2 * num + den;
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), twice.get_mpz_t(), Integer(2 * den).get_mpz_t());
    return q;
}

} // namespace

void divmod(const GaussianInteger& a, const GaussianInteger& b, GaussianInteger& q, GaussianInteger& r)
{
    if (b.is_zero()) {
        throw std::domain_error("Gaussian division by zero");
    }
    GaussianInteger num = a * b.conj();
    Integer n = b.norm();
    q = GaussianInteger(round_div(num.re, n), round_div(num.im, n));
    r = a - q * b;
}

GaussianInteger divexact(const GaussianInteger& a, const GaussianInteger& b)
{
    GaussianInteger q, r;
    divmod(a, b, q, r);
    if (!r.is_zero()) {
        throw NotDivisible("Gaussian integer does not divide exactly");
    }
    return q;
}

GaussianInteger gcd(GaussianInteger a, GaussianInteger b)
{
    if (a.is_real() && b.is_real()) {
        Integer g;
        mpz_gcd(g.get_mpz_t(), a.re.get_mpz_t(), b.re.get_mpz_t());
        return {g, 0};
    }
    while (!b.is_zero()) {
        GaussianInteger q, r;
        divmod(a, b, q, r);
        a = std::move(b);
        b = std::move(r);
    }
    return canonical_associate(a);
}

GaussianInteger canonical_unit(const GaussianInteger& z)
{
    if (z.is_zero()) return {1, 0};
    if (z.re > 0 && z.im >= 0) return {1, 0};
    if (z.re <= 0 && z.im > 0) return {0, -1};   // rotate by -i
    if (z.re < 0 && z.im <= 0) return {-1, 0};
    return {0, 1};                                // re >= 0, im < 0
}

GaussianInteger canonical_associate(const GaussianInteger& z)
{
    return canonical_unit(z) * z;
}

std::string to_string(const GaussianInteger& z)
{
    return to_string(GaussianRational(z));
}

GaussianRational GaussianRational::inverse() const
{
    if (is_zero()) {
        throw std::domain_error("inverse of zero in Q(i)");
    }
    Rational n = norm();
    return {Rational(re / n), Rational(-im / n)};
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o)
{
    re += o.re;
    im += o.im;
    return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o)
{
    re -= o.re;
    im -= o.im;
    return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o)
{
    if (im == 0 && o.im == 0) {
        re *= o.re;
        return *this;
    }
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o)
{
    if (o.im == 0) {
        if (o.re == 0) throw std::domain_error("division by zero in Q(i)");
        re /= o.re;
        im /= o.re;
        return *this;
    }
    return *this *= o.inverse();
}

GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
GaussianRational operator-(const GaussianRational& a) { return {Rational(-a.re), Rational(-a.im)}; }
GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }

GaussianRational pow(const GaussianRational& z, long exp)
{
    if (exp < 0) return pow(z.inverse(), -exp);
    GaussianRational result(1);
    GaussianRational base = z;
    while (exp > 0) {
        if (exp & 1) result *= base;
        exp >>= 1;
        if (exp > 0) base *= base;
    }
    return result;
}

Integer common_denominator(const GaussianRational& z)
{
    return lcm(Integer(z.re.get_den()), Integer(z.im.get_den()));
}

std::string to_string(const GaussianRational& z)
{
    if (z.im == 0) return z.re.get_str();
    std::string imag;
    if (z.im == 1) {
        imag = "i";
    } else if (z.im == -1) {
        imag = "-i";
    } else {
        imag = z.im.get_str() + "i";
    }
    if (z.re == 0) return imag;
    if (imag.front() != '-') imag = "+" + imag;
    return z.re.get_str() + imag;
}

GaussianRational parse_gaussian(std::string_view text)
{
    std::string s;
    for (char c : text) {
        if (c != ' ') s.push_back(c);
    }
    if (s.empty()) throw std::invalid_argument("empty Gaussian rational");
    if (s.back() != 'i') {
        return {parse_rational(s), 0};
    }
    s.pop_back();
    // split "a+b" / "a-b" at the last sign that is not leading
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if (s[k] == '+' || s[k] == '-') {
            split = k;
            break;
        }
    }
    std::string real_part = split == std::string::npos ? "" : s.substr(0, split);
    std::string imag_part = split == std::string::npos ? s : s.substr(split);
    Rational im;
    if (imag_part.empty() || imag_part == "+") {
        im = 1;
    } else if (imag_part == "-") {
        im = -1;
    } else {
        im = parse_rational(imag_part);
    }
    Rational re = real_part.empty() ? Rational(0) : parse_rational(real_part);
    return {re, im};
}

bool is_root_of_unity_gaussian(const GaussianRational& z)
{
    if (z.is_zero()) {
        throw std::domain_error("zero is not a unit");
    }
    if (z.im == 0) return z.re == 1 || z.re == -1;
    if (z.re == 0) return z.im == 1 || z.im == -1;
    return false;
}

} // namespace piqlab::numeric
