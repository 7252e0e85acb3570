#include "piqlab/dynamics/sym2.hpp"

#include <stdexcept>
#include <vector>

namespace piqlab::dynamics {

namespace {

void check_field(const QuadraticNumber& x, const QuadraticNumber& y)
{
    if (x.b != 0 && y.b != 0 && x.D != y.D) throw std::invalid_argument("quadratic numbers from different fields");
}

Integer field_of(const QuadraticNumber& x, const QuadraticNumber& y) { return x.b != 0 ? x.D : y.D; }

QuadraticNumber lift(const Rational& q, const Integer& D) { return {q, 0, D}; }

// form value at (x : 1) in Q(sqrt(D))
QuadraticNumber form_value(const std::vector<Rational>& c, const QuadraticNumber& x)
{
    QuadraticNumber acc = lift(0, x.D);
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + lift(c[k], x.D);
    return acc;
}

Poly3 poly_mul(const Poly3& f, const Poly3& g)
{
    Poly3 out;
    for (const auto& [m1, c1] : f) {
        for (const auto& [m2, c2] : g) {
            Monomial3 m{m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2]};
            out[m] += c1 * c2;
        }
    }
    for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

Poly3 poly_add(Poly3 f, const Poly3& g, const Rational& scale)
{
    for (const auto& [m, c] : g) f[m] += scale * c;
    for (auto it = f.begin(); it != f.end();) it = it->second == 0 ? f.erase(it) : std::next(it);
    return f;
}

Poly3 monomial(int e0, int e1, int e2, const Rational& c = 1) { return Poly3{{Monomial3{e0, e1, e2}, c}}; }

bool perfect_square(const Integer& n, Integer& root)
{
    if (n < 0) return false;
    if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return false;
    mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
    return true;
}

} // namespace

QuadraticNumber QuadraticNumber::inverse() const
{
    if (is_zero()) throw std::domain_error("inverse of zero");
    Rational n = a * a - b * b * D;
    return {a / n, -b / n, D};
}

std::string QuadraticNumber::to_string() const
{
    if (b == 0) return a.get_str();
    return a.get_str() + (b < 0 ? " - " : " + ") + Rational(abs(b)).get_str() + "*sqrt(" + D.get_str() + ")";
}

QuadraticNumber operator+(const QuadraticNumber& x, const QuadraticNumber& y)
{
    check_field(x, y);
    return {x.a + y.a, x.b + y.b, field_of(x, y)};
}

QuadraticNumber operator-(const QuadraticNumber& x, const QuadraticNumber& y)
{
    check_field(x, y);
    return {x.a - y.a, x.b - y.b, field_of(x, y)};
}

QuadraticNumber operator*(const QuadraticNumber& x, const QuadraticNumber& y)
{
    check_field(x, y);
    Integer D = field_of(x, y);
    return {x.a * y.a + x.b * y.b * D, x.a * y.b + x.b * y.a, D};
}

QuadraticNumber operator/(const QuadraticNumber& x, const QuadraticNumber& y)
{
    check_field(x, y);
    QuadraticNumber yy = y;
    if (yy.b == 0) yy.D = x.D;
    return x * yy.inverse();
}

QuadraticPoint map_quadratic(const RationalMap& f, const QuadraticPoint& x)
{
    if (!f.is_rational()) throw std::invalid_argument("descent needs a map over Q");
    std::vector<Rational> a, b;
    for (const auto& z : f.coeffs0()) a.emplace_back(z.re);
    for (const auto& z : f.coeffs1()) b.emplace_back(z.re);
    if (!x) {
        // leading coefficients give the value at infinity
        const Rational& top0 = a.back();
        const Rational& top1 = b.back();
        if (top1 == 0) return std::nullopt;
        return lift(top0 / top1, -1);
    }
    QuadraticNumber num = form_value(a, *x);
    QuadraticNumber den = form_value(b, *x);
    if (den.is_zero()) return std::nullopt;
    QuadraticNumber out = num / den;
    out.D = x->D;
    return out;
}

P2Point P2Point::make(const std::array<Rational, 3>& coords)
{
    Integer den = 1;
    for (const auto& c : coords) den = numeric::lcm(den, Integer(c.get_den()));
    P2Point P;
    Integer g = 0;
    for (std::size_t k = 0; k < 3; ++k) {
        Rational scaled = coords[k] * den;
        P.u[k] = Integer(scaled.get_num());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), P.u[k].get_mpz_t());
    }
    if (g == 0) throw std::invalid_argument("(0 : 0 : 0) is not a point");
    int sign = 0;
    for (const auto& c : P.u) {
        if (c != 0) {
            sign = c > 0 ? 1 : -1;
            break;
        }
    }
    for (auto& c : P.u) c = c / g * sign;
    return P;
}

std::string P2Point::to_string() const
{
    return "(" + u[0].get_str() + " : " + u[1].get_str() + " : " + u[2].get_str() + ")";
}

P2Point descend(const QuadraticPoint& x)
{
    if (!x) return P2Point::make({0, 0, 1});
    const QuadraticNumber& v = *x;
    // t^2 - tr(x) t + N(x)
    return P2Point::make({1, -2 * v.a, v.a * v.a - v.b * v.b * v.D});
}

P2Point Sym2Map::operator()(const P2Point& q) const
{
    std::array<Rational, 3> out;
    for (std::size_t r = 0; r < 3; ++r) {
        Rational acc = 0;
        for (const auto& [m, c] : components[r]) {
            Rational term = c;
            for (std::size_t k = 0; k < 3; ++k) term *= numeric::pow(Rational(q.u[k]), m[k]);
            acc += term;
        }
        out[r] = acc;
    }
    return P2Point::make(out);
}

Sym2Map symmetric_square_descent(const RationalMap& f)
{
    if (!f.is_rational()) throw std::invalid_argument("descent needs a map over Q");
    int d = f.degree();
    std::vector<Rational> a, b;
    for (const auto& z : f.coeffs0()) a.emplace_back(z.re);
    for (const auto& z : f.coeffs1()) b.emplace_back(z.re);

    // u0^n times the power sums of the roots: P_0 = 2, P_1 = -u1,
    // P_n = -u1 P_(n-1) - u0 u2 P_(n-2)
    std::vector<Poly3> P{monomial(0, 0, 0, 2), monomial(0, 1, 0, -1)};
    for (int n = 2; n <= d; ++n) {
        Poly3 next = poly_mul(monomial(0, 1, 0, -1), P[static_cast<std::size_t>(n - 1)]);
        next = poly_add(next, poly_mul(monomial(1, 0, 1), P[static_cast<std::size_t>(n - 2)]), -1);
        P.push_back(next);
    }
    // u0^d times the monomial symmetric function r1^j r2^k + r1^k r2^j (j < k)
    // or (r1 r2)^j (j = k)
    auto T = [&](int j, int k) {
        if (j == k) return monomial(d - j, 0, j);
        return poly_mul(monomial(d - k, 0, j), P[static_cast<std::size_t>(k - j)]);
    };

    // c_j(y) = y1 a_j - y0 b_j; the image quadratic is sum_{j<=k} c_j c_k T_jk
    Sym2Map out;
    out.degree = d;
    for (int j = 0; j <= d; ++j) {
        for (int k = j; k <= d; ++k) {
            const std::size_t J = static_cast<std::size_t>(j), K = static_cast<std::size_t>(k);
            Rational y00 = b[J] * b[K];
            Rational y01 = -(a[J] * b[K] + a[K] * b[J]);
            Rational y11 = a[J] * a[K];
            if (y00 == 0 && y01 == 0 && y11 == 0) continue;
            Poly3 t = T(j, k);
            out.components[0] = poly_add(out.components[0], t, y00);
            out.components[1] = poly_add(out.components[1], t, y01);
            out.components[2] = poly_add(out.components[2], t, y11);
        }
    }
    return out;
}

bool lies_on(const poly::BinaryForm<Rational>& Y_form, const QuadraticPoint& x)
{
    const auto& c = Y_form.coefficients();
    if (!x) return c.back() == 0;
    return form_value(c, *x).is_zero();
}

bool sym2_contains(const poly::BinaryForm<Rational>& Y_form, const P2Point& q)
{
    Rational u0(q.u[0]), u1(q.u[1]), u2(q.u[2]);
    std::vector<QuadraticPoint> roots;
    if (u0 == 0) {
        // a root at infinity and (-u2 : u1)
        roots.push_back(std::nullopt);
        if (u1 == 0) {
            roots.push_back(std::nullopt);
        } else {
            roots.push_back(lift(-u2 / u1, -1));
        }
    } else {
        Rational disc_q = u1 * u1 - 4 * u0 * u2;
        Integer disc(disc_q.get_num());
        Integer root;
        if (perfect_square(disc, root)) {
            roots.push_back(lift((-u1 + Rational(root)) / (2 * u0), -1));
            roots.push_back(lift((-u1 - Rational(root)) / (2 * u0), -1));
        } else {
            QuadraticNumber r{-u1 / (2 * u0), Rational(1) / (2 * u0), disc};
            roots.push_back(r);
            roots.push_back(r.conj());
        }
    }
    for (const auto& r : roots) {
        if (!lies_on(Y_form, r)) return false;
    }
    return true;
}

} // namespace piqlab::dynamics
