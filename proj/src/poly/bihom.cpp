#include "piqlab/poly/bihom.hpp"

#include <stdexcept>
#include <vector>

namespace piqlab::poly {

using numeric::GaussianInteger;
using numeric::Integer;

BiHomPoly::BiHomPoly(int deg_x, int deg_y, std::map<Key, GaussianRational> terms)
    : a_(deg_x), b_(deg_y), terms_(std::move(terms))
{
    for (const auto& [key, c] : terms_) {
        if (key.first < 0 || key.first > a_ || key.second < 0 || key.second > b_) {
            throw std::invalid_argument("monomial outside the bidegree");
        }
    }
    trim();
}

BiHomPoly BiHomPoly::diagonal()
{
    BiHomPoly d(1, 1);
    d.add_term(0, 1, GaussianRational(1));   // x0 y1
    d.add_term(1, 0, GaussianRational(-1));  // x1 y0
    return d;
}

BiHomPoly BiHomPoly::outer(const BinaryForm<GaussianRational>& fx, const BinaryForm<GaussianRational>& fy)
{
    BiHomPoly out(fx.degree(), fy.degree());
    for (int kx = 0; kx <= fx.degree(); ++kx) {
        if (fx.coeff(kx).is_zero()) continue;
        for (int ky = 0; ky <= fy.degree(); ++ky) {
            if (fy.coeff(ky).is_zero()) continue;
            // coeff(k) multiplies x0^k x1^(d-k), i.e. key i = d - k
            out.add_term(fx.degree() - kx, fy.degree() - ky, fx.coeff(kx) * fy.coeff(ky));
        }
    }
    return out;
}

void BiHomPoly::add_term(int i, int j, const GaussianRational& c)
{
    if (i < 0 || i > a_ || j < 0 || j > b_) throw std::invalid_argument("monomial outside the bidegree");
    auto& slot = terms_[{i, j}];
    slot += c;
    if (slot.is_zero()) terms_.erase({i, j});
}

void BiHomPoly::trim()
{
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->second.is_zero()) {
            it = terms_.erase(it);
        } else {
            ++it;
        }
    }
}

BiHomPoly operator+(const BiHomPoly& p, const BiHomPoly& q)
{
    if (p.is_zero()) return q;
    if (q.is_zero()) return p;
    if (p.a_ != q.a_ || p.b_ != q.b_) throw std::invalid_argument("adding polynomials of different bidegree");
    BiHomPoly out = p;
    for (const auto& [key, c] : q.terms_) out.add_term(key.first, key.second, c);
    return out;
}

BiHomPoly operator-(const BiHomPoly& p, const BiHomPoly& q)
{
    return p + q * GaussianRational(-1);
}

BiHomPoly operator*(const BiHomPoly& p, const BiHomPoly& q)
{
    BiHomPoly out(p.a_ + q.a_, p.b_ + q.b_);
    for (const auto& [k1, c1] : p.terms_) {
        for (const auto& [k2, c2] : q.terms_) {
            out.add_term(k1.first + k2.first, k1.second + k2.second, c1 * c2);
        }
    }
    return out;
}

BiHomPoly operator*(const BiHomPoly& p, const GaussianRational& s)
{
    if (s.is_zero()) return BiHomPoly(p.a_, p.b_);
    BiHomPoly out = p;
    for (auto& [key, c] : out.terms_) c *= s;
    return out;
}

BiHomPoly BiHomPoly::normalized() const
{
    if (is_zero()) return *this;
    BiHomPoly out = *this * terms_.rbegin()->second.inverse();
    Integer den = 1;
    for (const auto& [key, c] : out.terms_) den = numeric::lcm(den, numeric::common_denominator(c));
    Integer content = 0;
    for (auto& [key, c] : out.terms_) {
        c *= GaussianRational(den);
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), Integer(c.re.get_num()).get_mpz_t());
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), Integer(c.im.get_num()).get_mpz_t());
    }
    if (content > 1) {
        GaussianRational inv(numeric::Rational(1, 1) / numeric::Rational(content));
        for (auto& [key, c] : out.terms_) c *= inv;
    }
    return out;
}

BiHomPoly BiHomPoly::substitute(const BinaryForm<GaussianRational>& F0, const BinaryForm<GaussianRational>& F1,
                                const BinaryForm<GaussianRational>& G0,
                                const BinaryForm<GaussianRational>& G1) const
{
    if (F0.degree() != F1.degree() || G0.degree() != G1.degree()) {
        throw std::invalid_argument("substitution forms must share a degree per factor");
    }
    std::vector<BinaryForm<GaussianRational>> f0p{BinaryForm<GaussianRational>::constant(1)}, f1p = f0p,
        g0p = f0p, g1p = f0p;
    for (int k = 1; k <= a_; ++k) {
        f0p.push_back(f0p.back() * F0);
        f1p.push_back(f1p.back() * F1);
    }
    for (int k = 1; k <= b_; ++k) {
        g0p.push_back(g0p.back() * G0);
        g1p.push_back(g1p.back() * G1);
    }
    BiHomPoly out(a_ * F0.degree(), b_ * G0.degree());
    for (const auto& [key, c] : terms_) {
        auto [i, j] = key;
        auto fx = f0p[static_cast<std::size_t>(a_ - i)] * f1p[static_cast<std::size_t>(i)];
        auto fy = g0p[static_cast<std::size_t>(b_ - j)] * g1p[static_cast<std::size_t>(j)];
        out = out + outer(fx, fy) * c;
    }
    return out;
}

GaussianRational BiHomPoly::evaluate(const GaussianRational& x0, const GaussianRational& x1,
                                     const GaussianRational& y0, const GaussianRational& y1) const
{
    GaussianRational acc(0);
    for (const auto& [key, c] : terms_) {
        auto [i, j] = key;
        acc += c * numeric::pow(x0, a_ - i) * numeric::pow(x1, i) * numeric::pow(y0, b_ - j) *
               numeric::pow(y1, j);
    }
    return acc;
}

namespace {

GaussianInteger ipow(const GaussianInteger& z, int e)
{
    GaussianInteger r(1);
    for (int k = 0; k < e; ++k) r *= z;
    return r;
}

} // namespace

GaussianInteger BiHomPoly::evaluate(const GaussianInteger& x0, const GaussianInteger& x1, const GaussianInteger& y0,
                                    const GaussianInteger& y1) const
{
    // value scaled by the common denominator of the coefficients
    Integer den = 1;
    for (const auto& [key, c] : terms_) den = numeric::lcm(den, numeric::common_denominator(c));
    GaussianInteger acc(0);
    for (const auto& [key, c] : terms_) {
        auto [i, j] = key;
        GaussianRational scaled = c * GaussianRational(den);
        GaussianInteger ci(Integer(scaled.re.get_num()), Integer(scaled.im.get_num()));
        acc += ci * ipow(x0, a_ - i) * ipow(x1, i) * ipow(y0, b_ - j) * ipow(y1, j);
    }
    return acc;
}

std::string BiHomPoly::to_string() const
{
    if (is_zero()) return "0";
    std::string out;
    auto mono = [](const char* var, int e) -> std::string {
        if (e == 0) return "";
        return e == 1 ? std::string(var) : std::string(var) + "^" + std::to_string(e);
    };
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        auto [i, j] = it->first;
        std::string m;
        for (std::string part : {mono("x0", a_ - i), mono("x1", i), mono("y0", b_ - j), mono("y1", j)}) {
            if (part.empty()) continue;
            if (!m.empty()) m += "*";
            m += part;
        }
        std::string c = "(" + numeric::to_string(it->second) + ")";
        if (!out.empty()) out += " + ";
        out += m.empty() ? c : c + "*" + m;
    }
    return out;
}

DivisionResult bihom_divides(const BiHomPoly& phi, const BiHomPoly& psi)
{
    if (phi.is_zero()) throw std::invalid_argument("bihom_divides by zero");
    int qa = psi.degree_x() - phi.degree_x();
    int qb = psi.degree_y() - phi.degree_y();
    if (psi.is_zero()) {
        if (qa < 0 || qb < 0) return {false, std::nullopt};
        return {true, BiHomPoly(qa, qb)};
    }
    if (qa < 0 || qb < 0) return {false, std::nullopt};

    // Division in k[x1, y1] under lex order; homogeneity fixes the x0, y0 powers.
    const auto& [lead_key, lead_coeff] = *phi.terms().rbegin();
    GaussianRational inv_lead = lead_coeff.inverse();
    BiHomPoly remainder = psi;
    BiHomPoly quotient(qa, qb);
    while (!remainder.is_zero()) {
        const auto& [rk, rc] = *remainder.terms().rbegin();
        int i = rk.first - lead_key.first;
        int j = rk.second - lead_key.second;
        if (i < 0 || j < 0 || i > qa || j > qb) return {false, std::nullopt};
        BiHomPoly term(qa, qb);
        term.add_term(i, j, rc * inv_lead);
        quotient = quotient + term;
        remainder = remainder - phi * term;
    }
    return {true, quotient};
}

} // namespace piqlab::poly
