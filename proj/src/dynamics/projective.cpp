#include "piqlab/dynamics/projective.hpp"

#include "piqlab/poly/rational_function.hpp"
#include "piqlab/poly/squarefree.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

namespace piqlab::dynamics {

using numeric::canonical_unit;

namespace {

Integer gcd_int(const Integer& a, const Integer& b)
{
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

GaussianInteger gcd_gauss(const GaussianInteger& a, const GaussianInteger& b)
{
    if (a.is_real() && b.is_real()) return GaussianInteger(gcd_int(a.re, b.re));
    return numeric::gcd(a, b);
}

GaussianInteger divexact_gauss(const GaussianInteger& a, const GaussianInteger& g)
{
    if (g.is_real() && a.is_real()) {
        Integer q;
        mpz_divexact(q.get_mpz_t(), a.re.get_mpz_t(), g.re.get_mpz_t());
        return GaussianInteger(q);
    }
    return numeric::divexact(a, g);
}

GaussianInteger to_gaussian_integer(const GaussianRational& z)
{
    if (z.re.get_den() != 1 || z.im.get_den() != 1) throw std::logic_error("coefficient is not integral");
    return GaussianInteger(Integer(z.re.get_num()), Integer(z.im.get_num()));
}

// value of sum c_k a^k b^(d-k) by Horner in a
GaussianInteger horner(const std::vector<GaussianInteger>& c, const GaussianInteger& a, const GaussianInteger& b)
{
    std::size_t n = c.size();
    if (a.is_real() && b.is_real()) {
        bool real = std::all_of(c.begin(), c.end(), [](const GaussianInteger& z) { return z.is_real(); });
        if (real) {
            Integer acc = c[n - 1].re;
            Integer bpow = b.re;
            for (std::size_t k = n - 1; k-- > 0;) {
                acc = acc * a.re + c[k].re * bpow;
                if (k > 0) bpow *= b.re;
            }
            return GaussianInteger(acc);
        }
    }
    GaussianInteger acc = c[n - 1];
    GaussianInteger bpow = b;
    for (std::size_t k = n - 1; k-- > 0;) {
        acc = acc * a + c[k] * bpow;
        if (k > 0) bpow = bpow * b;
    }
    return acc;
}

// F(G0, G1) for a form F given by coefficients
Form substitute(const Form& F, const Form& G0, const Form& G1)
{
    int d = F.degree();
    std::vector<Form> p0{Form::constant(GaussianRational(1))}, p1 = p0;
    for (int k = 1; k <= d; ++k) {
        p0.push_back(p0.back() * G0);
        p1.push_back(p1.back() * G1);
    }
    Form acc(d * G0.degree(), {});
    for (int k = 0; k <= d; ++k) {
        if (F.coeff(k).is_zero()) continue;
        acc = acc + p0[static_cast<std::size_t>(k)] * p1[static_cast<std::size_t>(d - k)] * F.coeff(k);
    }
    return acc;
}

} // namespace

ProjPoint ProjPoint::make(const GaussianInteger& a, const GaussianInteger& b)
{
    if (a.is_zero() && b.is_zero()) throw std::invalid_argument("(0 : 0) is not a point");
    ProjPoint P;
    if (b.is_zero()) return P;
    if (a.is_zero()) {
        P.x0 = GaussianInteger(0);
        P.x1 = GaussianInteger(1);
        return P;
    }
    GaussianInteger g = gcd_gauss(a, b);
    GaussianInteger x0 = divexact_gauss(a, g);
    GaussianInteger x1 = divexact_gauss(b, g);
    if (x1.is_real() && x0.is_real()) {
        if (x1.re < 0) {
            x0.re = -x0.re;
            x1.re = -x1.re;
        }
    } else {
        GaussianInteger u = canonical_unit(x1);
        x0 = x0 * u;
        x1 = x1 * u;
    }
    P.x0 = std::move(x0);
    P.x1 = std::move(x1);
    return P;
}

ProjPoint ProjPoint::from_value(const GaussianRational& z)
{
    Integer den = numeric::common_denominator(z);
    GaussianRational scaled = z * GaussianRational(den);
    return make(to_gaussian_integer(scaled), GaussianInteger(den));
}

std::optional<GaussianRational> ProjPoint::value() const
{
    if (is_infinity()) return std::nullopt;
    return GaussianRational(x0) / GaussianRational(x1);
}

Integer ProjPoint::height() const
{
    if (is_rational()) return std::max(abs(x0.re), abs(x1.re));
    return std::max(x0.norm(), x1.norm());
}

std::string ProjPoint::to_string() const
{
    if (is_infinity()) return "inf";
    return numeric::to_string(*value());
}

bool operator<(const ProjPoint& a, const ProjPoint& b)
{
    auto key = [](const ProjPoint& P) { return std::tie(P.x1.re, P.x1.im, P.x0.re, P.x0.im); };
    return key(a) < key(b);
}

std::size_t ProjPointHash::operator()(const ProjPoint& P) const
{
    std::size_t h = 0;
    for (const Integer* z : {&P.x0.re, &P.x0.im, &P.x1.re, &P.x1.im}) {
        std::size_t limb = mpz_size(z->get_mpz_t()) ? mpz_getlimbn(z->get_mpz_t(), 0) : 0;
        h = h * 0x9E3779B97F4A7C15ULL + limb + static_cast<std::size_t>(mpz_sgn(z->get_mpz_t()) + 1);
    }
    return h;
}

ProjPoint parse_point(const std::string& text)
{
    std::string t;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    }
    if (t == "inf" || t == "infinity" || t == "oo") return ProjPoint::infinity();
    if (!t.empty() && t.front() == '(' && t.back() == ')') {
        std::size_t colon = t.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("point needs the form (a:b): " + text);
        GaussianRational a = numeric::parse_gaussian(t.substr(1, colon - 1));
        GaussianRational b = numeric::parse_gaussian(t.substr(colon + 1, t.size() - colon - 2));
        Integer den = numeric::lcm(numeric::common_denominator(a), numeric::common_denominator(b));
        return ProjPoint::make(to_gaussian_integer(a * GaussianRational(den)),
                               to_gaussian_integer(b * GaussianRational(den)));
    }
    return ProjPoint::from_value(numeric::parse_gaussian(t));
}

RationalMap::RationalMap(const Form& F0, const Form& F1)
{
    if (F0.degree() != F1.degree()) throw std::invalid_argument("map forms must share a degree");
    if (F0.degree() < 1) throw std::invalid_argument("map degree must be at least 1");
    d_ = F0.degree();
    // common root test: gcd in the affine chart plus the point at infinity
    bool both_vanish_at_infinity = F0.coeff(d_).is_zero() && F1.coeff(d_).is_zero();
    poly::QiPoly g = poly::gcd(F0.dehomogenize(), F1.dehomogenize());
    if (both_vanish_at_infinity || g.degree() != 0) {
        throw std::invalid_argument("forms share a root: not a morphism of degree " + std::to_string(d_));
    }
    Integer den = 1;
    for (int k = 0; k <= d_; ++k) {
        den = numeric::lcm(den, numeric::common_denominator(F0.coeff(k)));
        den = numeric::lcm(den, numeric::common_denominator(F1.coeff(k)));
    }
    a_.clear();
    b_.clear();
    for (int k = 0; k <= d_; ++k) {
        a_.push_back(to_gaussian_integer(F0.coeff(k) * GaussianRational(den)));
        b_.push_back(to_gaussian_integer(F1.coeff(k) * GaussianRational(den)));
    }
    normalize();
}

void RationalMap::normalize()
{
    GaussianInteger g(0);
    for (const auto* v : {&a_, &b_}) {
        for (const auto& c : *v) {
            if (!c.is_zero()) g = g.is_zero() ? c : gcd_gauss(g, c);
        }
    }
    const GaussianInteger* lead = nullptr;
    for (const auto* v : {&b_, &a_}) {
        for (std::size_t k = v->size(); k-- > 0 && !lead;) {
            if (!(*v)[k].is_zero()) lead = &(*v)[k];
        }
        if (lead) break;
    }
    GaussianInteger lead_reduced = divexact_gauss(*lead, g);
    GaussianInteger u = canonical_unit(lead_reduced);
    rational_ = true;
    for (auto* v : {&a_, &b_}) {
        for (auto& c : *v) {
            c = divexact_gauss(c, g) * u;
            if (!c.is_real()) rational_ = false;
        }
    }
}

RationalMap RationalMap::polynomial(const poly::QiPoly& p)
{
    return fraction(p, poly::QiPoly(GaussianRational(1)));
}

RationalMap RationalMap::fraction(const poly::QiPoly& num, const poly::QiPoly& den)
{
    if (den.is_zero()) throw std::invalid_argument("zero denominator");
    int d = std::max(num.degree(), den.degree());
    if (d < 1) throw std::invalid_argument("constant maps are not morphisms of positive degree");
    return RationalMap(Form::homogenize(num, d), Form::homogenize(den, d));
}

RationalMap RationalMap::identity()
{
    return RationalMap();
}

Form RationalMap::F0() const
{
    std::vector<GaussianRational> c(a_.begin(), a_.end());
    return Form(d_, c);
}

Form RationalMap::F1() const
{
    std::vector<GaussianRational> c(b_.begin(), b_.end());
    return Form(d_, c);
}

std::pair<GaussianInteger, GaussianInteger> RationalMap::evaluate_raw(const GaussianInteger& a,
                                                                      const GaussianInteger& b) const
{
    return {horner(a_, a, b), horner(b_, a, b)};
}

ProjPoint RationalMap::operator()(const ProjPoint& P) const
{
    auto [u, v] = evaluate_raw(P.x0, P.x1);
    return ProjPoint::make(u, v);
}

std::string RationalMap::to_string() const
{
    auto form = [&](const std::vector<GaussianInteger>& c) {
        std::vector<GaussianRational> q(c.begin(), c.end());
        return poly::QiPoly(q).to_string("z");
    };
    std::string num = form(a_);
    std::string den = form(b_);
    if (den == "1") return num;
    return "(" + num + ")/(" + den + ")";
}

RationalMap compose(const RationalMap& f, const RationalMap& g)
{
    Form G0 = g.F0(), G1 = g.F1();
    return RationalMap(substitute(f.F0(), G0, G1), substitute(f.F1(), G0, G1));
}

RationalMap iterate(const RationalMap& f, int n)
{
    if (n < 0) throw std::invalid_argument("negative iterate");
    RationalMap out = RationalMap::identity();
    for (int k = 0; k < n; ++k) out = compose(f, out);
    return out;
}

GaussianRational resultant(const Form& F, const Form& G)
{
    int m = F.degree(), n = G.degree();
    int N = m + n;
    if (N == 0) return GaussianRational(1);
    // Sylvester matrix in x0 with highest powers first
    std::vector<std::vector<GaussianRational>> S(static_cast<std::size_t>(N),
                                                 std::vector<GaussianRational>(static_cast<std::size_t>(N)));
    for (int r = 0; r < n; ++r) {
        for (int k = 0; k <= m; ++k) S[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + m - k)] = F.coeff(k);
    }
    for (int r = 0; r < m; ++r) {
        for (int k = 0; k <= n; ++k) {
            S[static_cast<std::size_t>(n + r)][static_cast<std::size_t>(r + n - k)] = G.coeff(k);
        }
    }
    GaussianRational det(1);
    for (std::size_t col = 0; col < S.size(); ++col) {
        std::size_t pivot = col;
        while (pivot < S.size() && S[pivot][col].is_zero()) ++pivot;
        if (pivot == S.size()) return GaussianRational(0);
        if (pivot != col) {
            std::swap(S[pivot], S[col]);
            det = -det;
        }
        det *= S[col][col];
        GaussianRational inv = S[col][col].inverse();
        for (std::size_t r = col + 1; r < S.size(); ++r) {
            if (S[r][col].is_zero()) continue;
            GaussianRational factor = S[r][col] * inv;
            for (std::size_t c = col; c < S.size(); ++c) S[r][c] -= factor * S[col][c];
        }
    }
    return det;
}

GaussianRational resultant(const RationalMap& f)
{
    return resultant(f.F0(), f.F1());
}

std::vector<ProjPoint> enumerate_points(long H)
{
    if (H < 1) throw std::invalid_argument("height bound must be at least 1");
    std::vector<ProjPoint> out{ProjPoint::infinity()};
    for (long b = 1; b <= H; ++b) {
        for (long a = -H; a <= H; ++a) {
            if (gcd_int(a, b) != 1) continue;
            out.push_back(ProjPoint::make(GaussianInteger(a), GaussianInteger(b)));
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const ProjPoint& P, const ProjPoint& Q) {
        Integer hp = P.height(), hq = Q.height();
        if (hp != hq) return hp < hq;
        return P < Q;
    });
    return out;
}

std::vector<ProjPoint> enumerate_gaussian_points(long H)
{
    if (H < 1) throw std::invalid_argument("height bound must be at least 1");
    std::vector<GaussianInteger> ints;
    for (long x = -H; x <= H; ++x) {
        for (long y = -H; y <= H; ++y) {
            if (x * x + y * y <= H) ints.emplace_back(Integer(x), Integer(y));
        }
    }
    std::set<ProjPoint> seen;
    for (const auto& a : ints) {
        for (const auto& b : ints) {
            if (a.is_zero() && b.is_zero()) continue;
            ProjPoint P = ProjPoint::make(a, b);
            if (P.x0.norm() <= H && P.x1.norm() <= H) seen.insert(P);
        }
    }
    std::vector<ProjPoint> out(seen.begin(), seen.end());
    auto gauss_height = [](const ProjPoint& P) { return std::max(P.x0.norm(), P.x1.norm()); };
    std::stable_sort(out.begin(), out.end(), [&](const ProjPoint& P, const ProjPoint& Q) {
        return gauss_height(P) < gauss_height(Q);
    });
    return out;
}

std::vector<int> ramification_multiset(const RationalMap& f)
{
    poly::QiPoly N = f.F0().dehomogenize();
    poly::QiPoly D = f.F1().dehomogenize();
    poly::QiPoly W = N.derivative() * D - N * D.derivative();
    int d = f.degree();
    std::vector<int> out;
    for (const auto& [factor, mult] : poly::squarefree_decomposition(W)) {
        for (int k = 0; k < factor.degree(); ++k) out.push_back(mult + 1);
    }
    // the Wronskian has formal degree 2d - 2; the deficit sits at infinity
    int at_infinity = 2 * d - 2 - W.degree();
    if (at_infinity > 0) out.push_back(at_infinity + 1);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

using QiFunction = poly::RationalFunction<GaussianRational>;

class MapParser {
public:
    explicit MapParser(const std::string& text)
    {
        for (char c : text) {
            if (!std::isspace(static_cast<unsigned char>(c))) s_ += c;
        }
    }

    QiFunction parse()
    {
        QiFunction out = expr();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return out;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw std::invalid_argument("map expression at column " + std::to_string(pos_ + 1) + ": " + what);
    }
    bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }
    bool starts_primary() const
    {
        if (pos_ >= s_.size()) return false;
        char c = s_[pos_];
        return c == 'z' || c == 'i' || c == '(' || std::isdigit(static_cast<unsigned char>(c));
    }

    QiFunction expr()
    {
        QiFunction acc = term();
        while (peek('+') || peek('-')) {
            char op = s_[pos_++];
            QiFunction rhs = term();
            acc = op == '+' ? acc + rhs : acc - rhs;
        }
        return acc;
    }

    QiFunction term()
    {
        QiFunction acc = power();
        while (true) {
            if (peek('*')) {
                ++pos_;
                acc = acc * power();
            } else if (peek('/')) {
                ++pos_;
                QiFunction rhs = power();
                if (rhs.is_zero()) fail("division by zero");
                acc = acc / rhs;
            } else if (starts_primary()) {
                acc = acc * power();
            } else {
                return acc;
            }
        }
    }

    QiFunction power()
    {
        if (peek('-')) {
            ++pos_;
            return -power();
        }
        QiFunction base = primary();
        if (peek('^')) {
            ++pos_;
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) fail("exponent must be a nonnegative integer");
            long e = std::stol(s_.substr(start, pos_ - start));
            QiFunction out(poly::QiPoly(GaussianRational(1)));
            for (long k = 0; k < e; ++k) out = out * base;
            return out;
        }
        return base;
    }

    QiFunction primary()
    {
        if (peek('(')) {
            ++pos_;
            QiFunction inner = expr();
            if (!peek(')')) fail("missing ')'");
            ++pos_;
            return inner;
        }
        if (peek('z')) {
            ++pos_;
            return QiFunction(poly::QiPoly::x());
        }
        if (peek('i')) {
            ++pos_;
            return QiFunction(poly::QiPoly(GaussianRational::i_unit()));
        }
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected a number, z, i or '('");
        Integer n = numeric::parse_integer(s_.substr(start, pos_ - start));
        return QiFunction(poly::QiPoly(GaussianRational(n)));
    }

    std::string s_;
    std::size_t pos_ = 0;
};

} // namespace

RationalMap parse_map(const std::string& text)
{
    QiFunction f = MapParser(text).parse();
    return RationalMap::fraction(f.num(), f.den());
}

} // namespace piqlab::dynamics
