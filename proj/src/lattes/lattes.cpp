#include "piqlab/lattes/lattes.hpp"

#include "piqlab/errors.hpp"

#include <algorithm>
#include <thread>

namespace piqlab::lattes {

using numeric::GaussianInteger;
using numeric::Integer;
using numeric::Rational;
using poly::QiPoly;

namespace {

QiRationalFunction to_gaussian(const poly::QRationalFunction& r)
{
    return {poly::to_gaussian(r.num()), poly::to_gaussian(r.den())};
}

std::optional<Rational> rational_sqrt(const Rational& q)
{
    if (q < 0) return std::nullopt;
    Integer n(q.get_num()), d(q.get_den());
    if (mpz_perfect_square_p(n.get_mpz_t()) == 0 || mpz_perfect_square_p(d.get_mpz_t()) == 0) return std::nullopt;
    Integer rn, rd;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    return Rational(rn, rd);
}

// w with w^2 = z in Q(i), when one exists
std::optional<GaussianRational> gaussian_sqrt(const GaussianRational& z)
{
    if (z.is_zero()) return GaussianRational(0);
    auto modulus = rational_sqrt(Rational(z.re * z.re + z.im * z.im));
    if (!modulus) return std::nullopt;
    auto x = rational_sqrt(Rational((z.re + *modulus) / 2));
    auto y = rational_sqrt(Rational((*modulus - z.re) / 2));
    if (!x || !y) return std::nullopt;
    for (int sign : {1, -1}) {
        GaussianRational w(*x, *y * sign);
        if (w * w == z) return w;
    }
    return std::nullopt;
}

QiPoly cubic_rhs()
{
    return poly::to_gaussian(CMCurve::model().rhs());
}

// power sums p_1..p_k of the roots of a monic polynomial, by Newton's identities
std::vector<GaussianRational> power_sums(const QiPoly& h, int k)
{
    int n = h.degree();
    std::vector<GaussianRational> e(static_cast<std::size_t>(std::max(n, k)) + 1, GaussianRational(0));
    e[0] = GaussianRational(1);
    for (int j = 1; j <= n; ++j) {
        GaussianRational c = h.coeff(n - j);
        e[static_cast<std::size_t>(j)] = (j % 2 == 1) ? -c : c;
    }
    std::vector<GaussianRational> p(static_cast<std::size_t>(k) + 1, GaussianRational(0));
    for (int m = 1; m <= k; ++m) {
        GaussianRational acc = GaussianRational(m) * e[static_cast<std::size_t>(m)];
        if (m % 2 == 0) acc = -acc;
        for (int i = 1; i < m; ++i) {
            GaussianRational term = e[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(m - i)];
            acc = (i % 2 == 1) ? acc + term : acc - term;
        }
        p[static_cast<std::size_t>(m)] = acc;
    }
    return p;
}

RationalMap from_function(const QiRationalFunction& r) { return RationalMap::fraction(r.num(), r.den()); }

QiRationalFunction to_function(const RationalMap& f)
{
    std::vector<GaussianRational> a(f.coeffs0().begin(), f.coeffs0().end());
    std::vector<GaussianRational> b(f.coeffs1().begin(), f.coeffs1().end());
    return {QiPoly(a), QiPoly(b)};
}

// c with f(x) ~ c x at infinity, for f fixing infinity with a simple pole
std::optional<GaussianRational> linear_growth(const RationalMap& f)
{
    int d = f.degree();
    const auto& a = f.coeffs0();
    const auto& b = f.coeffs1();
    if (!b[static_cast<std::size_t>(d)].is_zero() || b[static_cast<std::size_t>(d - 1)].is_zero()) return std::nullopt;
    return GaussianRational(a[static_cast<std::size_t>(d)]) / GaussianRational(b[static_cast<std::size_t>(d - 1)]);
}

using RawPoint = std::pair<GaussianInteger, GaussianInteger>;

// divides out the common rational integer content
void strip_content(RawPoint& P)
{
    Integer g = 0;
    for (const Integer* c : {&P.first.re, &P.first.im, &P.second.re, &P.second.im}) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c->get_mpz_t());
    }
    if (g <= 1) return;
    for (Integer* c : {&P.first.re, &P.first.im, &P.second.re, &P.second.im}) {
        mpz_divexact(c->get_mpz_t(), c->get_mpz_t(), g.get_mpz_t());
    }
}

RawPoint raw_step(const RationalMap& f, const RawPoint& P)
{
    RawPoint out = f.evaluate_raw(P.first, P.second);
    strip_content(out);
    return out;
}

bool same_point(const RawPoint& P, const RawPoint& Q)
{
    return P.first * Q.second == P.second * Q.first;
}

std::optional<Witness> check_seed(const LattesPair& pair, int s, const ProjPoint& t)
{
    RawPoint a{t.x0, t.x1}, b{t.x0, t.x1};
    for (int k = 0; k <= s; ++k) {
        a = raw_step(pair.G, a);
        b = raw_step(pair.F, b);
    }
    Witness w{t, s + 1, {ProjPoint::make(a.first, a.second), ProjPoint::make(b.first, b.second)}};
    for (int i = 0; i <= s + 1; ++i) {
        bool on_diagonal = same_point(a, b);
        if (on_diagonal != (i == s + 1)) return std::nullopt;
        if (i == s + 1) break;
        a = raw_step(pair.F, a);
        b = raw_step(pair.G, b);
    }
    return w;
}

} // namespace

QiRationalFunction CMCurve::i_x_map() { return QiRationalFunction(QiPoly::monomial(GaussianRational(-1), 1)); }

QiRationalFunction CMCurve::multiplication_x_map(int n)
{
    return to_gaussian(poly::multiplication_x_map(model(), n));
}

GaussianRational multiplier(Eigen e) { return e == Eigen::OnePlusTwoI ? GaussianRational(1, 2) : GaussianRational(1, -2); }

QiPoly kernel_polynomial(Eigen e)
{
    const auto E = CMCurve::model();
    QiPoly psi5 = poly::to_gaussian(poly::division_polynomial(E, 5).x_part);
    // x o [2] = -x = x o [i]
    QiRationalFunction x2 = CMCurve::multiplication_x_map(2);
    QiPoly on_x = x2.num() + QiPoly::x() * x2.den();
    // y o [2] = y o [i] = i y for [2] = [i], and -i y for [2] = -[i]
    QiRationalFunction ratio = to_gaussian(poly::doubling_y_ratio(E));
    GaussianRational sigma = e == Eigen::OnePlusTwoI ? GaussianRational(0, 1) : GaussianRational(0, -1);
    QiPoly on_y = ratio.num() - ratio.den() * sigma;
    QiPoly h = poly::gcd(poly::gcd(psi5, on_x), on_y);
    if (h.degree() != 2) throw ConstructionFailed("no order-5 kernel factor found in psi_5");
    return h;
}

VeluIsogeny velu_isogeny(const QiPoly& h)
{
    if (h.degree() < 1) throw std::invalid_argument("kernel polynomial must be nonconstant");
    const auto E = CMCurve::model();
    GaussianRational a(E.a), b(E.b);
    QiPoly hm = h.monic();
    int n = hm.degree();
    auto p = power_sums(hm, 3);
    QiPoly f = cubic_rhs();
    QiPoly df = f.derivative();
    QiPoly dh = hm.derivative();
    QiPoly ddh = dh.derivative();
    // X = (2n + 1) x - 2 p1 - 2 f' h'/h + 4 f (h'^2 - h h'') / h^2
    QiRationalFunction X(QiPoly::x() * GaussianRational(2 * n + 1) - QiPoly(p[1] * GaussianRational(2)));
    X = X - QiRationalFunction(df * dh * GaussianRational(2), hm);
    X = X + QiRationalFunction(f * (dh * dh - hm * ddh) * GaussianRational(4), hm * hm);
    GaussianRational t = GaussianRational(6) * p[2] + GaussianRational(2 * n) * a;
    GaussianRational w = GaussianRational(10) * p[3] + GaussianRational(6) * a * p[1] + GaussianRational(4 * n) * b;
    return {X, a - GaussianRational(5) * t, b - GaussianRational(7) * w};
}

RationalMap velu_descend(const QiPoly& h)
{
    VeluIsogeny phi = velu_isogeny(h);
    if (!phi.B.is_zero() || phi.A.is_zero()) throw ConstructionFailed("codomain does not have j = 1728");
    // y^2 = x^3 + A x is isomorphic to y^2 = x^3 + x via x -> x / r with r^2 = A, r a square
    auto r = gaussian_sqrt(phi.A);
    if (!r || !gaussian_sqrt(*r)) throw ConstructionFailed("codomain is not isomorphic to y^2 = x^3 + x over Q(i)");
    RationalMap out = from_function(phi.x_map.scaled(GaussianRational(1) / *r));
    if (out.degree() != 2 * h.degree() + 1) throw ConstructionFailed("isogeny has the wrong degree");
    return out;
}

LattesPair build_lattes_pair()
{
    LattesPair out;
    out.kernel_F = kernel_polynomial(Eigen::OnePlusTwoI);
    out.kernel_G = kernel_polynomial(Eigen::OneMinusTwoI);
    RationalMap F0 = velu_descend(out.kernel_F);
    RationalMap G0 = velu_descend(out.kernel_G);
    RationalMap five = from_function(CMCurve::multiplication_x_map(5));
    const GaussianRational units[] = {GaussianRational(1), GaussianRational(-1), GaussianRational(0, 1),
                                      GaussianRational(0, -1)};
    GaussianRational growth_F = GaussianRational(1) / (out.alpha * out.alpha);
    GaussianRational growth_G = GaussianRational(1) / (out.beta * out.beta);
    for (const auto& eF : units) {
        RationalMap F = from_function(to_function(F0).scaled(eF));
        if (linear_growth(F) != growth_F) continue;
        for (const auto& eG : units) {
            RationalMap G = from_function(to_function(G0).scaled(eG));
            if (linear_growth(G) != growth_G) continue;
            if (compose(F, G) == five && compose(G, F) == five) {
                out.F = F;
                out.G = G;
                return out;
            }
        }
    }
    throw ConstructionFailed("no unit twist satisfies F o G = G o F = x o [5]");
}

RecipeReport verify_recipe(const RationalMap& F, const RationalMap& G,
                           const std::optional<std::pair<GaussianRational, GaussianRational>>& multipliers,
                           int check_depth)
{
    RecipeReport r;
    r.commute = compose(F, G) == compose(G, F);
    // f o g = (F o G) x (G o F) maps the diagonal onto itself exactly when the
    // two composites agree, since F o G is surjective on P^1
    r.invariant = r.commute;
    if (F == G) {
        r.proper = false;
        r.proper_method = "F = G, so g^n(Y) = Y for every n";
    } else if (multipliers) {
        GaussianRational ratio = multipliers->first / multipliers->second;
        r.proper = !numeric::is_root_of_unity_gaussian(ratio);
        r.proper_method = "alpha/beta = " + numeric::to_string(ratio) +
                          (r.proper ? " is not a root of unity" : " is a root of unity");
    } else {
        r.proper = true;
        RationalMap Fn = F, Gn = G;
        for (int n = 1; n <= check_depth; ++n) {
            if (n > 1) {
                Fn = compose(F, Fn);
                Gn = compose(G, Gn);
            }
            if (Fn == Gn) {
                r.proper = false;
                break;
            }
        }
        r.proper_method = "F^n != G^n checked for n <= " + std::to_string(check_depth);
    }
    r.dense = true;
    return r;
}

RecipeReport verify_recipe(const LattesPair& pair)
{
    return verify_recipe(pair.F, pair.G, std::make_pair(pair.alpha, pair.beta));
}

WitnessReport witness_points(const LattesPair& pair, int s, const std::vector<ProjPoint>& seeds,
                             std::size_t max_witnesses, int jobs)
{
    if (s < 0) throw std::invalid_argument("level must be >= 0");
    WitnessReport out;
    const std::size_t batch = static_cast<std::size_t>(std::max(1, jobs));
    for (std::size_t begin = 0; begin < seeds.size() && out.witnesses.size() < max_witnesses; begin += batch) {
        std::size_t end = std::min(seeds.size(), begin + batch);
        std::vector<std::optional<Witness>> results(end - begin);
        if (batch == 1) {
            results[0] = check_seed(pair, s, seeds[begin]);
        } else {
            std::vector<std::thread> threads;
            for (std::size_t k = begin; k < end; ++k) {
                threads.emplace_back([&, k] { results[k - begin] = check_seed(pair, s, seeds[k]); });
            }
            for (auto& th : threads) th.join();
        }
        for (std::size_t k = 0; k < results.size(); ++k) {
            if (!results[k]) continue;
            out.witnesses.push_back(*results[k]);
            if (out.witnesses.size() == max_witnesses) {
                out.seeds_consumed = begin + k + 1;
                return out;
            }
        }
        out.seeds_consumed = end;
    }
    return out;
}

engine::ProductSystem lattes_system(const LattesPair& pair) { return engine::ProductSystem::make(pair.F, pair.G); }

} // namespace piqlab::lattes
