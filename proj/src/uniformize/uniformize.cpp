#include "piqlab/uniformize/uniformize.hpp"

#include "piqlab/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace piqlab::uniformize {

namespace {

using Coeffs = std::vector<PadicNumber>;

Radius disc(const Rational& m) { return Radius::uniform(1, m); }

Coeffs zeros(const Integer& p, int D) { return Coeffs(static_cast<std::size_t>(D) + 1, PadicNumber::zero(p)); }

Coeffs stored(const PolydiscSeries& F, int D)
{
    Coeffs c = zeros(F.prime(), D);
    for (const auto& [I, a] : F.terms()) {
        if (I[0] <= D) c[static_cast<std::size_t>(I[0])] = a;
    }
    return c;
}

Coeffs mul_trunc(const Coeffs& a, const Coeffs& b, const Integer& p, int D)
{
    Coeffs out = zeros(p, D);
    for (std::size_t i = 0; i < a.size() && static_cast<int>(i) <= D; ++i) {
        if (a[i].is_exact_zero()) continue;
        for (std::size_t j = 0; j < b.size() && static_cast<int>(i + j) <= D; ++j) {
            if (b[j].is_exact_zero()) continue;
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

// F(phi(z)) mod z^(D+1); phi(0) must vanish
Coeffs compose_trunc(const Coeffs& F, const Coeffs& phi, const Integer& p, int D)
{
    Coeffs acc = zeros(p, D);
    for (std::size_t k = F.size(); k-- > 0;) {
        acc = mul_trunc(acc, phi, p, D);
        acc[0] += F[k];
    }
    return acc;
}

PolydiscSeries to_series(const Coeffs& c, const Integer& p, int D)
{
    PolydiscSeries s(p, 1, D);
    for (int k = 0; k <= D && k < static_cast<int>(c.size()); ++k) {
        if (!c[static_cast<std::size_t>(k)].is_exact_zero()) s.set_coefficient({k}, c[static_cast<std::size_t>(k)]);
    }
    return s;
}

PadicNumber one(const Integer& p, long precision) { return PadicNumber::from_rational(1, p, precision); }

long working_precision(const PolydiscSeries& F)
{
    long prec = 1;
    for (const auto& [I, a] : F.terms()) prec = std::max(prec, a.precision());
    return prec;
}

Rational min_opt(const std::optional<Rational>& a, const Rational& b) { return a ? std::min(*a, b) : b; }

// A_F: every coefficient of F is known modulo p^A_F on the disc |z| <= p^-m
Rational series_precision_at(const PolydiscSeries& F, const Rational& m)
{
    std::optional<Rational> out = F.tail_exponent_at(disc(m));
    for (const auto& [I, a] : F.terms()) {
        long A = a.absolute_precision();
        if (A == PadicNumber::kInfinity) continue;
        out = min_opt(out, Rational(Rational(A) + m * I[0]));
    }
    return out ? *out : Rational(PadicNumber::kInfinity);
}

// shared tail of both constructions: radius search, certificate and residual
void finish(Conjugacy& conj, const PolydiscSeries& F, const Coeffs& residual, int D, int degree_scale,
            const Rational& source_shift)
{
    conj.certified = false;
    for (int m = 1; m <= D; ++m) {
        if (certify_isometry(conj.phi, disc(m))) {
            conj.source_exponent = m;
            conj.certified = true;
            break;
        }
    }
    if (!conj.certified) conj.source_exponent = D;
    const Rational& ms = conj.source_exponent;
    conj.target_exponent = Rational(conj.phi.coefficient({1}).valuation_bound()) + ms;

    Rational e = series_precision_at(F, conj.target_exponent);
    for (const auto& [I, c] : conj.phi.terms()) {
        long A = c.absolute_precision();
        if (A != PadicNumber::kInfinity) e = std::min(e, Rational(Rational(A) + ms * I[0]));
    }
    conj.precision_exponent = e;

    bool all_unknown = true;
    std::optional<Rational> res;
    for (std::size_t k = 0; k < residual.size(); ++k) {
        const PadicNumber& r = residual[k];
        if (r.is_exact_zero()) continue;
        if (r.is_known_nonzero()) all_unknown = false;
        res = min_opt(res, Rational(Rational(r.valuation_bound()) + ms * static_cast<long>(k) / degree_scale + source_shift));
    }
    conj.residual_exponent = res ? *res : Rational(PadicNumber::kInfinity);
    conj.residual_within_certificate = all_unknown && conj.residual_exponent >= conj.precision_exponent;
}

} // namespace

Germ::Germ(PolydiscSeries F) : F_(std::move(F))
{
    if (F_.nvars() != 1) throw std::invalid_argument("a germ is a one-variable series");
    for (const auto& [I, a] : F_.terms()) {
        if (a.valuation_bound() < 0) throw std::invalid_argument("germ coefficients must be p-adic integers");
        if (I[0] == 0 && a.valuation_bound() < 1) {
            throw std::invalid_argument("germ constant term must lie in pZ_p");
        }
    }
    if (F_.has_tail() && *F_.tail_exponent_at(disc(1)) < 1) {
        throw std::invalid_argument("germ tail is not bounded by 1/p on the residue disc");
    }
}

Germ Germ::from_rational(const Integer& p, const std::vector<Rational>& coeffs, int truncation, long precision)
{
    std::map<series::MultiIndex, Rational> terms;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (coeffs[k] != 0) terms[{static_cast<int>(k)}] = coeffs[k];
    }
    return Germ(PolydiscSeries::from_rational_terms(p, 1, truncation, terms, precision));
}

PadicNumber Germ::evaluate(const PadicNumber& w) const
{
    PadicNumber acc = PadicNumber::zero(prime());
    for (int k = truncation(); k >= 0; --k) {
        acc = acc * w + coefficient(k);
    }
    if (F_.has_tail()) {
        // omitted terms at |w| <= p^-v(w)
        long v = w.valuation_bound();
        Rational m = v == PadicNumber::kInfinity ? Rational(F_.truncation() + 1) : Rational(v);
        Radius r = disc(std::max(m, F_.tail_radius().exponents[0]));
        Rational t = *F_.tail_exponent_at(r);
        mpz_class floor_t;
        mpz_fdiv_q(floor_t.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
        acc += PadicNumber::approximate_zero(prime(), floor_t.get_si());
    }
    return acc;
}

PadicNumber Germ::derivative_at(const PadicNumber& w) const
{
    PadicNumber acc = PadicNumber::zero(prime());
    for (int k = truncation(); k >= 1; --k) {
        acc = acc * w + coefficient(k) * PadicNumber::from_rational(k, prime(), 64);
    }
    return acc;
}

Germ Germ::conjugated_by_translation(const PadicNumber& c) const
{
    const Integer& p = prime();
    int D = truncation();
    Coeffs F = stored(F_, D);
    // G(w + c) by Horner in the shifted variable
    Coeffs shift = zeros(p, D);
    shift[0] = c;
    if (D >= 1) shift[1] = one(p, working_precision(F_));
    Coeffs acc = zeros(p, D);
    for (int k = D; k >= 0; --k) {
        acc = mul_trunc(acc, shift, p, D);
        acc[0] += F[static_cast<std::size_t>(k)];
    }
    acc[0] -= c;
    PolydiscSeries out = to_series(acc, p, D);
    if (F_.has_tail()) out.add_tail(*F_.tail_exponent_at(disc(1)), disc(1));
    return Germ(std::move(out));
}

PadicNumber find_attracting_fixed_point(const Germ& G)
{
    const Integer& p = G.prime();
    PadicNumber a0 = G.coefficient(0);
    PadicNumber a1 = G.coefficient(1);
    if (a0.valuation_bound() < 1 || a1.valuation_bound() < 1) {
        throw PrecisionLoss("contraction on pZ_p cannot be certified");
    }
    long prec = working_precision(G.series());
    PadicNumber w = PadicNumber::zero(p);
    PadicNumber unit = one(p, prec + 1);
    for (int iter = 0; iter < 128; ++iter) {
        PadicNumber h = G.evaluate(w) - w;
        if (h.is_indistinguishable_from_zero()) return w;
        PadicNumber dh = G.derivative_at(w) - unit;
        w = w - h / dh;
    }
    throw PrecisionLoss("fixed-point iteration did not settle");
}

Conjugacy koenigs_linearize(const Germ& F, int D)
{
    if (D < 1) throw std::invalid_argument("truncation degree must be >= 1");
    const Integer& p = F.prime();
    if (F.coefficient(0).is_known_nonzero()) throw std::invalid_argument("Koenigs linearization needs F(0) = 0");
    PadicNumber lambda = F.coefficient(1);
    if (!lambda.is_known_nonzero()) throw PrecisionLoss("multiplier is indistinguishable from zero");
    if (*lambda.valuation() < 1) throw std::invalid_argument("Koenigs linearization needs 0 < |F'(0)| < 1");

    Coeffs a = stored(F.series(), D);
    Coeffs higher = a;  // sum_{j >= 2} a_j z^j
    higher[0] = PadicNumber::zero(p);
    higher[1] = PadicNumber::zero(p);

    long prec = working_precision(F.series());
    Coeffs phi = zeros(p, D);
    phi[1] = one(p, prec);
    Coeffs lambda_pow = zeros(p, D);
    lambda_pow[1] = lambda;
    for (int k = 2; k <= D; ++k) lambda_pow[static_cast<std::size_t>(k)] = lambda_pow[static_cast<std::size_t>(k) - 1] * lambda;

    for (int k = 2; k <= D; ++k) {
        Coeffs image = compose_trunc(higher, phi, p, k);
        PadicNumber denom = lambda_pow[static_cast<std::size_t>(k)] - lambda;  // |lambda^k - lambda| = |lambda|
        phi[static_cast<std::size_t>(k)] = image[static_cast<std::size_t>(k)] / denom;
    }

    Conjugacy conj;
    conj.phi = to_series(phi, p, D);
    // residual phi(lambda z) - F(phi(z))
    Coeffs lhs = zeros(p, D);
    for (int k = 1; k <= D; ++k) {
        lhs[static_cast<std::size_t>(k)] = phi[static_cast<std::size_t>(k)] * lambda_pow[static_cast<std::size_t>(k)];
    }
    Coeffs rhs = compose_trunc(a, phi, p, D);
    Coeffs residual = zeros(p, D);
    for (int k = 0; k <= D; ++k) residual[static_cast<std::size_t>(k)] = lhs[static_cast<std::size_t>(k)] - rhs[static_cast<std::size_t>(k)];
    finish(conj, F.series(), residual, D, 1, 0);
    return conj;
}

Conjugacy boettcher_coordinate(const Germ& F, int D)
{
    if (D < 1) throw std::invalid_argument("truncation degree must be >= 1");
    const Integer& p = F.prime();
    if (F.coefficient(0).is_known_nonzero() || F.coefficient(1).is_known_nonzero()) {
        throw std::invalid_argument("Boettcher coordinates need F(0) = F'(0) = 0");
    }
    int d = 0;
    for (int k = 2; k <= F.truncation(); ++k) {
        if (F.coefficient(k).is_known_nonzero()) {
            d = k;
            break;
        }
        if (!F.coefficient(k).is_exact_zero()) throw PrecisionLoss("leading coefficient is not determined");
    }
    if (d == 0) throw PrecisionLoss("no nonzero coefficient of degree >= 2 is known");
    PadicNumber ad = F.coefficient(d);
    std::optional<PadicNumber> beta = numeric::nth_root_padic(ad, d - 1);
    if (!beta) {
        throw ExtensionRequired("leading coefficient has no " + std::to_string(d - 1) + "-th root in Q_" + p.get_str());
    }
    // the recursion for b_m reads coefficients of F up to degree m + d - 1
    if (F.series().has_tail()) D = std::min(D, F.truncation() - d + 1);
    if (D < 1) throw PrecisionLoss("germ truncation too low for the requested degree");

    int top = D + d - 1;
    Coeffs a = stored(F.series(), top);
    long prec = working_precision(F.series());
    Coeffs phi = zeros(p, D);
    phi[1] = beta->inverse();
    PadicNumber scale = PadicNumber::from_rational(d, p, prec) * ad * phi[1].pow(d - 1);
    for (int m = 2; m <= D; ++m) {
        int n = m + d - 1;
        Coeffs image = compose_trunc(a, phi, p, n);
        PadicNumber target = (n % d == 0) ? phi[static_cast<std::size_t>(n / d)] : PadicNumber::zero(p);
        phi[static_cast<std::size_t>(m)] = (target - image[static_cast<std::size_t>(n)]) / scale;
    }

    Conjugacy conj;
    conj.phi = to_series(phi, p, D);
    // residual F(phi(z)) - phi(z^d) through degree D + d - 1, which b_1..b_D determine
    Coeffs lhs = compose_trunc(a, phi, p, top);
    Coeffs residual = lhs;
    for (int j = 1; j <= D && j * d <= top; ++j) {
        residual[static_cast<std::size_t>(j * d)] -= phi[static_cast<std::size_t>(j)];
    }
    finish(conj, F.series(), residual, D, 1, 0);
    return conj;
}

bool certify_isometry(const PolydiscSeries& phi, const Radius& s)
{
    if (phi.nvars() != 1) throw std::invalid_argument("isometry test needs a one-variable series");
    if (phi.coefficient({0}).is_known_nonzero()) throw std::invalid_argument("phi(0) must vanish");
    PadicNumber c1 = phi.coefficient({1});
    if (!c1.is_known_nonzero()) throw std::invalid_argument("phi'(0) must be nonzero");
    Rational linear = Rational(*c1.valuation()) + s.weight({1});
    std::optional<Rational> tail = phi.tail_exponent_at(s);
    if (tail && *tail <= linear) return false;
    for (const auto& [I, c] : phi.terms()) {
        if (I[0] < 2) continue;
        if (Rational(c.valuation_bound()) + s.weight(I) <= linear) return false;
    }
    return true;
}

std::string to_string(LocalCase c)
{
    switch (c) {
    case LocalCase::Case1: return "Case1";
    case LocalCase::Case2a: return "Case2a";
    case LocalCase::Case2b: return "Case2b";
    case LocalCase::Case3a: return "Case3a";
    case LocalCase::Case3b: return "Case3b";
    }
    return "?";
}

namespace {

bool derivative_is_unit(const Germ& F)
{
    PadicNumber a1 = F.coefficient(1);
    return a1.is_known_nonzero() && *a1.valuation() == 0;
}

bool derivative_vanishes_at_fixed_point(const Germ& F)
{
    PadicNumber c = find_attracting_fixed_point(F);
    return F.derivative_at(c).is_indistinguishable_from_zero();
}

} // namespace

LocalCase classify_local_case(const Germ& F, const Germ& G)
{
    bool uf = derivative_is_unit(F);
    bool ug = derivative_is_unit(G);
    if (uf && ug) return LocalCase::Case1;
    if (uf || ug) {
        const Germ& contracting = uf ? G : F;
        return derivative_vanishes_at_fixed_point(contracting) ? LocalCase::Case2b : LocalCase::Case2a;
    }
    bool zf = derivative_vanishes_at_fixed_point(F);
    bool zg = derivative_vanishes_at_fixed_point(G);
    return (zf && zg) ? LocalCase::Case3b : LocalCase::Case3a;
}

std::string to_string(LimitVerdict v)
{
    switch (v) {
    case LimitVerdict::ConvergesToZero: return "ConvergesToZero";
    case LimitVerdict::BoundedAway: return "BoundedAway";
    case LimitVerdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

LimitTestResult root_of_unity_limit_test(const PadicNumber& xi, const std::vector<PadicNumber>& P, long d, int n_max)
{
    const Integer& p = xi.prime();
    if (d < 1) throw std::invalid_argument("exponent base d must be >= 1");
    if (Integer(d) % p == 0) throw std::invalid_argument("p must not divide d");
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    if (!xi.is_known_nonzero() || *xi.valuation() != 0) throw std::invalid_argument("|xi| must be 1");
    bool nonzero_poly = std::any_of(P.begin(), P.end(), [](const PadicNumber& c) { return !c.is_exact_zero(); });
    if (!nonzero_poly) throw std::invalid_argument("P must be nonzero");

    LimitTestResult out;
    PadicNumber x = xi;
    std::vector<bool> zero;
    for (int n = 0; n <= n_max; ++n) {
        PadicNumber value = PadicNumber::zero(p);
        for (std::size_t k = P.size(); k-- > 0;) value = value * x + P[k];
        out.valuations.push_back(value.valuation_bound());
        zero.push_back(value.is_indistinguishable_from_zero());
        if (n < n_max) x = x.pow(d);
    }

    auto vanishes = [&](std::size_t n) { return zero[n]; };
    std::size_t N = out.valuations.size();
    if (vanishes(N - 1) && vanishes(N - 2)) {
        out.verdict = LimitVerdict::ConvergesToZero;
        return out;
    }
    std::size_t half = N / 2;
    long pinned = out.valuations[half];
    bool constant = true;
    for (std::size_t n = half; n < N; ++n) {
        if (out.valuations[n] != pinned || vanishes(n)) constant = false;
    }
    if (constant && pinned >= 1 && N - half >= 3) {
        out.verdict = LimitVerdict::BoundedAway;
    } else {
        out.verdict = LimitVerdict::Inconclusive;
    }
    return out;
}

namespace {

// a pinned distance is the mechanism that excludes roots of unity; an exact
// root of unity therefore never keeps a BoundedAway verdict
void apply_exact_decision(LimitTestResult& r, bool is_root)
{
    r.root_of_unity = is_root;
    if (is_root && r.verdict == LimitVerdict::BoundedAway) r.verdict = LimitVerdict::Inconclusive;
}

} // namespace

LimitTestResult root_of_unity_limit_test_teichmuller(const Integer& residue, const Integer& p, long precision,
                                                     const std::vector<PadicNumber>& P, long d, int n_max)
{
    PadicNumber xi = numeric::teichmuller(residue, p, precision);
    LimitTestResult r = root_of_unity_limit_test(xi, P, d, n_max);
    apply_exact_decision(r, true);
    return r;
}

LimitTestResult root_of_unity_limit_test_gaussian(const GaussianRational& xi, const Integer& p, long precision,
                                                  const std::vector<PadicNumber>& P, long d, int n_max)
{
    bool is_root = numeric::is_root_of_unity_gaussian(xi);
    std::optional<PadicNumber> embedded;
    if (xi.is_real()) {
        embedded = PadicNumber::from_rational(xi.re, p, precision);
    } else if (p % 4 == 1) {
        std::optional<PadicNumber> i = numeric::nth_root_padic(PadicNumber::from_rational(-1, p, precision), 2);
        if (i) {
            embedded = PadicNumber::from_rational(xi.re, p, precision) + PadicNumber::from_rational(xi.im, p, precision) * *i;
        }
    }
    LimitTestResult r;
    if (embedded && embedded->is_known_nonzero() && *embedded->valuation() == 0) {
        r = root_of_unity_limit_test(*embedded, P, d, n_max);
    }
    apply_exact_decision(r, is_root);
    if (is_root && r.valuations.empty()) r.verdict = LimitVerdict::Inconclusive;
    return r;
}

} // namespace piqlab::uniformize
