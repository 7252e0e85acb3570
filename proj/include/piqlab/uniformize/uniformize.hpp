#pragma once

#include "piqlab/numeric/gaussian.hpp"
#include "piqlab/numeric/padic.hpp"
#include "piqlab/series/polydisc.hpp"

#include <optional>
#include <string>
#include <vector>

namespace piqlab::uniformize {

using numeric::GaussianRational;
using numeric::Integer;
using numeric::PadicNumber;
using numeric::Rational;
using series::PolydiscSeries;
using series::Radius;

/// One-variable germ F(z) = a_0 + a_1 z + ... on the residue disc pZ_p.
/// Coefficients are p-adic integers and |a_0| < 1, so F maps pZ_p to itself.
class Germ {
public:
    Germ() = default;
    /// Throws std::invalid_argument when the invariants fail.
    explicit Germ(PolydiscSeries F);

    static Germ from_rational(const Integer& p, const std::vector<Rational>& coeffs, int truncation, long precision);

    const PolydiscSeries& series() const { return F_; }
    const Integer& prime() const { return F_.prime(); }
    int truncation() const { return F_.truncation(); }
    PadicNumber coefficient(int k) const { return F_.coefficient({k}); }

    PadicNumber evaluate(const PadicNumber& w) const;
    /// F'(w) from the stored terms.
    PadicNumber derivative_at(const PadicNumber& w) const;
    /// G(w + c) - c, the germ seen from the point c in pZ_p.
    Germ conjugated_by_translation(const PadicNumber& c) const;

private:
    PolydiscSeries F_;
};

/// phi with F o phi = phi o model, where the model is z -> lambda z or z -> z^d.
struct Conjugacy {
    PolydiscSeries phi;
    /// Disc radii as exponents: |z| <= p^-source_exponent maps onto
    /// |z| <= p^-target_exponent.
    Rational source_exponent;
    Rational target_exponent;
    bool certified = false;
    /// Tracked precision e: the conjugacy equation is known modulo p^e on the disc.
    Rational precision_exponent;
    /// Lower bound on -log_p of the functional-equation residual on the disc.
    Rational residual_exponent;
    bool residual_within_certificate = false;
};

/// Unique fixed point of a contracting germ in pZ_p, by Newton iteration.
/// Throws PrecisionLoss when |G'(0)| < 1 or |G(0)| < 1 cannot be certified.
PadicNumber find_attracting_fixed_point(const Germ& G);

/// phi(lambda z) = F(phi(z)) modulo z^(D+1), phi'(0) = 1, for F(0) = 0 and
/// 0 < |F'(0)| < 1.
Conjugacy koenigs_linearize(const Germ& F, int D);

/// F(phi(z)) = phi(z^d) modulo z^(D+1) for F = a_d z^d + ..., d >= 2. Throws
/// ExtensionRequired when a_d has no (d-1)-th root in Q_p.
Conjugacy boettcher_coordinate(const Germ& F, int D);

/// Whether the linear term strictly dominates phi on the disc of radius s:
/// |c_1| s > |c_k| s^k for every stored k >= 2 and the tail.
bool certify_isometry(const PolydiscSeries& phi, const Radius& s);

enum class LocalCase { Case1, Case2a, Case2b, Case3a, Case3b };
std::string to_string(LocalCase c);

/// Case table for F x G on a product of residue discs. Derivatives that are
/// not units are taken at the attracting fixed point; a derivative that is
/// indistinguishable from zero at the working precision counts as zero.
LocalCase classify_local_case(const Germ& F, const Germ& G);

enum class LimitVerdict { ConvergesToZero, BoundedAway, Inconclusive };
std::string to_string(LimitVerdict v);

struct LimitTestResult {
    LimitVerdict verdict = LimitVerdict::Inconclusive;
    /// Lower bounds on v_p(P(xi^(d^n))), n = 0..n_max (kInfinity for exact zeros).
    std::vector<long> valuations;
    /// Set when xi was supplied exactly.
    std::optional<bool> root_of_unity;
};

/// Tracks |P(xi^(d^n))| for n = 0..n_max. ConvergesToZero when the last two
/// values are zero to the working precision; BoundedAway when the second half
/// of the run is pinned at one finite positive valuation (the distance to a
/// root of P never shrinks), which cannot happen for a root of unity xi.
LimitTestResult root_of_unity_limit_test(const PadicNumber& xi, const std::vector<PadicNumber>& P, long d,
                                         int n_max);
/// Teichmueller input: xi is a root of unity by construction.
LimitTestResult root_of_unity_limit_test_teichmuller(const Integer& residue, const Integer& p, long precision,
                                                     const std::vector<PadicNumber>& P, long d, int n_max);
/// Gaussian rational input: the exact decision comes from the unit group of
/// Q(i). The numeric run needs i in Q_p (p = 1 mod 4) unless xi is rational.
LimitTestResult root_of_unity_limit_test_gaussian(const GaussianRational& xi, const Integer& p, long precision,
                                                  const std::vector<PadicNumber>& P, long d, int n_max);

} // namespace piqlab::uniformize
