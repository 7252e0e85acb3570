#pragma once

#include "piqlab/dynamics/projective.hpp"
#include "piqlab/engine/piq.hpp"
#include "piqlab/poly/division_polynomial.hpp"
#include "piqlab/poly/rational_function.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace piqlab::lattes {

using dynamics::ProjPoint;
using dynamics::RationalMap;
using numeric::GaussianRational;
using poly::QiPoly;
using poly::QiRationalFunction;

/// y^2 = x^3 + x with CM action [i](x, y) = (-x, i y).
struct CMCurve {
    static poly::WeierstrassCurve model() { return {1, 0}; }
    /// x o [i] = -x.
    static QiRationalFunction i_x_map();
    /// x o [n] over Q(i).
    static QiRationalFunction multiplication_x_map(int n);
};

/// Order-5 kernels in E[5]: ker(1 + 2i) and ker(1 - 2i).
enum class Eigen { OnePlusTwoI, OneMinusTwoI };

GaussianRational multiplier(Eigen e);

/// Monic quadratic whose roots are the x-coordinates of ker(alpha): the factor
/// of psi_5 on which x o [2] = -x and y o [2] = +i y (1 + 2i) or -i y (1 - 2i).
/// Throws ConstructionFailed when no such factor exists.
QiPoly kernel_polynomial(Eigen e);
inline QiPoly kernel_polynomial_1_plus_2i() { return kernel_polynomial(Eigen::OnePlusTwoI); }

/// Isogeny x-map with kernel polynomial h and its codomain y^2 = x^3 + A x + B.
struct VeluIsogeny {
    QiRationalFunction x_map;
    GaussianRational A;
    GaussianRational B;
};

VeluIsogeny velu_isogeny(const QiPoly& h);

/// The isogeny with kernel h followed by an isomorphism of its codomain with
/// y^2 = x^3 + x, as a degree-5 self-map of the x-line. The isomorphism is
/// fixed up to x -> -x. Throws ConstructionFailed when the codomain is not
/// isomorphic to the source over Q(i).
RationalMap velu_descend(const QiPoly& h);

/// Commuting degree-5 Lattes maps F, G descending 1 + 2i and 1 - 2i.
struct LattesPair {
    RationalMap F;
    RationalMap G;
    GaussianRational alpha{1, 2};
    GaussianRational beta{1, -2};
    QiPoly kernel_F;
    QiPoly kernel_G;
};

/// Kernels, Velu descent and unit twists: F o G = G o F = x o [5] exactly, and
/// F(x) ~ x / alpha^2 at infinity. Throws ConstructionFailed.
LattesPair build_lattes_pair();

/// Conditions (1)-(4) of the commuting-pair recipe for f = F x G, g = G x F and
/// Y = diagonal over Q(i).
struct RecipeReport {
    bool commute = false;      ///< (1) f o g = g o f
    bool invariant = false;    ///< (2) f(g(Y)) = Y
    bool proper = false;       ///< (3) Y cap g^n(Y) is a proper subset of Y for all n >= 1
    bool dense = false;        ///< (4) Y(K) Zariski dense
    std::string proper_method; ///< how (3) was decided
    bool applicable() const { return commute && invariant && proper && dense; }
};

/// With multipliers (alpha, beta), (3) reduces to alpha / beta not being a
/// root of unity; without them, F^n != G^n is checked for n <= check_depth.
RecipeReport verify_recipe(const RationalMap& F, const RationalMap& G,
                           const std::optional<std::pair<GaussianRational, GaussianRational>>& multipliers = {},
                           int check_depth = 4);
RecipeReport verify_recipe(const LattesPair& pair);

/// A point of the generalized tail at level s + 1 for f = F x G and Y = diagonal.
struct Witness {
    ProjPoint seed;
    int entry_time = 0;
    engine::PointPair x;
};

struct WitnessReport {
    std::vector<Witness> witnesses;
    std::size_t seeds_consumed = 0;
};

/// x = (G^(s+1) t, F^(s+1) t) for each seed t, kept when f^(s+1)(x) is on the
/// diagonal and f^i(x) is not for i <= s, both decided by exact evaluation.
/// Stops after max_witnesses accepted witnesses.
WitnessReport witness_points(const LattesPair& pair, int s, const std::vector<ProjPoint>& seeds,
                             std::size_t max_witnesses = std::numeric_limits<std::size_t>::max(), int jobs = 1);

/// The system F x G.
engine::ProductSystem lattes_system(const LattesPair& pair);

} // namespace piqlab::lattes
