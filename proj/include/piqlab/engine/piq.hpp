#pragma once

#include "piqlab/dynamics/projective.hpp"
#include "piqlab/dynamics/reduction.hpp"
#include "piqlab/poly/bihom.hpp"

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace piqlab::engine {

using dynamics::ProjPoint;
using dynamics::RationalMap;
using PointPair = std::pair<ProjPoint, ProjPoint>;

enum class BaseField { Q, QI };
std::string to_string(BaseField k);

/// f x g acting on P^1 x P^1.
struct ProductSystem {
    RationalMap f;
    RationalMap g;
    BaseField field = BaseField::Q;

    /// Field deduced from the coefficients.
    static ProductSystem make(RationalMap f, RationalMap g);
    PointPair operator()(const PointPair& x) const { return {f(x.first), g(x.second)}; }
};

/// Closed subscheme Y of P^1 x P^1: the diagonal, a point, or a curve
/// Phi = 0 with Phi bihomogeneous (key (i, j) is x0^(a-i) x1^i y0^(b-j) y1^j).
class Subscheme {
public:
    enum class Kind { Diagonal, Point, Curve };

    static Subscheme diagonal();
    static Subscheme point(ProjPoint P, ProjPoint Q);
    /// Throws std::invalid_argument for Phi = 0; stores Phi normalized.
    static Subscheme curve(const poly::BiHomPoly& Phi);
    /// x1 y1 = 0: the lines {inf} x P^1 and P^1 x {inf}.
    static Subscheme lines_through_infinity();

    Kind kind() const { return kind_; }
    const ProjPoint& P() const { return P_; }
    const ProjPoint& Q() const { return Q_; }
    const poly::BiHomPoly& Phi() const { return Phi_; }

    bool contains(const PointPair& x) const;
    std::string to_string() const;

private:
    Kind kind_ = Kind::Diagonal;
    ProjPoint P_, Q_;
    poly::BiHomPoly Phi_;
};

/// Whether (f x g)(Y) is contained in Y.
bool check_invariant(const ProductSystem& sys, const Subscheme& Y);

/// Least s <= S_max with (f x g)^s(x) in Y; nullopt when there is none.
std::optional<int> first_entry_time(const ProductSystem& sys, const Subscheme& Y, const PointPair& x, int S_max);

struct ScanOptions {
    int jobs = 1;
    /// Tail members stored per level (all of them are counted).
    std::size_t keep_per_level = std::numeric_limits<std::size_t>::max();
};

/// First-entry statistics over all pairs of height <= H (rational points for
/// systems over Q, Gaussian points for systems over Q(i)).
struct TailScan {
    long height_bound = 0;
    int horizon = 0;
    std::size_t points = 0;
    /// tail_counts[s]: pairs whose first entry time is exactly s + 1, s = 0..horizon.
    std::vector<std::size_t> tail_counts;
    std::vector<std::vector<PointPair>> tails;
    std::size_t inside = 0;
    std::size_t never = 0;
};

/// Membership is decided along forward orbits. Orbits are first followed
/// modulo two 61-bit primes; a pair leaves the candidate list as soon as a
/// residue proves non-membership, and every remaining candidate is settled
/// by exact evaluation.
TailScan scan_tails(const ProductSystem& sys, const Subscheme& Y, long H, int S_max, const ScanOptions& opts = {});

/// Pairs of height <= H with first entry time s + 1. Throws
/// InvarianceViolated unless Y is invariant.
std::vector<PointPair> tail_set(const ProductSystem& sys, const Subscheme& Y, int s, long H,
                                const ScanOptions& opts = {});
/// The same set without the invariance requirement.
std::vector<PointPair> generalized_tail_set(const ProductSystem& sys, const Subscheme& Y, int s, long H,
                                            const ScanOptions& opts = {});

struct S0Result {
    /// nullopt: tails persist at S_max.
    std::optional<int> s0;
    TailScan scan;
};

/// Least s0 <= S_max with empty tails for every s in [s0, S_max] at height
/// <= H. Throws InvarianceViolated.
S0Result empirical_s0(const ProductSystem& sys, const Subscheme& Y, long H, int S_max, const ScanOptions& opts = {});

/// Self-map of a finite set with a marked subset Y.
struct FiniteDynSystem {
    std::vector<std::size_t> table;
    std::vector<bool> in_Y;

    std::size_t size() const { return table.size(); }
};

/// Least s0 with preimage^(s0+1)(Y) = preimage^s0(Y), by reverse breadth-first
/// search. Throws InvarianceViolated unless map(Y) is contained in Y.
int finite_stabilization(const FiniteDynSystem& sys);
/// |preimage^s(Y)| for s = 0..s_max.
std::vector<std::size_t> preimage_chain_sizes(const FiniteDynSystem& sys, int s_max);

struct ModpReport {
    long p = 0;
    /// n with fbar^n and gbar^n idempotent.
    long idempotent_exponent = 1;
    std::vector<long> fixed_f;
    std::vector<long> fixed_g;
    /// Residue-disc product decomposition: Fix(fbar^n) x Fix(gbar^n).
    std::vector<std::pair<long, long>> fixed_pairs;
    std::size_t y_size = 0;
    int s0 = 0;
};

/// Reduction of the system and of Y modulo a good prime p, stabilized on
/// the (p + 1)^2 point graph. Throws BadReduction.
ModpReport modp_piq_report(const ProductSystem& sys, const Subscheme& Y, long p);

/// The reduced system itself; state i * (p + 1) + j is the pair (i, j).
FiniteDynSystem reduce_system(const ProductSystem& sys, const Subscheme& Y, long p);

/// Least n >= 1 with h^n idempotent, common to all the given maps.
long idempotent_exponent(const std::vector<dynamics::FiniteMap>& maps);

} // namespace piqlab::engine
