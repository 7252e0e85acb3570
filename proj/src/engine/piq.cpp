#include "piqlab/engine/piq.hpp"

#include "piqlab/errors.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace piqlab::engine {

using dynamics::FiniteMap;
using numeric::GaussianInteger;
using numeric::GaussianRational;
using numeric::Integer;

std::string to_string(BaseField k) { return k == BaseField::Q ? "Q" : "Q(i)"; }

ProductSystem ProductSystem::make(RationalMap f, RationalMap g)
{
    ProductSystem sys{std::move(f), std::move(g), BaseField::Q};
    if (!sys.f.is_rational() || !sys.g.is_rational()) sys.field = BaseField::QI;
    return sys;
}

Subscheme Subscheme::diagonal() { return Subscheme(); }

Subscheme Subscheme::point(ProjPoint P, ProjPoint Q)
{
    Subscheme Y;
    Y.kind_ = Kind::Point;
    Y.P_ = std::move(P);
    Y.Q_ = std::move(Q);
    return Y;
}

Subscheme Subscheme::curve(const poly::BiHomPoly& Phi)
{
    if (Phi.is_zero()) throw std::invalid_argument("the zero polynomial does not cut out a curve");
    Subscheme Y;
    Y.kind_ = Kind::Curve;
    Y.Phi_ = Phi.normalized();
    return Y;
}

Subscheme Subscheme::lines_through_infinity()
{
    poly::BiHomPoly Phi(1, 1);
    Phi.add_term(1, 1, GaussianRational(1));
    return curve(Phi);
}

bool Subscheme::contains(const PointPair& x) const
{
    switch (kind_) {
    case Kind::Diagonal: return x.first == x.second;
    case Kind::Point: return x.first == P_ && x.second == Q_;
    case Kind::Curve: return Phi_.evaluate(x.first.x0, x.first.x1, x.second.x0, x.second.x1).is_zero();
    }
    return false;
}

std::string Subscheme::to_string() const
{
    switch (kind_) {
    case Kind::Diagonal: return "diagonal";
    case Kind::Point: return "point(" + P_.to_string() + ", " + Q_.to_string() + ")";
    case Kind::Curve: return "curve(" + Phi_.to_string() + ")";
    }
    return "?";
}

bool check_invariant(const ProductSystem& sys, const Subscheme& Y)
{
    switch (Y.kind()) {
    case Subscheme::Kind::Diagonal: return sys.f == sys.g;
    case Subscheme::Kind::Point: return sys.f(Y.P()) == Y.P() && sys.g(Y.Q()) == Y.Q();
    case Subscheme::Kind::Curve: {
        poly::BiHomPoly pulled = Y.Phi().substitute(sys.f.F0(), sys.f.F1(), sys.g.F0(), sys.g.F1());
        return poly::bihom_divides(Y.Phi(), pulled).divides;
    }
    }
    return false;
}

std::optional<int> first_entry_time(const ProductSystem& sys, const Subscheme& Y, const PointPair& x, int S_max)
{
    PointPair cur = x;
    for (int s = 0; s <= S_max; ++s) {
        if (Y.contains(cur)) return s;
        if (s < S_max) cur = sys(cur);
    }
    return std::nullopt;
}

namespace {

// ---- arithmetic modulo 61-bit primes q = 1 mod 4, with iota^2 = -1 ----

struct ModPrime {
    std::uint64_t q;
    std::uint64_t iota;
};

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t q)
{
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % q);
}

std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t q)
{
    std::uint64_t s = a + b;
    return s >= q ? s - q : s;
}

std::uint64_t reduce(const Integer& z, std::uint64_t q)
{
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), z.get_mpz_t(), Integer(std::to_string(q)).get_mpz_t());
    return std::stoull(r.get_str());
}

std::uint64_t reduce(const GaussianInteger& z, const ModPrime& m)
{
    return addmod(reduce(z.re, m.q), mulmod(reduce(z.im, m.q), m.iota, m.q), m.q);
}

const std::array<ModPrime, 2>& mod_primes()
{
    static const std::array<ModPrime, 2> primes = [] {
        std::array<ModPrime, 2> out{};
        // the two largest primes below 2^61 that are 1 mod 4
        Integer cand("2305843009213693952");
        for (auto& m : out) {
            do {
                cand -= 1;
            } while (cand % 4 != 1 || !numeric::is_probable_prime(cand));
            m.q = std::stoull(cand.get_str());
            // iota = a^((q-1)/4) for a quadratic non-residue a
            Integer e = (cand - 1) / 4;
            for (unsigned long a = 2;; ++a) {
                Integer A(a), r;
                mpz_powm(r.get_mpz_t(), A.get_mpz_t(), e.get_mpz_t(), cand.get_mpz_t());
                Integer sq = r * r % cand;
                if (sq == cand - 1) {
                    m.iota = std::stoull(r.get_str());
                    break;
                }
            }
        }
        return out;
    }();
    return primes;
}

struct ModCoord {
    std::uint64_t u, v;
};

struct ModMap {
    std::vector<std::uint64_t> a, b;
};

ModMap reduce_map(const RationalMap& f, const ModPrime& m)
{
    ModMap out;
    for (const auto& c : f.coeffs0()) out.a.push_back(reduce(c, m));
    for (const auto& c : f.coeffs1()) out.b.push_back(reduce(c, m));
    return out;
}

std::uint64_t horner(const std::vector<std::uint64_t>& c, std::uint64_t u, std::uint64_t v, std::uint64_t q)
{
    std::size_t n = c.size();
    std::uint64_t acc = c[n - 1];
    std::uint64_t vpow = v;
    for (std::size_t k = n - 1; k-- > 0;) {
        acc = addmod(mulmod(acc, u, q), mulmod(c[k], vpow, q), q);
        if (k > 0) vpow = mulmod(vpow, v, q);
    }
    return acc;
}

// orbits[point][s], s = 0..steps
std::vector<std::vector<ModCoord>> mod_orbits(const std::vector<ProjPoint>& pts, const RationalMap& f, int steps,
                                              const ModPrime& m)
{
    ModMap F = reduce_map(f, m);
    std::vector<std::vector<ModCoord>> out(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        ModCoord c{reduce(pts[i].x0, m), reduce(pts[i].x1, m)};
        out[i].push_back(c);
        for (int s = 0; s < steps; ++s) {
            c = {horner(F.a, c.u, c.v, m.q), horner(F.b, c.u, c.v, m.q)};
            out[i].push_back(c);
        }
    }
    return out;
}

bool degenerate(const ModCoord& c) { return c.u == 0 && c.v == 0; }

// false only when the residues prove (x, y) is not in Y
class ModMembership {
public:
    ModMembership(const Subscheme& Y, const ModPrime& m) : Y_(Y), m_(m)
    {
        if (Y.kind() == Subscheme::Kind::Point) {
            P_ = {reduce(Y.P().x0, m), reduce(Y.P().x1, m)};
            Q_ = {reduce(Y.Q().x0, m), reduce(Y.Q().x1, m)};
        } else if (Y.kind() == Subscheme::Kind::Curve) {
            for (const auto& [key, c] : Y.Phi().terms()) {
                GaussianInteger z(Integer(c.re.get_num()), Integer(c.im.get_num()));
                terms_.push_back({key.first, key.second, reduce(z, m)});
            }
        }
    }

    bool maybe(const ModCoord& x, const ModCoord& y) const
    {
        if (degenerate(x) || degenerate(y)) return true;
        std::uint64_t q = m_.q;
        switch (Y_.kind()) {
        case Subscheme::Kind::Diagonal: return mulmod(x.u, y.v, q) == mulmod(x.v, y.u, q);
        case Subscheme::Kind::Point:
            return mulmod(x.u, P_.v, q) == mulmod(x.v, P_.u, q) && mulmod(y.u, Q_.v, q) == mulmod(y.v, Q_.u, q);
        case Subscheme::Kind::Curve: {
            int a = Y_.Phi().degree_x(), b = Y_.Phi().degree_y();
            std::uint64_t acc = 0;
            for (const auto& t : terms_) {
                std::uint64_t mono = t.c;
                mono = mulmod(mono, pow(x.u, a - t.i), q);
                mono = mulmod(mono, pow(x.v, t.i), q);
                mono = mulmod(mono, pow(y.u, b - t.j), q);
                mono = mulmod(mono, pow(y.v, t.j), q);
                acc = addmod(acc, mono, q);
            }
            return acc == 0;
        }
        }
        return true;
    }

private:
    struct Term {
        int i, j;
        std::uint64_t c;
    };

    std::uint64_t pow(std::uint64_t base, int e) const
    {
        std::uint64_t r = 1;
        for (int k = 0; k < e; ++k) r = mulmod(r, base, m_.q);
        return r;
    }

    const Subscheme& Y_;
    ModPrime m_;
    ModCoord P_{}, Q_{};
    std::vector<Term> terms_;
};

class ExactOrbits {
public:
    ExactOrbits(const RationalMap& f, const std::vector<ProjPoint>& pts) : f_(f), pts_(pts) {}

    const ProjPoint& at(std::size_t i, int s)
    {
        auto& orbit = cache_[i];
        if (orbit.empty()) orbit.push_back(pts_[i]);
        while (static_cast<int>(orbit.size()) <= s) orbit.push_back(f_(orbit.back()));
        return orbit[static_cast<std::size_t>(s)];
    }

private:
    const RationalMap& f_;
    const std::vector<ProjPoint>& pts_;
    std::unordered_map<std::size_t, std::vector<ProjPoint>> cache_;
};

struct PartialScan {
    std::vector<std::size_t> counts;
    std::vector<std::vector<PointPair>> tails;
    std::size_t inside = 0;
    std::size_t never = 0;
};

} // namespace

TailScan scan_tails(const ProductSystem& sys, const Subscheme& Y, long H, int S_max, const ScanOptions& opts)
{
    if (S_max < 0) throw std::invalid_argument("horizon must be >= 0");
    std::vector<ProjPoint> pts =
        sys.field == BaseField::Q ? dynamics::enumerate_points(H) : dynamics::enumerate_gaussian_points(H);
    const int steps = S_max + 1;
    const auto& primes = mod_primes();
    std::array<std::vector<std::vector<ModCoord>>, 2> fx, gy;
    for (std::size_t k = 0; k < 2; ++k) {
        fx[k] = mod_orbits(pts, sys.f, steps, primes[k]);
        gy[k] = mod_orbits(pts, sys.g, steps, primes[k]);
    }
    std::array<ModMembership, 2> member{ModMembership(Y, primes[0]), ModMembership(Y, primes[1])};

    const std::size_t levels = static_cast<std::size_t>(S_max) + 1;
    auto work = [&](std::size_t begin, std::size_t end, PartialScan& out) {
        out.counts.assign(levels, 0);
        out.tails.assign(levels, {});
        ExactOrbits ox(sys.f, pts), oy(sys.g, pts);
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t j = 0; j < pts.size(); ++j) {
                std::optional<int> entry;
                for (int s = 0; s <= steps; ++s) {
                    const auto S = static_cast<std::size_t>(s);
                    if (!member[0].maybe(fx[0][i][S], gy[0][j][S])) continue;
                    if (!member[1].maybe(fx[1][i][S], gy[1][j][S])) continue;
                    if (Y.contains({ox.at(i, s), oy.at(j, s)})) {
                        entry = s;
                        break;
                    }
                }
                if (!entry) {
                    ++out.never;
                } else if (*entry == 0) {
                    ++out.inside;
                } else {
                    auto level = static_cast<std::size_t>(*entry - 1);
                    ++out.counts[level];
                    if (out.tails[level].size() < opts.keep_per_level) out.tails[level].push_back({pts[i], pts[j]});
                }
            }
        }
    };

    std::size_t jobs = static_cast<std::size_t>(std::max(1, opts.jobs));
    jobs = std::min(jobs, std::max<std::size_t>(1, pts.size()));
    std::vector<PartialScan> parts(jobs);
    std::size_t chunk = (pts.size() + jobs - 1) / jobs;
    if (jobs == 1) {
        work(0, pts.size(), parts[0]);
    } else {
        std::vector<std::thread> threads;
        for (std::size_t t = 0; t < jobs; ++t) {
            std::size_t begin = std::min(pts.size(), t * chunk), end = std::min(pts.size(), begin + chunk);
            threads.emplace_back(work, begin, end, std::ref(parts[t]));
        }
        for (auto& th : threads) th.join();
    }

    TailScan scan;
    scan.height_bound = H;
    scan.horizon = S_max;
    scan.points = pts.size();
    scan.tail_counts.assign(levels, 0);
    scan.tails.assign(levels, {});
    for (const auto& part : parts) {
        scan.inside += part.inside;
        scan.never += part.never;
        for (std::size_t s = 0; s < levels; ++s) {
            scan.tail_counts[s] += part.counts[s];
            for (const auto& x : part.tails[s]) {
                if (scan.tails[s].size() < opts.keep_per_level) scan.tails[s].push_back(x);
            }
        }
    }
    return scan;
}

std::vector<PointPair> generalized_tail_set(const ProductSystem& sys, const Subscheme& Y, int s, long H,
                                            const ScanOptions& opts)
{
    if (s < 0) throw std::invalid_argument("level must be >= 0");
    TailScan scan = scan_tails(sys, Y, H, s, opts);
    return scan.tails[static_cast<std::size_t>(s)];
}

std::vector<PointPair> tail_set(const ProductSystem& sys, const Subscheme& Y, int s, long H,
                                const ScanOptions& opts)
{
    if (!check_invariant(sys, Y)) throw InvarianceViolated("Y is not invariant under the system");
    return generalized_tail_set(sys, Y, s, H, opts);
}

S0Result empirical_s0(const ProductSystem& sys, const Subscheme& Y, long H, int S_max, const ScanOptions& opts)
{
    if (!check_invariant(sys, Y)) throw InvarianceViolated("Y is not invariant under the system");
    S0Result out;
    out.scan = scan_tails(sys, Y, H, S_max, opts);
    int last = -1;
    for (int s = 0; s <= S_max; ++s) {
        if (out.scan.tail_counts[static_cast<std::size_t>(s)] > 0) last = s;
    }
    if (last == S_max) {
        out.s0 = std::nullopt;
    } else {
        out.s0 = last + 1;
    }
    return out;
}

namespace {

std::vector<int> entry_levels(const FiniteDynSystem& sys)
{
    std::size_t n = sys.size();
    if (sys.in_Y.size() != n) throw std::invalid_argument("subset mask does not match the ground set");
    std::vector<std::vector<std::size_t>> pre(n);
    for (std::size_t x = 0; x < n; ++x) {
        if (sys.table[x] >= n) throw std::invalid_argument("map leaves the ground set");
        pre[sys.table[x]].push_back(x);
    }
    for (std::size_t y = 0; y < n; ++y) {
        if (sys.in_Y[y] && !sys.in_Y[sys.table[y]]) throw InvarianceViolated("map(Y) is not contained in Y");
    }
    std::vector<int> level(n, -1);
    std::deque<std::size_t> queue;
    for (std::size_t y = 0; y < n; ++y) {
        if (sys.in_Y[y]) {
            level[y] = 0;
            queue.push_back(y);
        }
    }
    while (!queue.empty()) {
        std::size_t y = queue.front();
        queue.pop_front();
        for (std::size_t x : pre[y]) {
            if (level[x] >= 0) continue;
            level[x] = level[y] + 1;
            queue.push_back(x);
        }
    }
    return level;
}

} // namespace

int finite_stabilization(const FiniteDynSystem& sys)
{
    std::vector<int> level = entry_levels(sys);
    int s0 = 0;
    for (int l : level) s0 = std::max(s0, l);
    return s0;
}

std::vector<std::size_t> preimage_chain_sizes(const FiniteDynSystem& sys, int s_max)
{
    std::vector<int> level = entry_levels(sys);
    std::vector<std::size_t> out(static_cast<std::size_t>(s_max) + 1, 0);
    for (int l : level) {
        if (l < 0) continue;
        for (int s = l; s <= s_max; ++s) ++out[static_cast<std::size_t>(s)];
    }
    return out;
}

FiniteDynSystem reduce_system(const ProductSystem& sys, const Subscheme& Y, long p)
{
    if (sys.field != BaseField::Q) throw BadReduction("reduction mod p is implemented for systems over Q");
    FiniteMap fb = dynamics::reduce_mod_p(sys.f, p);
    FiniteMap gb = dynamics::reduce_mod_p(sys.g, p);
    const auto n = static_cast<std::size_t>(p + 1);
    FiniteDynSystem out;
    out.table.resize(n * n);
    out.in_Y.assign(n * n, false);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out.table[i * n + j] = static_cast<std::size_t>(fb(static_cast<long>(i))) * n +
                                   static_cast<std::size_t>(gb(static_cast<long>(j)));
        }
    }
    switch (Y.kind()) {
    case Subscheme::Kind::Diagonal:
        for (std::size_t i = 0; i < n; ++i) out.in_Y[i * n + i] = true;
        break;
    case Subscheme::Kind::Point: {
        auto i = static_cast<std::size_t>(dynamics::reduce_point(Y.P(), p));
        auto j = static_cast<std::size_t>(dynamics::reduce_point(Y.Q(), p));
        out.in_Y[i * n + j] = true;
        break;
    }
    case Subscheme::Kind::Curve: {
        for (const auto& [key, c] : Y.Phi().terms()) {
            if (!c.is_real()) throw BadReduction("curve is not defined over Q");
        }
        auto coord = [&](std::size_t i) {
            return i == n - 1 ? std::make_pair(Integer(1), Integer(0)) : std::make_pair(Integer(i), Integer(1));
        };
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                auto [x0, x1] = coord(i);
                auto [y0, y1] = coord(j);
                GaussianInteger v = Y.Phi().evaluate(GaussianInteger(x0), GaussianInteger(x1), GaussianInteger(y0),
                                                     GaussianInteger(y1));
                Integer r;
                mpz_fdiv_r_ui(r.get_mpz_t(), v.re.get_mpz_t(), static_cast<unsigned long>(p));
                out.in_Y[i * n + j] = r == 0;
            }
        }
        break;
    }
    }
    return out;
}

long idempotent_exponent(const std::vector<FiniteMap>& maps)
{
    long L = 1;
    long T = 0;
    for (const auto& h : maps) {
        for (long x = 0; x < h.size(); ++x) {
            // walk until a repeat: x_mu is the first cycle element, lambda the cycle length
            std::vector<long> seen(static_cast<std::size_t>(h.size()), -1);
            long cur = x;
            long step = 0;
            while (seen[static_cast<std::size_t>(cur)] < 0) {
                seen[static_cast<std::size_t>(cur)] = step++;
                cur = h(cur);
            }
            long mu = seen[static_cast<std::size_t>(cur)];
            long lambda = step - mu;
            L = std::lcm(L, lambda);
            T = std::max(T, mu);
        }
    }
    long n = L;
    while (n < std::max(T, 1L)) n += L;
    return n;
}

ModpReport modp_piq_report(const ProductSystem& sys, const Subscheme& Y, long p)
{
    if (sys.field != BaseField::Q) throw BadReduction("reduction mod p is implemented for systems over Q");
    FiniteMap fb = dynamics::reduce_mod_p(sys.f, p);
    FiniteMap gb = dynamics::reduce_mod_p(sys.g, p);
    ModpReport r;
    r.p = p;
    r.idempotent_exponent = idempotent_exponent({fb, gb});
    auto power = [&](const FiniteMap& h) {
        FiniteMap out = FiniteMap::identity(p);
        for (long k = 0; k < r.idempotent_exponent; ++k) out = dynamics::compose(h, out);
        return out;
    };
    r.fixed_f = power(fb).fixed_points();
    r.fixed_g = power(gb).fixed_points();
    for (long a : r.fixed_f) {
        for (long b : r.fixed_g) r.fixed_pairs.emplace_back(a, b);
    }
    FiniteDynSystem reduced = reduce_system(sys, Y, p);
    r.y_size = static_cast<std::size_t>(std::count(reduced.in_Y.begin(), reduced.in_Y.end(), true));
    r.s0 = finite_stabilization(reduced);
    return r;
}

} // namespace piqlab::engine
