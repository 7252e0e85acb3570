#include "piqlab/series/polydisc.hpp"

#include "piqlab/errors.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace piqlab::series {

int total_degree(const MultiIndex& I)
{
    return std::accumulate(I.begin(), I.end(), 0);
}

Radius Radius::uniform(int nvars, const Rational& m)
{
    return Radius{std::vector<Rational>(static_cast<std::size_t>(nvars), m)};
}

Rational Radius::weight(const MultiIndex& I) const
{
    if (I.size() != exponents.size()) throw std::invalid_argument("radius and multi-index sizes differ");
    Rational w = 0;
    for (std::size_t k = 0; k < I.size(); ++k) w += exponents[k] * I[k];
    return w;
}

std::vector<MultiIndex> indices_up_to(int nvars, int D)
{
    std::vector<MultiIndex> out;
    MultiIndex cur(static_cast<std::size_t>(nvars), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
        if (pos + 1 == cur.size()) {
            cur[pos] = left;
            out.push_back(cur);
            return;
        }
        for (int k = left; k >= 0; --k) {
            cur[pos] = k;
            rec(pos + 1, left - k);
        }
    };
    for (int d = 0; d <= D; ++d) {
        if (nvars == 0) break;
        rec(0, d);
    }
    return out;
}

namespace {

MultiIndex add_indices(const MultiIndex& a, const MultiIndex& b)
{
    MultiIndex c(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) c[k] = a[k] + b[k];
    return c;
}

// -log_p |a| exactly for known coefficients, as a lower bound otherwise
Rational coefficient_exponent(const PadicNumber& a)
{
    return Rational(a.valuation_bound());
}

} // namespace

PolydiscSeries::PolydiscSeries(Integer p, int nvars, int truncation) : p_(std::move(p)), n_(nvars), D_(truncation)
{
    if (p_ < 2) throw std::invalid_argument("series prime must be >= 2");
    if (n_ < 1) throw std::invalid_argument("series needs at least one variable");
    if (D_ < 0) throw std::invalid_argument("negative truncation degree");
}

PolydiscSeries PolydiscSeries::from_rational_terms(const Integer& p, int nvars, int truncation,
                                                   const std::map<MultiIndex, Rational>& terms, long precision)
{
    PolydiscSeries f(p, nvars, truncation);
    for (const auto& [I, c] : terms) {
        if (c == 0) continue;
        f.set_coefficient(I, PadicNumber::from_rational(c, p, precision));
    }
    return f;
}

PolydiscSeries PolydiscSeries::constant(const Integer& p, int nvars, int truncation, const PadicNumber& c)
{
    PolydiscSeries f(p, nvars, truncation);
    f.set_coefficient(MultiIndex(static_cast<std::size_t>(nvars), 0), c);
    return f;
}

PadicNumber PolydiscSeries::coefficient(const MultiIndex& I) const
{
    auto it = terms_.find(I);
    return it == terms_.end() ? PadicNumber::zero(p_) : it->second;
}

void PolydiscSeries::set_coefficient(const MultiIndex& I, const PadicNumber& c)
{
    if (static_cast<int>(I.size()) != n_) throw std::invalid_argument("multi-index has the wrong length");
    for (int e : I) {
        if (e < 0) throw std::invalid_argument("negative exponent in multi-index");
    }
    if (total_degree(I) > D_) throw std::invalid_argument("coefficient above the truncation degree");
    if (c.prime() != p_) throw std::invalid_argument("coefficient over a different prime");
    if (c.is_exact_zero()) {
        terms_.erase(I);
    } else {
        terms_[I] = c;
    }
}

void PolydiscSeries::add_tail(const Rational& tau, const Radius& reference)
{
    if (static_cast<int>(reference.size()) != n_) throw std::invalid_argument("tail radius has the wrong length");
    if (tail_ && !(tail_radius_ == reference)) {
        // transport the old bound to the new reference, which must be smaller
        tail_ = std::min(*tail_exponent_at(reference), tau);
        tail_radius_ = reference;
        return;
    }
    tail_ = tail_ ? std::min(*tail_, tau) : tau;
    tail_radius_ = reference;
}

std::optional<Rational> PolydiscSeries::tail_exponent_at(const Radius& s) const
{
    if (!tail_) return std::nullopt;
    if (s.size() != tail_radius_.size()) throw std::invalid_argument("radius has the wrong length");
    Rational min_delta = 0;
    bool first = true;
    for (std::size_t k = 0; k < s.size(); ++k) {
        Rational delta = s.exponents[k] - tail_radius_.exponents[k];
        if (delta < 0) throw TailDominates("radius exceeds the reference radius of the tail bound");
        if (first || delta < min_delta) min_delta = delta;
        first = false;
    }
    // omitted terms have total degree > D
    return *tail_ + min_delta * (D_ + 1);
}

Rational PolydiscSeries::norm_exponent_lower_bound(const Radius& s) const
{
    std::optional<Rational> best = tail_exponent_at(s);
    for (const auto& [I, c] : terms_) {
        Rational e = coefficient_exponent(c) + s.weight(I);
        if (!best || e < *best) best = e;
    }
    if (!best) throw std::domain_error("norm bound of the zero series");
    return *best;
}

PolydiscSeries PolydiscSeries::truncated(int D, const Radius& reference) const
{
    PolydiscSeries out(p_, n_, std::min(D, D_));
    out.tail_ = tail_;
    out.tail_radius_ = tail_radius_;
    const Radius& ref = tail_ ? tail_radius_ : reference;
    std::optional<Rational> dropped;
    for (const auto& [I, c] : terms_) {
        if (total_degree(I) <= out.D_) {
            out.terms_[I] = c;
        } else {
            Rational e = coefficient_exponent(c) + ref.weight(I);
            dropped = dropped ? std::min(*dropped, e) : e;
        }
    }
    if (dropped) out.add_tail(*dropped, ref);
    return out;
}

void PolydiscSeries::check_compatible(const PolydiscSeries& o) const
{
    if (p_ != o.p_) throw std::invalid_argument("series over different primes");
    if (n_ != o.n_) throw std::invalid_argument("series in different numbers of variables");
}

Radius PolydiscSeries::reference_for(const PolydiscSeries& o) const
{
    if (tail_ && o.tail_ && !(tail_radius_ == o.tail_radius_)) {
        throw std::invalid_argument("tail bounds refer to different radii");
    }
    if (tail_) return tail_radius_;
    if (o.tail_) return o.tail_radius_;
    return Radius::uniform(n_, 0);
}

PolydiscSeries operator+(const PolydiscSeries& f, const PolydiscSeries& g)
{
    f.check_compatible(g);
    Radius ref = f.reference_for(g);
    int D;
    if (!f.tail_ && !g.tail_) {
        D = std::max(f.D_, g.D_);
    } else if (!f.tail_) {
        D = g.D_;
    } else if (!g.tail_) {
        D = f.D_;
    } else {
        D = std::min(f.D_, g.D_);
    }
    PolydiscSeries sum(f.p_, f.n_, std::max(f.D_, g.D_));
    sum.terms_ = f.terms_;
    for (const auto& [I, c] : g.terms_) {
        auto it = sum.terms_.find(I);
        if (it == sum.terms_.end()) {
            sum.terms_[I] = c;
        } else {
            it->second += c;
            if (it->second.is_exact_zero()) sum.terms_.erase(it);
        }
    }
    if (f.tail_) sum.add_tail(*f.tail_exponent_at(ref), ref);
    if (g.tail_) sum.add_tail(*g.tail_exponent_at(ref), ref);
    return sum.truncated(D, ref);
}

PolydiscSeries PolydiscSeries::operator-() const
{
    PolydiscSeries out = *this;
    for (auto& [I, c] : out.terms_) c = -c;
    return out;
}

PolydiscSeries operator-(const PolydiscSeries& f, const PolydiscSeries& g)
{
    return f + (-g);
}

PolydiscSeries operator*(const PolydiscSeries& f, const PolydiscSeries& g)
{
    f.check_compatible(g);
    Radius ref = f.reference_for(g);
    int D;
    if (!f.tail_ && !g.tail_) {
        D = f.D_ + g.D_;
    } else if (!f.tail_) {
        D = g.D_;
    } else if (!g.tail_) {
        D = f.D_;
    } else {
        D = std::min(f.D_, g.D_);
    }
    PolydiscSeries prod(f.p_, f.n_, f.D_ + g.D_);
    for (const auto& [I, a] : f.terms_) {
        for (const auto& [J, b] : g.terms_) {
            MultiIndex K = add_indices(I, J);
            PadicNumber c = a * b;
            auto it = prod.terms_.find(K);
            if (it == prod.terms_.end()) {
                if (!c.is_exact_zero()) prod.terms_[K] = c;
            } else {
                it->second += c;
                if (it->second.is_exact_zero()) prod.terms_.erase(it);
            }
        }
    }
    // omitted products involving a tail
    if (f.tail_ && !g.is_exact_zero()) prod.add_tail(*f.tail_exponent_at(ref) + g.norm_exponent_lower_bound(ref), ref);
    if (g.tail_ && !f.is_exact_zero()) prod.add_tail(*g.tail_exponent_at(ref) + f.norm_exponent_lower_bound(ref), ref);
    PolydiscSeries out = prod.truncated(D, ref);
    out.D_ = D;
    return out;
}

PolydiscSeries PolydiscSeries::scaled(const PadicNumber& c) const
{
    if (c.is_exact_zero()) return PolydiscSeries(p_, n_, D_);
    PolydiscSeries out = *this;
    for (auto& [I, a] : out.terms_) a *= c;
    if (out.tail_) *out.tail_ += Rational(c.valuation_bound());
    return out;
}

std::string PolydiscSeries::to_string() const
{
    std::ostringstream os;
    bool first = true;
    for (const auto& [I, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.to_string() << ")";
        for (std::size_t k = 0; k < I.size(); ++k) {
            if (I[k] == 0) continue;
            os << "*T" << k + 1;
            if (I[k] > 1) os << "^" << I[k];
        }
    }
    if (first) os << "0";
    if (tail_) os << " + tail(p^-" << tail_->get_str() << ")";
    return os.str();
}

namespace {

struct NormData {
    Rational exponent;
    int ord = 0;
    std::vector<MultiIndex> attaining;
};

NormData certified_norm(const PolydiscSeries& f, const Radius& r)
{
    if (f.is_exact_zero()) throw std::domain_error("Gauss norm of the zero series");
    if (static_cast<int>(r.size()) != f.nvars()) throw std::invalid_argument("radius has the wrong length");
    for (const auto& m : r.exponents) {
        if (m < 0) throw std::invalid_argument("radius exponents must be >= 0");
    }
    std::optional<Rational> best;
    std::optional<Rational> uncertain = f.tail_exponent_at(r);
    for (const auto& [I, c] : f.terms()) {
        Rational e = coefficient_exponent(c) + r.weight(I);
        if (c.is_known_nonzero()) {
            if (!best || e < *best) best = e;
        } else if (!uncertain || e < *uncertain) {
            uncertain = e;
        }
    }
    if (!best) throw TailDominates("no coefficient is known to be nonzero");
    if (uncertain && *uncertain <= *best) {
        throw TailDominates("uncertain terms may reach the Gauss norm; raise the truncation or precision");
    }
    NormData out;
    out.exponent = *best;
    for (const auto& [I, c] : f.terms()) {
        if (!c.is_known_nonzero()) continue;
        if (coefficient_exponent(c) + r.weight(I) == *best) {
            out.attaining.push_back(I);
            out.ord = std::max(out.ord, total_degree(I));
        }
    }
    return out;
}

} // namespace

Rational gauss_norm(const PolydiscSeries& f, const Radius& r)
{
    return certified_norm(f, r).exponent;
}

int ord(const PolydiscSeries& f, const Radius& r)
{
    return certified_norm(f, r).ord;
}

std::set<MultiIndex> staircase_set(const PolydiscSeries& f, const Radius& r, int grid_depth)
{
    if (grid_depth < 0) throw std::invalid_argument("negative grid depth");
    std::set<MultiIndex> out;
    for (const auto& I : certified_norm(f, r).attaining) out.insert(I);
    std::size_t n = r.size();
    std::vector<int> k(n, 0);
    while (true) {
        Radius s = r;
        for (std::size_t i = 0; i < n; ++i) s.exponents[i] += k[i];
        for (const auto& I : certified_norm(f, s).attaining) out.insert(I);
        std::size_t pos = 0;
        while (pos < n && k[pos] == grid_depth) k[pos++] = 0;
        if (pos == n) break;
        ++k[pos];
    }
    return out;
}

int prime_factor_bound(const PolydiscSeries& f, const Radius& r)
{
    return ord(f, r);
}

PolydiscSeries certified_inverse(const PolydiscSeries& f, const Radius& r)
{
    NormData norm = certified_norm(f, r);
    if (norm.ord != 0) throw NotDivisible("constant term does not dominate; the series is not a unit");
    MultiIndex zero(static_cast<std::size_t>(f.nvars()), 0);
    PadicNumber a0 = f.coefficient(zero);
    PadicNumber a0_inv = a0.inverse();
    int D = f.truncation();

    // u = f / a0 - 1, stored part only
    std::map<MultiIndex, PadicNumber> u;
    for (const auto& [I, c] : f.terms()) {
        if (I != zero) u[I] = c * a0_inv;
    }
    // ||u||_r <= p^(-delta) with delta > 0 since the constant term dominates strictly
    std::optional<Rational> rest = f.tail_exponent_at(r);
    for (const auto& [I, c] : f.terms()) {
        if (I == zero) continue;
        Rational e = coefficient_exponent(c) + r.weight(I);
        if (!rest || e < *rest) rest = e;
    }

    auto multiply_truncated = [&](const std::map<MultiIndex, PadicNumber>& a,
                                  const std::map<MultiIndex, PadicNumber>& b) {
        std::map<MultiIndex, PadicNumber> out;
        for (const auto& [I, x] : a) {
            for (const auto& [J, y] : b) {
                if (total_degree(I) + total_degree(J) > D) continue;
                MultiIndex K = add_indices(I, J);
                auto it = out.find(K);
                if (it == out.end()) {
                    out.emplace(K, x * y);
                } else {
                    it->second += x * y;
                }
            }
        }
        return out;
    };

    std::map<MultiIndex, PadicNumber> neg_u;
    for (const auto& [I, c] : u) neg_u[I] = -c;
    std::map<MultiIndex, PadicNumber> acc{{zero, PadicNumber::from_rational(1, f.prime(), a0.precision())}};
    std::map<MultiIndex, PadicNumber> power = acc;
    for (int k = 1; k <= D && !neg_u.empty(); ++k) {
        power = multiply_truncated(power, neg_u);
        if (power.empty()) break;
        for (const auto& [I, c] : power) {
            auto it = acc.find(I);
            if (it == acc.end()) {
                acc.emplace(I, c);
            } else {
                it->second += c;
            }
        }
    }
    PolydiscSeries inv(f.prime(), f.nvars(), D);
    for (const auto& [I, c] : acc) {
        PadicNumber v = c * a0_inv;
        if (!v.is_exact_zero()) inv.set_coefficient(I, v);
    }
    // omitted terms come from (-u)^k, k >= 1, so they are bounded by |a0|^-1 p^-delta
    if (rest) inv.add_tail(-norm.exponent + (*rest - norm.exponent), r);
    return inv;
}

GaussianRational ExactSeries::coefficient(const MultiIndex& I) const
{
    auto it = terms.find(I);
    return it == terms.end() ? GaussianRational(0) : it->second;
}

ExactSeries ExactSeries::truncated(int D) const
{
    ExactSeries out{nvars, {}};
    for (const auto& [I, c] : terms) {
        if (total_degree(I) <= D && !c.is_zero()) out.terms[I] = c;
    }
    return out;
}

ExactSeries operator*(const ExactSeries& f, const ExactSeries& g)
{
    if (f.nvars != g.nvars) throw std::invalid_argument("series in different numbers of variables");
    ExactSeries out{f.nvars, {}};
    for (const auto& [I, a] : f.terms) {
        for (const auto& [J, b] : g.terms) out.terms[add_indices(I, J)] += a * b;
    }
    for (auto it = out.terms.begin(); it != out.terms.end();) {
        it = it->second.is_zero() ? out.terms.erase(it) : std::next(it);
    }
    return out;
}

DescentResult divisibility_descent_check(const ExactSeries& f, const ExactSeries& h, int D)
{
    if (f.nvars != h.nvars) throw std::invalid_argument("series in different numbers of variables");
    if (D < 0) throw std::invalid_argument("negative truncation degree");
    MultiIndex zero(static_cast<std::size_t>(f.nvars), 0);
    GaussianRational f0 = f.coefficient(zero);
    if (f0.is_zero()) throw std::invalid_argument("divisor must have a nonzero constant term");
    GaussianRational f0_inv = f0.inverse();

    DescentResult result;
    result.quotient.nvars = f.nvars;
    auto& g = result.quotient.terms;
    for (const auto& K : indices_up_to(f.nvars, D)) {
        GaussianRational acc = h.coefficient(K);
        for (const auto& [I, a] : f.terms) {
            if (I == zero) continue;
            MultiIndex J(K.size());
            bool inside = true;
            for (std::size_t k = 0; k < K.size(); ++k) {
                J[k] = K[k] - I[k];
                if (J[k] < 0) inside = false;
            }
            if (!inside) continue;
            auto it = g.find(J);
            if (it != g.end()) acc -= a * it->second;
        }
        GaussianRational c = acc * f0_inv;
        if (!c.is_zero()) g[K] = c;
    }
    if (!((f * result.quotient).truncated(D) == h.truncated(D))) {
        throw NotDivisible("quotient does not reproduce the dividend");
    }
    for (const auto& [I, c] : g) {
        if (!c.is_real()) {
            result.verdict = DescentVerdict::NotDivisibleWithinBase;
            result.witness = I;
            break;
        }
    }
    return result;
}

} // namespace piqlab::series
