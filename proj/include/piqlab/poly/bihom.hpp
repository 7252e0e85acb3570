#pragma once

#include "piqlab/numeric/gaussian.hpp"
#include "piqlab/poly/binary_form.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>

namespace piqlab::poly {

/// Bihomogeneous polynomial of bidegree (a, b) on P^1 x P^1 over Q(i).
/// The key (i, j) addresses the monomial x0^(a-i) x1^i y0^(b-j) y1^j.
/// Points are (x0 : x1) with affine coordinate z = x0 / x1, so the point at
/// infinity is (1 : 0).
class BiHomPoly {
public:
    using Key = std::pair<int, int>;

    BiHomPoly() = default;
    BiHomPoly(int deg_x, int deg_y) : a_(deg_x), b_(deg_y) {}
    BiHomPoly(int deg_x, int deg_y, std::map<Key, GaussianRational> terms);

    /// x0*y1 - x1*y0.
    static BiHomPoly diagonal();
    /// Product form(x) * form(y).
    static BiHomPoly outer(const BinaryForm<GaussianRational>& fx, const BinaryForm<GaussianRational>& fy);

    int degree_x() const { return a_; }
    int degree_y() const { return b_; }
    const std::map<Key, GaussianRational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(int i, int j, const GaussianRational& c);

    friend BiHomPoly operator+(const BiHomPoly& p, const BiHomPoly& q);
    friend BiHomPoly operator-(const BiHomPoly& p, const BiHomPoly& q);
    friend BiHomPoly operator*(const BiHomPoly& p, const BiHomPoly& q);
    friend BiHomPoly operator*(const BiHomPoly& p, const GaussianRational& s);
    friend bool operator==(const BiHomPoly& p, const BiHomPoly& q)
    {
        return p.a_ == q.a_ && p.b_ == q.b_ && p.terms_ == q.terms_;
    }

    /// Scalar multiple that is monic in the lexicographically largest key, then
    /// scaled to Z[i] coefficients with trivial rational content.
    BiHomPoly normalized() const;

    /// Phi(F0(x), F1(x); G0(y), G1(y)) for forms of equal degree per side.
    BiHomPoly substitute(const BinaryForm<GaussianRational>& F0, const BinaryForm<GaussianRational>& F1,
                         const BinaryForm<GaussianRational>& G0, const BinaryForm<GaussianRational>& G1) const;

    GaussianRational evaluate(const GaussianRational& x0, const GaussianRational& x1, const GaussianRational& y0,
                              const GaussianRational& y1) const;
    numeric::GaussianInteger evaluate(const numeric::GaussianInteger& x0, const numeric::GaussianInteger& x1,
                                      const numeric::GaussianInteger& y0,
                                      const numeric::GaussianInteger& y1) const;

    std::string to_string() const;

private:
    void trim();

    int a_ = 0;
    int b_ = 0;
    std::map<Key, GaussianRational> terms_;
};

struct DivisionResult {
    bool divides = false;
    std::optional<BiHomPoly> cofactor;
};

/// Whether Psi = Phi * Theta for a bihomogeneous Theta; the cofactor is exact.
DivisionResult bihom_divides(const BiHomPoly& phi, const BiHomPoly& psi);

} // namespace piqlab::poly
