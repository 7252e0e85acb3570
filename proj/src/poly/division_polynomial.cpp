#include "piqlab/poly/division_polynomial.hpp"

#include <map>
#include <stdexcept>

namespace piqlab::poly {

QPoly WeierstrassCurve::rhs() const
{
    return QPoly({b, a, Rational(0), Rational(1)});
}

QPoly DivisionPolynomial::squared(const WeierstrassCurve& E) const
{
    QPoly sq = x_part * x_part;
    return y_degree == 1 ? sq * E.rhs() : sq;
}

namespace {

using Psi = DivisionPolynomial;

Psi multiply(const Psi& u, const Psi& v, const QPoly& rhs)
{
    int e = u.y_degree + v.y_degree;
    QPoly p = u.x_part * v.x_part;
    if (e == 2) {
        p *= rhs;
        e = 0;
    }
    return {e, p};
}

Psi subtract(const Psi& u, const Psi& v)
{
    if (u.x_part.is_zero()) return {v.y_degree, -v.x_part};
    if (v.x_part.is_zero()) return u;
    if (u.y_degree != v.y_degree) throw std::logic_error("division polynomial parity mismatch");
    return {u.y_degree, u.x_part - v.x_part};
}

Psi cube(const Psi& u, const QPoly& rhs) { return multiply(multiply(u, u, rhs), u, rhs); }
Psi square(const Psi& u, const QPoly& rhs) { return multiply(u, u, rhs); }

// t / (2y)
Psi divide_by_2y(const Psi& t, const QPoly& rhs)
{
    if (t.y_degree == 1) return {0, t.x_part * Rational(1, 2)};
    // 1/y = y / rhs
    return {1, t.x_part.exact_div(rhs) * Rational(1, 2)};
}

class PsiTable {
public:
    explicit PsiTable(const WeierstrassCurve& E) : E_(E), rhs_(E.rhs())
    {
        const Rational& a = E.a;
        const Rational& b = E.b;
        table_[0] = {0, QPoly()};
        table_[1] = {0, QPoly(Rational(1))};
        table_[2] = {1, QPoly(Rational(2))};
        table_[3] = {0, QPoly({Rational(-a * a), Rational(12 * b), Rational(6 * a), Rational(0), Rational(3)})};
        table_[4] = {1, QPoly({Rational(-8 * b * b - a * a * a), Rational(-4 * a * b), Rational(-5 * a * a),
                               Rational(20 * b), Rational(5 * a), Rational(0), Rational(1)}) *
                            Rational(4)};
    }

    const Psi& get(int n)
    {
        auto it = table_.find(n);
        if (it != table_.end()) return it->second;
        Psi value;
        if (n % 2 == 1) {
            int m = (n - 1) / 2;
            Psi lhs = multiply(get(m + 2), cube(get(m), rhs_), rhs_);
            Psi rhs = multiply(get(m - 1), cube(get(m + 1), rhs_), rhs_);
            value = subtract(lhs, rhs);
        } else {
            int m = n / 2;
            Psi lhs = multiply(get(m + 2), square(get(m - 1), rhs_), rhs_);
            Psi rhs = multiply(get(m - 2), square(get(m + 1), rhs_), rhs_);
            value = divide_by_2y(multiply(get(m), subtract(lhs, rhs), rhs_), rhs_);
        }
        return table_[n] = value;
    }

    const QPoly& rhs() const { return rhs_; }

private:
    WeierstrassCurve E_;
    QPoly rhs_;
    std::map<int, Psi> table_;
};

void require_nonsingular(const WeierstrassCurve& E)
{
    if (E.discriminant_factor() == 0) throw std::invalid_argument("singular curve: 4a^3 + 27b^2 = 0");
}

} // namespace

DivisionPolynomial division_polynomial(const WeierstrassCurve& E, int n)
{
    require_nonsingular(E);
    if (n < 1) throw std::invalid_argument("division polynomial index must be >= 1");
    PsiTable table(E);
    return table.get(n);
}

QRationalFunction multiplication_x_map(const WeierstrassCurve& E, int n)
{
    require_nonsingular(E);
    if (n < 1) throw std::invalid_argument("multiplier must be >= 1");
    if (n == 1) return QRationalFunction(QPoly::x());
    PsiTable table(E);
    QPoly den = table.get(n).squared(E);
    Psi cross = multiply(table.get(n - 1), table.get(n + 1), table.rhs());
    QPoly num = QPoly::x() * den - cross.x_part;
    return {num, den};
}

QRationalFunction doubling_y_ratio(const WeierstrassCurve& E)
{
    require_nonsingular(E);
    QPoly f = E.rhs();
    QRationalFunction x2 = multiplication_x_map(E, 2);
    // lambda = (3x^2 + a) / (2y); y2 = lambda (x - x2) - y, so
    // y2 / y = (3x^2 + a)(x - x2) / (2 f) - 1
    QRationalFunction slope_num(QPoly({E.a, Rational(0), Rational(3)}));
    QRationalFunction diff = QRationalFunction(QPoly::x()) - x2;
    QRationalFunction ratio = slope_num * diff / QRationalFunction(f * Rational(2));
    return ratio - QRationalFunction(QPoly(Rational(1)));
}

} // namespace piqlab::poly
