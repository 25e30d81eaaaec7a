#pragma once
#include <map>
#include <vector>

#include "rational.hpp"

namespace orthosel {

// Polynomial in t with exact rational coefficients; c[k] multiplies t^k.
// Used for probability generating functions E(t^dim) and their algebra.
struct GenFun {
    std::vector<Rational> c;

    int degree() const;  // -1 for the zero polynomial
    Rational coeff(int k) const { return k >= 0 && k < static_cast<int>(c.size()) ? c[k] : Rational(0); }
    Rational eval(const Rational& t) const;  // Horner
    void trim();                             // drop trailing zeros
    bool operator==(const GenFun&) const = default;
};

GenFun gf_add(const GenFun& a, const GenFun& b);
GenFun gf_sub(const GenFun& a, const GenFun& b);
GenFun gf_mul(const GenFun& a, const GenFun& b);
GenFun gf_scale(const GenFun& a, const Rational& s);

// pgf from exact counts: sum counts[k] t^k / total
GenFun gf_from_counts(const std::map<int, Int>& counts, const Int& total);

// unique polynomial of degree < #points through the given points (distinct x)
GenFun lagrange_interpolate(const std::vector<std::pair<Rational, Rational>>& pts);

// unique EVEN polynomial of degree 2*(#points-1) with p(x_i) = y_i, and the
// odd counterpart t * r(t^2); both reduce to plain interpolation in u = t^2
GenFun interpolate_even(const std::vector<std::pair<Rational, Rational>>& pts);
GenFun interpolate_odd(const std::vector<std::pair<Rational, Rational>>& pts);

}  // namespace orthosel
