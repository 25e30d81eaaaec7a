#include "orthosel/genfun.hpp"

#include <stdexcept>

namespace orthosel {

int GenFun::degree() const {
    for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k)
        if (c[k] != 0) return k;
    return -1;
}

Rational GenFun::eval(const Rational& t) const {
    Rational acc = 0;
    for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) acc = acc * t + c[k];
    return acc;
}

void GenFun::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

GenFun gf_add(const GenFun& a, const GenFun& b) {
    GenFun r;
    r.c.resize(std::max(a.c.size(), b.c.size()), Rational(0));
    for (size_t k = 0; k < r.c.size(); ++k) r.c[k] = a.coeff(static_cast<int>(k)) + b.coeff(static_cast<int>(k));
    r.trim();
    return r;
}

GenFun gf_sub(const GenFun& a, const GenFun& b) {
    return gf_add(a, gf_scale(b, Rational(-1)));
}

GenFun gf_mul(const GenFun& a, const GenFun& b) {
    if (a.c.empty() || b.c.empty()) return {};
    GenFun r;
    r.c.resize(a.c.size() + b.c.size() - 1, Rational(0));
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    }
    r.trim();
    return r;
}

GenFun gf_scale(const GenFun& a, const Rational& s) {
    GenFun r = a;
    for (auto& x : r.c) x *= s;
    r.trim();
    return r;
}

GenFun gf_from_counts(const std::map<int, Int>& counts, const Int& total) {
    if (total == 0) throw std::invalid_argument("pgf over an empty population");
    GenFun r;
    for (const auto& [k, n] : counts) {
        if (k < 0) throw std::invalid_argument("negative exponent in pgf counts");
        if (k >= static_cast<int>(r.c.size())) r.c.resize(static_cast<size_t>(k) + 1, Rational(0));
        r.c[static_cast<size_t>(k)] = Rational(n, total);
    }
    r.trim();
    return r;
}

GenFun lagrange_interpolate(const std::vector<std::pair<Rational, Rational>>& pts) {
    const size_t n = pts.size();
    GenFun acc;
    for (size_t i = 0; i < n; ++i) {
        // basis polynomial prod_{j != i} (t - x_j) / (x_i - x_j), scaled by y_i
        GenFun num;
        num.c = {Rational(1)};
        Rational den = 1;
        for (size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            GenFun lin;
            lin.c = {-pts[j].first, Rational(1)};
            num = gf_mul(num, lin);
            den *= pts[i].first - pts[j].first;
        }
        if (den == 0) throw std::invalid_argument("interpolation points share an x value");
        acc = gf_add(acc, gf_scale(num, pts[i].second / den));
    }
    return acc;
}

namespace {

// substitute t^2 into a polynomial in u
GenFun spread_even(const GenFun& p) {
    GenFun r;
    r.c.resize(p.c.size() * 2, Rational(0));
    for (size_t k = 0; k < p.c.size(); ++k) r.c[2 * k] = p.c[k];
    r.trim();
    return r;
}

}  // namespace

GenFun interpolate_even(const std::vector<std::pair<Rational, Rational>>& pts) {
    std::vector<std::pair<Rational, Rational>> sq;
    sq.reserve(pts.size());
    for (const auto& [x, y] : pts) sq.emplace_back(x * x, y);
    return spread_even(lagrange_interpolate(sq));
}

GenFun interpolate_odd(const std::vector<std::pair<Rational, Rational>>& pts) {
    std::vector<std::pair<Rational, Rational>> sq;
    sq.reserve(pts.size());
    for (const auto& [x, y] : pts) {
        if (x == 0) throw std::invalid_argument("odd interpolation through x = 0");
        sq.emplace_back(x * x, y / x);
    }
    GenFun r = spread_even(lagrange_interpolate(sq));
    r.c.insert(r.c.begin(), Rational(0));  // multiply by t
    r.trim();
    return r;
}

}  // namespace orthosel
