#include "orthosel/modring.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>

namespace orthosel {

Modulus Modulus::make(uint64_t n) {
    if (n < 2) throw std::invalid_argument("modulus must be >= 2");
    Modulus m;
    m.n = n;
    uint64_t x = n;
    for (uint64_t p = 2; p * p <= x; ++p) {
        if (x % p) continue;
        unsigned e = 0;
        while (x % p == 0) {
            x /= p;
            ++e;
        }
        m.factors.emplace_back(p, e);
    }
    if (x > 1) m.factors.emplace_back(x, 1);
    return m;
}

int64_t pow_mod(int64_t base, uint64_t e, uint64_t n) {
    int64_t r = 1 % static_cast<int64_t>(n);
    base = mod_reduce(base, n);
    while (e) {
        if (e & 1) r = mul_mod(r, base, n);
        base = mul_mod(base, base, n);
        e >>= 1;
    }
    return r;
}

std::optional<int64_t> inv_mod(int64_t a, uint64_t n) {
    int64_t t = 0, newt = 1;
    int64_t r = static_cast<int64_t>(n), newr = mod_reduce(a, n);
    while (newr != 0) {
        int64_t q = r / newr;
        t = std::exchange(newt, t - q * newt);
        r = std::exchange(newr, r - q * newr);
    }
    if (r != 1) return std::nullopt;
    return mod_reduce(t, n);
}

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

Mat mat_mul(const Mat& x, const Mat& y, uint64_t n) {
    assert(x.cols == y.rows);
    Mat out(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i) {
        for (int k = 0; k < x.cols; ++k) {
            int64_t v = x.at(i, k);
            if (!v) continue;
            for (int j = 0; j < y.cols; ++j)
                out.at(i, j) = mod_reduce(out.at(i, j) + mul_mod(v, y.at(k, j), n), n);
        }
    }
    return out;
}

Mat mat_add(const Mat& x, const Mat& y, uint64_t n) {
    assert(x.rows == y.rows && x.cols == y.cols);
    Mat out(x.rows, x.cols);
    for (size_t i = 0; i < x.a.size(); ++i) out.a[i] = mod_reduce(x.a[i] + y.a[i], n);
    return out;
}

Mat mat_sub(const Mat& x, const Mat& y, uint64_t n) {
    assert(x.rows == y.rows && x.cols == y.cols);
    Mat out(x.rows, x.cols);
    for (size_t i = 0; i < x.a.size(); ++i) out.a[i] = mod_reduce(x.a[i] - y.a[i], n);
    return out;
}

Mat mat_transpose(const Mat& x) {
    Mat out(x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) out.at(j, i) = x.at(i, j);
    return out;
}

Mat mat_scale(const Mat& x, int64_t c, uint64_t n) {
    Mat out(x.rows, x.cols);
    c = mod_reduce(c, n);
    for (size_t i = 0; i < x.a.size(); ++i) out.a[i] = mul_mod(x.a[i], c, n);
    return out;
}

std::optional<Mat> mat_inverse(const Mat& x, uint64_t n) {
    assert(x.rows == x.cols);
    int d = x.rows;
    Mat m = x, inv = Mat::identity(d);
    for (int c = 0; c < d; ++c) {
        int pivot = -1;
        std::optional<int64_t> pinv;
        for (int i = c; i < d; ++i) {
            if ((pinv = inv_mod(m.at(i, c), n))) {
                pivot = i;
                break;
            }
        }
        if (pivot < 0) return std::nullopt;
        if (pivot != c) {
            for (int j = 0; j < d; ++j) {
                std::swap(m.at(c, j), m.at(pivot, j));
                std::swap(inv.at(c, j), inv.at(pivot, j));
            }
        }
        for (int j = 0; j < d; ++j) {
            m.at(c, j) = mul_mod(m.at(c, j), *pinv, n);
            inv.at(c, j) = mul_mod(inv.at(c, j), *pinv, n);
        }
        for (int i = 0; i < d; ++i) {
            if (i == c) continue;
            int64_t f = m.at(i, c);
            if (!f) continue;
            for (int j = 0; j < d; ++j) {
                m.at(i, j) = mod_reduce(m.at(i, j) - mul_mod(f, m.at(c, j), n), n);
                inv.at(i, j) = mod_reduce(inv.at(i, j) - mul_mod(f, inv.at(c, j), n), n);
            }
        }
    }
    return inv;
}

namespace {

unsigned valuation(int64_t x, uint64_t ell, unsigned e) {
    if (x == 0) return e;
    unsigned v = 0;
    while (x % static_cast<int64_t>(ell) == 0 && v < e) {
        x /= static_cast<int64_t>(ell);
        ++v;
    }
    return v;
}

}  // namespace

int64_t mat_det(const Mat& x, uint64_t ell, unsigned e) {
    assert(x.rows == x.cols);
    int64_t lpow[64];
    lpow[0] = 1;
    for (unsigned i = 1; i <= e; ++i) lpow[i] = lpow[i - 1] * static_cast<int64_t>(ell);
    uint64_t n = static_cast<uint64_t>(lpow[e]);
    int d = x.rows;
    Mat m = x;
    int64_t det = 1;
    for (int c = 0; c < d; ++c) {
        // min-valuation pivot keeps the elimination quotients exact over Z/ell^e
        int pi = -1, pj = -1;
        unsigned best = e + 1;
        for (int i = c; i < d; ++i)
            for (int j = c; j < d; ++j) {
                unsigned v = valuation(m.at(i, j), ell, e);
                if (v < best) {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        if (pi < 0 || best >= e) return 0;
        if (pi != c) {
            for (int j = 0; j < d; ++j) std::swap(m.at(c, j), m.at(pi, j));
            det = -det;
        }
        if (pj != c) {
            for (int i = 0; i < d; ++i) std::swap(m.at(i, c), m.at(i, pj));
            det = -det;
        }
        int64_t p = m.at(c, c);
        int64_t uinv = *inv_mod(p / lpow[best], n);
        for (int i = c + 1; i < d; ++i) {
            int64_t entry = m.at(i, c);
            if (!entry) continue;
            int64_t f = mul_mod(entry / lpow[best], uinv, n);
            for (int j = c; j < d; ++j)
                m.at(i, j) = mod_reduce(m.at(i, j) - mul_mod(f, m.at(c, j), n), n);
        }
        det = mul_mod(det, p, n);
        if (det == 0) return 0;
    }
    return mod_reduce(det, n);
}

int rank_mod(const Mat& x, uint64_t ell) {
    Mat m(x.rows, x.cols);
    for (size_t i = 0; i < x.a.size(); ++i) m.a[i] = mod_reduce(x.a[i], ell);
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int pivot = -1;
        for (int i = r; i < m.rows; ++i)
            if (m.at(i, c)) {
                pivot = i;
                break;
            }
        if (pivot < 0) continue;
        if (pivot != r)
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(r, j), m.at(pivot, j));
        int64_t inv = *inv_mod(m.at(r, c), ell);
        for (int j = c; j < m.cols; ++j) m.at(r, j) = mul_mod(m.at(r, j), inv, ell);
        for (int i = 0; i < m.rows; ++i) {
            if (i == r) continue;
            int64_t f = m.at(i, c);
            if (!f) continue;
            for (int j = c; j < m.cols; ++j)
                m.at(i, j) = mod_reduce(m.at(i, j) - mul_mod(f, m.at(r, j), ell), ell);
        }
        ++r;
    }
    return r;
}

Mat kernel_basis_mod(const Mat& x, uint64_t ell) {
    Mat m(x.rows, x.cols);
    for (size_t i = 0; i < x.a.size(); ++i) m.a[i] = mod_reduce(x.a[i], ell);
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int pivot = -1;
        for (int i = r; i < m.rows; ++i)
            if (m.at(i, c)) {
                pivot = i;
                break;
            }
        if (pivot < 0) continue;
        if (pivot != r)
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(r, j), m.at(pivot, j));
        int64_t inv = *inv_mod(m.at(r, c), ell);
        for (int j = c; j < m.cols; ++j) m.at(r, j) = mul_mod(m.at(r, j), inv, ell);
        for (int i = 0; i < m.rows; ++i) {
            if (i == r) continue;
            int64_t f = m.at(i, c);
            if (!f) continue;
            for (int j = c; j < m.cols; ++j)
                m.at(i, j) = mod_reduce(m.at(i, j) - mul_mod(f, m.at(r, j), ell), ell);
        }
        pivot_col.push_back(c);
        ++r;
    }
    std::vector<int> free_cols;
    for (int c = 0; c < m.cols; ++c)
        if (std::find(pivot_col.begin(), pivot_col.end(), c) == pivot_col.end())
            free_cols.push_back(c);
    Mat out(x.cols, static_cast<int>(free_cols.size()));
    for (size_t k = 0; k < free_cols.size(); ++k) {
        out.at(free_cols[k], static_cast<int>(k)) = 1;
        for (int ri = 0; ri < static_cast<int>(pivot_col.size()); ++ri)
            out.at(pivot_col[ri], static_cast<int>(k)) =
                mod_reduce(-m.at(ri, free_cols[k]), ell);
    }
    return out;
}

Snf smith_normal_form(const Mat& x, uint64_t ell, unsigned e) {
    uint64_t n = 1;
    for (unsigned i = 0; i < e; ++i) n *= ell;
    Snf s;
    Mat m(x.rows, x.cols);
    for (size_t i = 0; i < x.a.size(); ++i) m.a[i] = mod_reduce(x.a[i], n);
    s.u = Mat::identity(x.rows);
    s.v = Mat::identity(x.cols);
    int dim = std::min(x.rows, x.cols);
    int64_t lpow[64];
    lpow[0] = 1;
    for (unsigned i = 1; i <= e; ++i) lpow[i] = lpow[i - 1] * static_cast<int64_t>(ell);

    int t = 0;
    for (; t < dim; ++t) {
        int bi = -1, bj = -1;
        unsigned best = e;
        for (int i = t; i < x.rows; ++i)
            for (int j = t; j < x.cols; ++j) {
                unsigned v = valuation(m.at(i, j), ell, e);
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        if (bi < 0) break;  // all remaining entries are 0 mod ell^e
        if (bi != t) {
            for (int j = 0; j < x.cols; ++j) std::swap(m.at(t, j), m.at(bi, j));
            for (int j = 0; j < x.rows; ++j) std::swap(s.u.at(t, j), s.u.at(bi, j));
        }
        if (bj != t) {
            for (int i = 0; i < x.rows; ++i) std::swap(m.at(i, t), m.at(i, bj));
            for (int i = 0; i < x.cols; ++i) std::swap(s.v.at(i, t), s.v.at(i, bj));
        }
        int64_t p = m.at(t, t);
        int64_t unit = p / lpow[best];
        int64_t uinv = *inv_mod(unit, n);
        // clear column below/above via row ops (tracked in u)
        for (int i = 0; i < x.rows; ++i) {
            if (i == t) continue;
            int64_t entry = m.at(i, t);
            if (!entry) continue;
            int64_t f = mul_mod(entry / lpow[best], uinv, n);
            for (int j = 0; j < x.cols; ++j)
                m.at(i, j) = mod_reduce(m.at(i, j) - mul_mod(f, m.at(t, j), n), n);
            for (int j = 0; j < x.rows; ++j)
                s.u.at(i, j) = mod_reduce(s.u.at(i, j) - mul_mod(f, s.u.at(t, j), n), n);
        }
        // clear row via column ops (tracked in v)
        for (int j = 0; j < x.cols; ++j) {
            if (j == t) continue;
            int64_t entry = m.at(t, j);
            if (!entry) continue;
            int64_t f = mul_mod(entry / lpow[best], uinv, n);
            for (int i = 0; i < x.rows; ++i)
                m.at(i, j) = mod_reduce(m.at(i, j) - mul_mod(f, m.at(i, t), n), n);
            for (int i = 0; i < x.cols; ++i)
                s.v.at(i, j) = mod_reduce(s.v.at(i, j) - mul_mod(f, s.v.at(i, t), n), n);
        }
        // normalize pivot to exactly ell^best (fold the unit into v)
        for (int i = 0; i < x.rows; ++i) m.at(i, t) = mul_mod(m.at(i, t), uinv, n);
        for (int i = 0; i < x.cols; ++i) s.v.at(i, t) = mul_mod(s.v.at(i, t), uinv, n);
        s.exps.push_back(best);
    }
    for (; t < dim; ++t) s.exps.push_back(e);
    // min-valuation pivoting yields the exponents already ascending, which
    // keeps them aligned with the columns of u and v
    assert(std::is_sorted(s.exps.begin(), s.exps.end()));
    return s;
}

Mat kernel_generators(const Mat& x, uint64_t ell, unsigned e) {
    uint64_t n = 1;
    for (unsigned i = 0; i < e; ++i) n *= ell;
    // recompute SNF but keep pivot order aligned with v's columns
    Snf s;
    {
        Mat m(x.rows, x.cols);
        for (size_t i = 0; i < x.a.size(); ++i) m.a[i] = mod_reduce(x.a[i], n);
        s.v = Mat::identity(x.cols);
        int dim = std::min(x.rows, x.cols);
        int64_t lpow[64];
        lpow[0] = 1;
        for (unsigned i = 1; i <= e; ++i) lpow[i] = lpow[i - 1] * static_cast<int64_t>(ell);
        int t = 0;
        std::vector<unsigned> pivot_val;
        for (; t < dim; ++t) {
            int bi = -1, bj = -1;
            unsigned best = e;
            for (int i = t; i < x.rows; ++i)
                for (int j = t; j < x.cols; ++j) {
                    unsigned v = valuation(m.at(i, j), ell, e);
                    if (v < best) {
                        best = v;
                        bi = i;
                        bj = j;
                    }
                }
            if (bi < 0) break;
            if (bi != t)
                for (int j = 0; j < x.cols; ++j) std::swap(m.at(t, j), m.at(bi, j));
            if (bj != t) {
                for (int i = 0; i < x.rows; ++i) std::swap(m.at(i, t), m.at(i, bj));
                for (int i = 0; i < x.cols; ++i) std::swap(s.v.at(i, t), s.v.at(i, bj));
            }
            int64_t p = m.at(t, t);
            int64_t uinv = *inv_mod(p / lpow[best], n);
            for (int i = t + 1; i < x.rows; ++i) {
                int64_t entry = m.at(i, t);
                if (!entry) continue;
                int64_t f = mul_mod(entry / lpow[best], uinv, n);
                for (int j = 0; j < x.cols; ++j)
                    m.at(i, j) = mod_reduce(m.at(i, j) - mul_mod(f, m.at(t, j), n), n);
            }
            for (int j = t + 1; j < x.cols; ++j) {
                int64_t entry = m.at(t, j);
                if (!entry) continue;
                int64_t f = mul_mod(entry / lpow[best], uinv, n);
                for (int i = 0; i < x.rows; ++i)
                    m.at(i, j) = mod_reduce(m.at(i, j) - mul_mod(f, m.at(i, t), n), n);
                for (int i = 0; i < x.cols; ++i)
                    s.v.at(i, j) = mod_reduce(s.v.at(i, j) - mul_mod(f, s.v.at(i, t), n), n);
            }
            pivot_val.push_back(best);
        }
        // kernel of diag(ell^c_i): column i scaled by ell^(e - c_i); free columns whole
        std::vector<std::pair<int, unsigned>> gens;  // (v column, scale exponent)
        for (int j = 0; j < x.cols; ++j) {
            unsigned c = j < static_cast<int>(pivot_val.size()) ? pivot_val[j] : e;
            if (c == 0) continue;
            gens.emplace_back(j, e - c);
        }
        Mat out(x.cols, static_cast<int>(gens.size()));
        for (size_t k = 0; k < gens.size(); ++k) {
            int64_t sc = lpow[gens[k].second];
            for (int i = 0; i < x.cols; ++i)
                out.at(i, static_cast<int>(k)) = mul_mod(s.v.at(i, gens[k].first), sc, n);
        }
        return out;
    }
}

void ModuleClass::add_part(uint64_t ell, std::vector<unsigned> exps) {
    std::erase(exps, 0u);
    if (exps.empty()) return;
    std::sort(exps.rbegin(), exps.rend());
    auto it = std::lower_bound(parts.begin(), parts.end(), ell,
                               [](const auto& p, uint64_t l) { return p.first < l; });
    parts.insert(it, {ell, std::move(exps)});
}

Int ModuleClass::order() const {
    Int o = 1;
    for (const auto& [ell, exps] : parts)
        for (unsigned c : exps) o *= pow_int(Int(ell), c);
    return o;
}

std::string ModuleClass::str() const {
    if (parts.empty()) return "1";
    std::string s;
    for (const auto& [ell, exps] : parts) {
        if (!s.empty()) s += "*";
        s += std::to_string(ell) + "^[";
        for (size_t i = 0; i < exps.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(exps[i]);
        }
        s += "]";
    }
    return s;
}

bool ModuleClass::operator<(const ModuleClass& o) const { return parts < o.parts; }

ModuleClass kernel_class(const Mat& x, const Modulus& m) {
    assert(x.rows == x.cols);
    ModuleClass cls;
    auto split = crt_split(x, m);
    for (size_t k = 0; k < m.factors.size(); ++k) {
        auto [ell, e] = m.factors[k];
        Snf s = smith_normal_form(split[k], ell, e);
        cls.add_part(ell, s.exps);
    }
    return cls;
}

std::vector<Mat> crt_split(const Mat& x, const Modulus& m) {
    std::vector<Mat> out;
    for (auto [ell, e] : m.factors) {
        uint64_t pe = 1;
        for (unsigned i = 0; i < e; ++i) pe *= ell;
        Mat part(x.rows, x.cols);
        for (size_t i = 0; i < x.a.size(); ++i) part.a[i] = mod_reduce(x.a[i], pe);
        out.push_back(std::move(part));
    }
    return out;
}

Mat crt_join(const std::vector<Mat>& parts, const Modulus& m) {
    assert(parts.size() == m.factors.size());
    Mat out(parts[0].rows, parts[0].cols);
    for (size_t k = 0; k < parts.size(); ++k) {
        auto [ell, e] = m.factors[k];
        uint64_t pe = 1;
        for (unsigned i = 0; i < e; ++i) pe *= ell;
        uint64_t rest = m.n / pe;
        // x = parts[k] mod pe, 0 mod rest: term = parts[k] * rest * (rest^-1 mod pe)
        int64_t c = mul_mod(static_cast<int64_t>(rest % pe) ? *inv_mod(static_cast<int64_t>(rest % pe), pe) : 0,
                            1, pe);
        for (size_t i = 0; i < out.a.size(); ++i) {
            int64_t term = mul_mod(mul_mod(parts[k].a[i], c, m.n), static_cast<int64_t>(rest), m.n);
            out.a[i] = mod_reduce(out.a[i] + term, m.n);
        }
    }
    return out;
}

}  // namespace orthosel
