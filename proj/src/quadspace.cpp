#include "orthosel/quadspace.hpp"

#include <cassert>
#include <stdexcept>

namespace orthosel {

int64_t QuadSpace::q(const std::vector<int64_t>& v) const {
    uint64_t n = mod.n;
    int64_t s = 0;
    for (int i = 0; i < rank; ++i) {
        if (!v[i]) continue;
        int64_t row = 0;
        for (int j = i; j < rank; ++j)
            row = mod_reduce(row + mul_mod(theta.at(i, j), v[j], n), n);
        s = mod_reduce(s + mul_mod(v[i], row, n), n);
    }
    return s;
}

int64_t QuadSpace::b(const std::vector<int64_t>& u, const std::vector<int64_t>& v) const {
    uint64_t n = mod.n;
    int64_t s = 0;
    for (int i = 0; i < rank; ++i) {
        if (!u[i]) continue;
        int64_t row = 0;
        for (int j = 0; j < rank; ++j)
            row = mod_reduce(row + mul_mod(bilinear.at(i, j), v[j], n), n);
        s = mod_reduce(s + mul_mod(u[i], row, n), n);
    }
    return s;
}

std::vector<int64_t> QuadSpace::bil_row(const std::vector<int64_t>& v) const {
    uint64_t n = mod.n;
    std::vector<int64_t> out(rank, 0);
    for (int j = 0; j < rank; ++j) {
        int64_t s = 0;
        for (int i = 0; i < rank; ++i)
            if (v[i]) s = mod_reduce(s + mul_mod(v[i], bilinear.at(i, j), n), n);
        out[j] = s;
    }
    return out;
}

int64_t QuadSpace::disc() const {
    assert(mod.is_prime_power());
    return mat_det(bilinear, mod.ell(), mod.exp());
}

QuadSpace make_space(const Modulus& mod, Mat theta) {
    QuadSpace s;
    s.mod = mod;
    s.rank = theta.rows;
    for (int i = 0; i < theta.rows; ++i)
        for (int j = 0; j < i; ++j)
            if (theta.at(i, j)) throw std::invalid_argument("theta must be upper triangular");
    for (auto& x : theta.a) x = mod_reduce(x, mod.n);
    s.bilinear = mat_add(theta, mat_transpose(theta), mod.n);
    s.theta = std::move(theta);
    return s;
}

QuadSpace build_standard_split(int m, const Modulus& mod) {
    Mat th(2 * m, 2 * m);
    for (int i = 0; i < m; ++i) th.at(2 * i, 2 * i + 1) = 1;
    return make_space(mod, std::move(th));
}

const Mat& e8_gram() {
    static const Mat g = [] {
        Mat m(8, 8);
        for (int i = 0; i < 8; ++i) m.at(i, i) = 2;
        constexpr int adj[][2] = {{1, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}, {2, 4}};
        for (auto [a, b] : adj) {
            m.at(a - 1, b - 1) = -1;
            m.at(b - 1, a - 1) = -1;
        }
        return m;
    }();
    return g;
}

QuadSpace build_qsel(int d, const Modulus& mod) {
    if (d < 1) throw std::invalid_argument("d must be >= 1");
    int rank = 12 * d - 4;
    Mat th(rank, rank);
    int off = 0;
    for (int k = 0; k < 2 * d - 2; ++k) {
        th.at(off, off + 1) = 1;
        off += 2;
    }
    const Mat& e8 = e8_gram();
    for (int k = 0; k < d; ++k) {
        for (int i = 0; i < 8; ++i) {
            th.at(off + i, off + i) = mod_reduce(-e8.at(i, i) / 2, mod.n);
            for (int j = i + 1; j < 8; ++j)
                th.at(off + i, off + j) = mod_reduce(-e8.at(i, j), mod.n);
        }
        off += 8;
    }
    assert(off == rank);
    return make_space(mod, std::move(th));
}

QuadSpace reduce_space(const QuadSpace& s, uint64_t ell, unsigned e) {
    uint64_t pe = 1;
    for (unsigned i = 0; i < e; ++i) pe *= ell;
    Mat th = s.theta;
    for (auto& x : th.a) x = mod_reduce(x, pe);
    return make_space(Modulus::make(pe), std::move(th));
}

Mat reflection(const QuadSpace& s, const std::vector<int64_t>& v) {
    uint64_t n = s.mod.n;
    auto qv = inv_mod(s.q(v), n);
    if (!qv) throw std::invalid_argument("reflection needs Q(v) a unit");
    auto bv = s.bil_row(v);
    Mat r = Mat::identity(s.rank);
    for (int i = 0; i < s.rank; ++i) {
        if (!v[i]) continue;
        int64_t vi = mul_mod(v[i], *qv, n);
        for (int j = 0; j < s.rank; ++j)
            r.at(i, j) = mod_reduce(r.at(i, j) - mul_mod(vi, bv[j], n), n);
    }
    return r;
}

bool isometry_check(const QuadSpace& s, const Mat& g) {
    uint64_t n = s.mod.n;
    Mat m = mat_mul(mat_mul(mat_transpose(g), s.theta, n), g, n);
    for (int i = 0; i < s.rank; ++i) {
        if (mod_reduce(m.at(i, i) - s.theta.at(i, i), n)) return false;
        for (int j = i + 1; j < s.rank; ++j) {
            int64_t d = m.at(i, j) + m.at(j, i) - s.theta.at(i, j) - s.theta.at(j, i);
            if (mod_reduce(d, n)) return false;
        }
    }
    return true;
}

namespace {

// lexicographically next coefficient tuple; digit 0 most significant
bool lex_next(std::vector<int64_t>& c, uint64_t n) {
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
        if (++c[i] < static_cast<int64_t>(n)) return true;
        c[i] = 0;
    }
    return false;
}

}  // namespace

std::optional<HyperbolicPair> find_hyperbolic_pair(const QuadSpace& s,
                                                   const std::optional<Mat>& sub_basis) {
    assert(s.mod.is_prime_power());
    uint64_t n = s.mod.n;
    uint64_t ell = s.mod.ell();
    int dim = sub_basis ? sub_basis->cols : s.rank;
    if (dim < 2) return std::nullopt;

    auto expand = [&](const std::vector<int64_t>& c) {
        if (!sub_basis) return c;
        std::vector<int64_t> v(s.rank, 0);
        for (int i = 0; i < s.rank; ++i) {
            int64_t x = 0;
            for (int t = 0; t < dim; ++t)
                x = mod_reduce(x + mul_mod(sub_basis->at(i, t), c[t], n), n);
            v[i] = x;
        }
        return v;
    };

    std::vector<int64_t> c(dim, 0);
    while (lex_next(c, n)) {
        bool unimodular = false;
        for (auto x : c)
            if (x % static_cast<int64_t>(ell)) {
                unimodular = true;
                break;
            }
        if (!unimodular) continue;
        auto e = expand(c);
        if (s.q(e)) continue;
        // solve B(e, f) = 1 within the subspace, then make f isotropic
        auto w = s.bil_row(e);
        std::vector<int64_t> wsub(dim);
        for (int t = 0; t < dim; ++t) {
            if (sub_basis) {
                int64_t x = 0;
                for (int i = 0; i < s.rank; ++i)
                    x = mod_reduce(x + mul_mod(w[i], sub_basis->at(i, t), n), n);
                wsub[t] = x;
            } else {
                wsub[t] = w[t];
            }
        }
        int j = -1;
        std::optional<int64_t> winv;
        for (int t = 0; t < dim; ++t)
            if ((winv = inv_mod(wsub[t], n))) {
                j = t;
                break;
            }
        if (j < 0) continue;  // e pairs with nothing in the subspace: degenerate direction
        std::vector<int64_t> fc(dim, 0);
        fc[j] = *winv;
        auto f = expand(fc);
        int64_t qf = s.q(f);
        // Q(f - Q(f) e) = Q(f) - Q(f) B(e,f) = 0
        for (int i = 0; i < s.rank; ++i)
            f[i] = mod_reduce(f[i] - mul_mod(qf, e[i], n), n);
        assert(s.q(f) == 0 && s.b(e, f) == 1);
        return HyperbolicPair{std::move(e), std::move(f)};
    }
    return std::nullopt;
}

SplitOff split_off(const QuadSpace& s, const HyperbolicPair& p) {
    uint64_t n = s.mod.n;
    Mat constraints(2, s.rank);
    auto we = s.bil_row(p.e), wf = s.bil_row(p.f);
    for (int j = 0; j < s.rank; ++j) {
        constraints.at(0, j) = we[j];
        constraints.at(1, j) = wf[j];
    }
    Mat k = kernel_generators(constraints, s.mod.ell(), s.mod.exp());
    assert(k.cols == s.rank - 2);
    // restricted form k^T theta k, folded back to upper triangular
    Mat t = mat_mul(mat_mul(mat_transpose(k), s.theta, n), k, n);
    Mat upper(t.rows, t.cols);
    for (int i = 0; i < t.rows; ++i) {
        upper.at(i, i) = t.at(i, i);
        for (int j = i + 1; j < t.cols; ++j)
            upper.at(i, j) = mod_reduce(t.at(i, j) + t.at(j, i), n);
    }
    return SplitOff{std::move(k), make_space(s.mod, std::move(upper))};
}

std::optional<Mat> split_basis(const QuadSpace& s) {
    assert(s.rank % 2 == 0);
    uint64_t n = s.mod.n;
    Mat out(s.rank, s.rank);
    Mat carrier = Mat::identity(s.rank);  // maps current complement coords to ambient
    QuadSpace cur = s;
    for (int k = 0; k < s.rank / 2; ++k) {
        auto pair = find_hyperbolic_pair(cur);
        if (!pair) return std::nullopt;
        std::vector<int64_t> e_amb(s.rank, 0), f_amb(s.rank, 0);
        for (int i = 0; i < s.rank; ++i) {
            int64_t xe = 0, xf = 0;
            for (int t = 0; t < cur.rank; ++t) {
                xe = mod_reduce(xe + mul_mod(carrier.at(i, t), pair->e[t], n), n);
                xf = mod_reduce(xf + mul_mod(carrier.at(i, t), pair->f[t], n), n);
            }
            e_amb[i] = xe;
            f_amb[i] = xf;
        }
        for (int i = 0; i < s.rank; ++i) {
            out.at(i, 2 * k) = e_amb[i];
            out.at(i, 2 * k + 1) = f_amb[i];
        }
        if (cur.rank == 2) break;
        auto so = split_off(cur, *pair);
        carrier = mat_mul(carrier, so.basis, n);
        cur = std::move(so.complement);
    }
    return out;
}

}  // namespace orthosel
