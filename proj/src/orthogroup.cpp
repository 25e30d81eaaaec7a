#include "orthosel/orthogroup.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace orthosel {
namespace {

// square class of a unit mod an odd prime: 0 = square, 1 = non-square
int square_class(int64_t a, uint64_t ell) {
    a = mod_reduce(a, ell);
    if (a == 0) throw std::logic_error("square class of a non-unit");
    if (ell == 2) return 0;
    return pow_mod(a, (ell - 1) / 2, ell) == 1 ? 0 : 1;
}

std::vector<int64_t> mat_vec(const Mat& m, const std::vector<int64_t>& v, uint64_t n) {
    std::vector<int64_t> r(m.rows, 0);
    for (int i = 0; i < m.rows; ++i) {
        int64_t acc = 0;
        for (int j = 0; j < m.cols; ++j) acc += mul_mod(m.at(i, j), v[j], n);
        r[i] = mod_reduce(acc, n);
    }
    return r;
}

Mat sub_identity(const Mat& g, uint64_t n, int sign) {
    // sign +1: g - 1; sign -1: 1 - g
    Mat r = g;
    for (int i = 0; i < g.rows; ++i)
        for (int j = 0; j < g.cols; ++j)
            r.at(i, j) = mod_reduce(sign * (g.at(i, j) - (i == j ? 1 : 0)), n);
    return r;
}

}  // namespace

Int split_orthogonal_order(int m, uint64_t q) {
    Int r = 1;
    const Int qi = q;
    for (int k = 1; k <= m; ++k)
        r *= (pow_int(qi, unsigned(k)) - 1) * (pow_int(qi, unsigned(k - 1)) + 1) *
             pow_int(qi, unsigned(2 * k - 2));
    return r;
}

Int group_order(int rank, const Modulus& mod) {
    if (rank % 2 != 0) throw std::invalid_argument("group order needs even rank");
    const int m = rank / 2;
    Int r = 1;
    for (auto [ell, e] : mod.factors)
        r *= split_orthogonal_order(m, ell) *
             pow_int(Int(ell), unsigned((e - 1) * m * (2 * m - 1)));
    return r;
}

int dickson(const QuadSpace& s, const Mat& g) {
    const uint64_t ell = s.mod.ell();
    return (s.rank - rank_mod(sub_identity(g, s.mod.n, +1), ell)) & 1;
}

int spinor_wall(const QuadSpace& s, const Mat& g) {
    const uint64_t ell = s.mod.ell();
    if (ell == 2) {
        if (s.mod.exp() > 1) throw std::invalid_argument("unsupported spinor modulus");
        return 0;
    }
    const int n = s.rank;
    // everything over the residue field
    Mat m = sub_identity(g, s.mod.n, +1);
    for (auto& x : m.a) x = mod_reduce(x, ell);
    // greedy column-space basis of m, remembering which original columns
    std::vector<std::vector<int64_t>> ech;
    std::vector<int> piv_of, chosen;
    for (int j = 0; j < n; ++j) {
        std::vector<int64_t> v(n);
        for (int i = 0; i < n; ++i) v[i] = m.at(i, j);
        for (size_t k = 0; k < ech.size(); ++k) {
            const int pc = piv_of[k];
            if (v[pc] == 0) continue;
            const int64_t f = mul_mod(v[pc], *inv_mod(ech[k][pc], ell), ell);
            for (int i = 0; i < n; ++i) v[i] = mod_reduce(v[i] - f * ech[k][i], ell);
        }
        int nz = -1;
        for (int i = 0; i < n && nz < 0; ++i)
            if (v[i] != 0) nz = i;
        if (nz >= 0) {
            ech.push_back(std::move(v));
            piv_of.push_back(nz);
            chosen.push_back(j);
        }
    }
    const int k = static_cast<int>(chosen.size());
    if (k == 0) return 0;  // identity
    // Wall form on im(g-1): chi(u_a, u_b) = B(e_{ja}, (g-1) e_{jb})
    Mat chi(k, k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            int64_t acc = 0;
            for (int t = 0; t < n; ++t)
                acc += mul_mod(s.bilinear.at(chosen[a], t), m.at(t, chosen[b]), ell);
            chi.at(a, b) = mod_reduce(acc, ell);
        }
    const int64_t d = mat_det(chi, ell, 1);
    if (d == 0) throw std::logic_error("degenerate Wall form on an isometry");
    return square_class(d, ell);
}

std::optional<int> spinor_zassenhaus(const QuadSpace& s, const Mat& g) {
    const uint64_t ell = s.mod.ell();
    if (ell == 2) return std::nullopt;
    Mat m = sub_identity(g, s.mod.n, -1);  // 1 - g
    const int64_t det = mat_det(m, ell, 1);
    if (det == 0) return std::nullopt;
    const int64_t disc = mat_det(s.bilinear, ell, 1);
    return square_class(mul_mod(disc, det, ell), ell);
}

int spinor(const QuadSpace& s, const Mat& g0) {
    const uint64_t ell = s.mod.ell();
    if (ell == 2) {
        if (s.mod.exp() > 1) throw std::invalid_argument("unsupported spinor modulus");
        return 0;
    }
    const uint64_t n = s.mod.n;
    const int rank = s.rank;
    Mat g = g0;
    int sp = 0;
    std::vector<std::vector<int64_t>> anchors;

    auto reflect_into = [&](const std::vector<int64_t>& v) {
        g = mat_mul(reflection(s, v), g, n);
        sp ^= square_class(mod_reduce(-s.q(v), n), ell);
    };

    int guard = 0;
    for (;;) {
        if (++guard > 10 * rank + 10) throw std::logic_error("spinor descent did not terminate");
        // basis of the B-orthogonal complement of the anchors (free, since the
        // anchors span an orthogonal sum of unit-Q lines)
        Mat comp;
        if (anchors.empty()) {
            comp = Mat::identity(rank);
        } else {
            Mat rows(static_cast<int>(anchors.size()), rank);
            for (size_t i = 0; i < anchors.size(); ++i) {
                auto br = s.bil_row(anchors[i]);
                for (int j = 0; j < rank; ++j) rows.at(static_cast<int>(i), j) = br[j];
            }
            comp = kernel_generators(rows, ell, s.mod.exp());
            if (comp.cols != rank - static_cast<int>(anchors.size()))
                throw std::logic_error("anchor complement is not free");
        }
        const int d = comp.cols;
        // first x (lexicographic complement coefficients) with Q(x) a unit and gx != x
        std::vector<int64_t> coeff(d, 0), found;
        bool have = false;
        for (;;) {
            int p = 0;
            while (p < d && coeff[p] == static_cast<int64_t>(n) - 1) coeff[p++] = 0;
            if (p == d) break;
            ++coeff[p];
            auto x = mat_vec(comp, coeff, n);
            if (mod_reduce(s.q(x), ell) == 0) continue;
            if (mat_vec(g, x, n) != x) {
                found = std::move(x);
                have = true;
                break;
            }
        }
        if (!have) {
            if (g != Mat::identity(rank)) throw std::logic_error("spinor descent stalled off identity");
            return sp;
        }
        const auto gx = mat_vec(g, found, n);
        std::vector<int64_t> w(rank), u(rank);
        for (int i = 0; i < rank; ++i) {
            w[i] = mod_reduce(gx[i] - found[i], n);
            u[i] = mod_reduce(gx[i] + found[i], n);
        }
        if (mod_reduce(s.q(w), ell) != 0) {
            reflect_into(w);  // r_w g x = x
        } else {
            if (mod_reduce(s.q(u), ell) == 0)
                throw std::logic_error("both gx-x and gx+x defective in descent");
            reflect_into(u);
            reflect_into(found);  // r_x r_u g x = x
        }
        anchors.push_back(found);
    }
}

int generalized_fixed_rank(const QuadSpace& s, const Mat& g) {
    if (!s.mod.is_prime()) throw std::invalid_argument("generalized fixed rank needs a field modulus");
    const uint64_t ell = s.mod.ell();
    Mat m = sub_identity(g, ell, +1);
    Mat p = m;
    int r = rank_mod(p, ell);
    for (int k = 1; k < s.rank; ++k) {
        p = mat_mul(p, m, ell);
        const int r2 = rank_mod(p, ell);
        if (r2 == r) break;
        r = r2;
    }
    return s.rank - r;
}

// ---------------------------------------------------------------------------
// uniform sampling

namespace {

// uniform element of the group of a split space over the residue field;
// entries of the result lie in [0, ell)
Mat field_sample(const QuadSpace& sf, Rng& rng) {
    const uint64_t ell = sf.mod.n;
    const int n = sf.rank;
    Mat g(n, n);
    Mat carrier = Mat::identity(n);
    QuadSpace cur = sf;
    for (int k = 0; 2 * k < n; ++k) {
        const int d = cur.rank;
        // image of e: uniform nonzero isotropic vector of the complement
        std::vector<int64_t> v(d);
        for (;;) {
            bool nz = false;
            for (auto& x : v) {
                x = static_cast<int64_t>(rng.below(ell));
                nz |= x != 0;
            }
            if (nz && cur.q(v) == 0) break;
        }
        // image of f: uniform on {w : B(v,w) = 1}, then slide along v onto the
        // isotropic sheet (w -> w - Q(w)v is a uniform ell-to-one map onto Q=0)
        const auto row = cur.bil_row(v);
        int piv = -1;
        for (int i = 0; i < d && piv < 0; ++i)
            if (row[i] != 0) piv = i;
        const int64_t rinv = *inv_mod(row[piv], ell);
        std::vector<int64_t> w(d, 0);
        int64_t acc = 1;
        for (int i = 0; i < d; ++i) {
            if (i == piv) continue;
            w[i] = static_cast<int64_t>(rng.below(ell));
            acc -= mul_mod(row[i], w[i], ell);
        }
        w[piv] = mul_mod(mod_reduce(acc, ell), rinv, ell);
        const int64_t t = cur.q(w);
        if (t != 0)
            for (int i = 0; i < d; ++i) w[i] = mod_reduce(w[i] - t * v[i], ell);
        const auto av = mat_vec(carrier, v, ell);
        const auto aw = mat_vec(carrier, w, ell);
        for (int i = 0; i < n; ++i) {
            g.at(i, 2 * k) = av[i];
            g.at(i, 2 * k + 1) = aw[i];
        }
        if (d > 2) {
            auto so = split_off(cur, HyperbolicPair{v, w});
            carrier = mat_mul(carrier, so.basis, ell);
            cur = std::move(so.complement);
        }
    }
    return g;
}

}  // namespace

LiftContext make_lift_context(const QuadSpace& s) {
    auto binv = mat_inverse(s.bilinear, s.mod.n);
    if (!binv) throw std::invalid_argument("degenerate bilinear form");
    return LiftContext{&s, *binv, s.rank * (s.rank - 1) / 2};
}

Mat alternating_from_digits(int n, uint64_t ell, const std::vector<int64_t>& coeffs) {
    Mat a(n, n);
    size_t t = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            a.at(i, j) = mod_reduce(coeffs[t], ell);
            a.at(j, i) = mod_reduce(-coeffs[t], ell);
            ++t;
        }
    return a;
}

Mat lift_one_level(const LiftContext& ctx, const Mat& g, unsigned level, const Mat& alt) {
    const QuadSpace& s = *ctx.space;
    const uint64_t n = s.mod.n, ell = s.mod.ell();
    const int rank = s.rank;
    int64_t lj = 1;
    for (unsigned i = 0; i < level; ++i) lj *= static_cast<int64_t>(ell);
    // defect of g one level up, read off as a quadratic form
    const Mat d = mat_sub(mat_mul(mat_mul(mat_transpose(g), s.theta, n), g, n), s.theta, n);
    Mat su(rank, rank);  // upper-triangular S with defect = ell^level * S as forms
    for (int i = 0; i < rank; ++i) {
        if (d.at(i, i) % lj != 0) throw std::logic_error("lift applied below its level");
        su.at(i, i) = mod_reduce(d.at(i, i) / lj, ell);
        for (int j = i + 1; j < rank; ++j) {
            const int64_t c = mod_reduce(d.at(i, j) + d.at(j, i), n);
            if (c % lj != 0) throw std::logic_error("lift applied below its level");
            su.at(i, j) = mod_reduce(c / lj, ell);
        }
    }
    const Mat z0 = mat_mul(ctx.binv, mat_scale(su, -1, n), n);
    const Mat ba = mat_mul(ctx.binv, alt, n);
    Mat corr(rank, rank);
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j)
            corr.at(i, j) =
                mod_reduce((i == j ? 1 : 0) + lj * mod_reduce(z0.at(i, j) + ba.at(i, j), ell), n);
    return mat_mul(g, corr, n);
}

Mat sample_uniform(const QuadSpace& s, Rng& rng) {
    if (!s.mod.is_prime_power()) throw std::invalid_argument("sampling needs a prime-power modulus");
    const uint64_t ell = s.mod.ell();
    const unsigned e = s.mod.exp();
    const QuadSpace sf = e == 1 ? s : reduce_space(s, ell, 1);
    Mat g = field_sample(sf, rng);
    if (e == 1) return g;
    const LiftContext ctx = make_lift_context(s);
    std::vector<int64_t> coeffs(static_cast<size_t>(ctx.lie_dim));
    for (unsigned level = 1; level < e; ++level) {
        for (auto& c : coeffs) c = static_cast<int64_t>(rng.below(ell));
        g = lift_one_level(ctx, g, level, alternating_from_digits(s.rank, ell, coeffs));
    }
    return g;
}

// ---------------------------------------------------------------------------
// cosets

CosetSpec CosetSpec::from_q(uint64_t q, int d, const Modulus& mod) {
    CosetSpec spec;
    spec.dickson = -1;
    for (auto [ell, e] : mod.factors) {
        (void)e;
        if (ell == 2) continue;  // spinor constraint vacuous
        if (q % ell == 0) throw std::invalid_argument("q must be a unit modulo n");
        const int64_t cls = pow_mod(static_cast<int64_t>(q % ell), unsigned(d - 1), ell);
        spec.spinor_targets.emplace_back(ell, square_class(cls, ell));
    }
    return spec;
}

int CosetSpec::spinor_target(uint64_t ell) const {
    for (auto [l, c] : spinor_targets)
        if (l == ell) return c;
    return -1;
}

bool CosetSpec::matches(const std::vector<uint64_t>& ells, const std::vector<int>& dicksons,
                        const std::vector<int>& spinors) const {
    for (size_t i = 1; i < dicksons.size(); ++i)
        if (dicksons[i] != dicksons[0]) return false;  // diagonal across primes
    if (dickson >= 0 && !dicksons.empty() && dicksons[0] != dickson) return false;
    for (size_t i = 0; i < ells.size(); ++i) {
        const int target = spinor_target(ells[i]);
        if (target >= 0 && spinors[i] != target) return false;
    }
    return true;
}

OrthoElem classify_element(const QuadSpace& s, Mat g) {
    OrthoElem el;
    el.dickson = dickson(s, g);
    if (s.mod.ell() != 2) {
        const auto z = spinor_zassenhaus(s, g);
        el.spinor = z ? *z : spinor_wall(s, g);
    }
    el.g = std::move(g);
    return el;
}

std::vector<OrthoElem> sample_coset(const std::vector<QuadSpace>& prime_spaces,
                                    const CosetSpec& spec, Rng& rng) {
    std::vector<uint64_t> ells;
    ells.reserve(prime_spaces.size());
    for (const auto& ps : prime_spaces) ells.push_back(ps.mod.ell());
    for (int attempt = 0; attempt < kRejectionCap; ++attempt) {
        std::vector<OrthoElem> draw;
        std::vector<int> dicksons, spinors;
        draw.reserve(prime_spaces.size());
        for (const auto& ps : prime_spaces) {
            draw.push_back(classify_element(ps, sample_uniform(ps, rng)));
            dicksons.push_back(draw.back().dickson);
            spinors.push_back(draw.back().spinor);
        }
        if (spec.matches(ells, dicksons, spinors)) return draw;
    }
    throw std::runtime_error("coset rejection cap exhausted");
}

// ---------------------------------------------------------------------------
// enumeration

namespace {

struct EnumTree {
    uint64_t ell;
    int rank;
    std::vector<std::vector<int64_t>> cols;  // chosen images, ambient coordinates
    const std::function<void(const Mat&)>* emit = nullptr;
    const Mat* basis_inv = nullptr;  // nullptr when the space is the standard split model
    QuadSpace empty_space;           // rank-0 terminal node, built once
    Mat empty_carrier;

    void run(const QuadSpace& cur, const Mat& carrier) {
        const int d = cur.rank;
        if (d == 0) {
            Mat g(rank, rank);
            for (int k = 0; k < rank; ++k)
                for (int i = 0; i < rank; ++i) g.at(i, k) = cols[static_cast<size_t>(k)][i];
            if (basis_inv) g = mat_mul(g, *basis_inv, ell);
            (*emit)(g);
            return;
        }
        const int64_t el = static_cast<int64_t>(ell);
        std::vector<int64_t> v(d, 0), w(d, 0);
        for (;;) {  // odometer over nonzero isotropic v
            int p = 0;
            while (p < d && v[p] == el - 1) v[p++] = 0;
            if (p == d) break;
            ++v[p];
            if (cur.q(v) != 0) continue;
            const auto row = cur.bil_row(v);
            int piv = -1;
            for (int i = 0; i < d && piv < 0; ++i)
                if (row[i] != 0) piv = i;
            const int64_t rinv = *inv_mod(row[piv], ell);
            const auto av = mat_vec(carrier, v, ell);
            // odometer over the d-1 free coordinates of w; the pivot
            // coordinate solves B(v, w) = 1
            std::fill(w.begin(), w.end(), 0);
            for (;;) {
                int64_t acc = 1;
                for (int i = 0; i < d; ++i)
                    if (i != piv) acc -= row[i] * w[i];
                w[piv] = mul_mod(mod_reduce(acc, ell), rinv, ell);
                if (cur.q(w) == 0) {
                    cols.push_back(av);
                    cols.push_back(mat_vec(carrier, w, ell));
                    if (d == 2) {
                        run(empty_space, empty_carrier);
                    } else {
                        const auto so = split_off(cur, HyperbolicPair{v, w});
                        run(so.complement, mat_mul(carrier, so.basis, ell));
                    }
                    cols.pop_back();
                    cols.pop_back();
                }
                int q = 0;
                if (q == piv) ++q;
                while (q < d && w[q] == el - 1) {
                    w[q] = 0;
                    if (++q == piv) ++q;
                }
                if (q >= d) break;
                ++w[q];
            }
        }
    }
};

}  // namespace

uint64_t enumerate_group(const QuadSpace& s, const std::function<void(const Mat&)>& visit,
                         uint64_t budget) {
    if (!s.mod.is_prime_power()) throw std::invalid_argument("enumeration needs a prime-power modulus");
    const Int order = group_order(s.rank, s.mod);
    if (order > Int(budget))
        throw std::length_error("group order " + order.str() + " exceeds the enumeration budget");
    const uint64_t ell = s.mod.ell();
    const unsigned e = s.mod.exp();
    const QuadSpace sf = e == 1 ? s : reduce_space(s, ell, 1);

    // enumerate over the residue field, re-based off the standard split model
    // when the space is split in some other basis
    const QuadSpace model = build_standard_split(s.rank / 2, Modulus::make(ell));
    std::optional<Mat> tinv;
    if (sf.theta != model.theta) {
        const auto t = split_basis(sf);
        if (!t) throw std::invalid_argument("enumeration needs a split space");
        tinv = *mat_inverse(*t, ell);
    }

    uint64_t count = 0;
    std::function<void(const Mat&)> leaf;
    std::optional<LiftContext> ctx;
    if (e == 1) {
        leaf = [&](const Mat& g) {
            ++count;
            visit(g);
        };
    } else {
        // walk every chain of Lie-kernel lifts above each field element
        ctx.emplace(make_lift_context(s));
        leaf = [&](const Mat& gf) {
            const auto lift_rec = [&](const auto& self, const Mat& g, unsigned level) -> void {
                if (level == e) {
                    ++count;
                    visit(g);
                    return;
                }
                std::vector<int64_t> digits(static_cast<size_t>(ctx->lie_dim), 0);
                for (;;) {
                    self(self, lift_one_level(*ctx, g, level, alternating_from_digits(s.rank, ell, digits)),
                         level + 1);
                    size_t p = 0;
                    while (p < digits.size() && digits[p] == static_cast<int64_t>(ell) - 1) digits[p++] = 0;
                    if (p == digits.size()) break;
                    ++digits[p];
                }
            };
            lift_rec(lift_rec, gf, 1);
        };
    }

    EnumTree tree;
    tree.ell = ell;
    tree.rank = s.rank;
    tree.cols.reserve(static_cast<size_t>(s.rank));
    tree.emit = &leaf;
    tree.basis_inv = tinv ? &*tinv : nullptr;
    tree.empty_space = QuadSpace{Modulus::make(ell), 0, Mat(0, 0), Mat(0, 0)};
    tree.empty_carrier = Mat(s.rank, 0);
    tree.run(sf, Mat::identity(s.rank));
    return count;
}

}  // namespace orthosel
