#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rational.hpp"

namespace orthosel {

// Residue arithmetic is done on canonical int64 representatives in [0, n).
// Moduli are expected to be odd prime powers or squarefree-ish composites of
// them; the only supported even prime power beyond 2 itself is what the
// lifting code over Z/2^e needs.
struct Modulus {
    uint64_t n = 0;
    std::vector<std::pair<uint64_t, unsigned>> factors;  // (ell, exponent), ell ascending

    static Modulus make(uint64_t n);
    bool is_prime_power() const { return factors.size() == 1; }
    bool is_prime() const { return factors.size() == 1 && factors[0].second == 1; }
    uint64_t ell() const { return factors[0].first; }
    unsigned exp() const { return factors[0].second; }
};

inline int64_t mod_reduce(int64_t x, uint64_t n) {
    int64_t r = x % static_cast<int64_t>(n);
    return r < 0 ? r + static_cast<int64_t>(n) : r;
}

inline int64_t mul_mod(int64_t a, int64_t b, uint64_t n) {
    return static_cast<int64_t>(static_cast<__int128>(a) * b % static_cast<int64_t>(n));
}

int64_t pow_mod(int64_t base, uint64_t e, uint64_t n);
// inverse of a unit; nullopt when gcd(a, n) > 1
std::optional<int64_t> inv_mod(int64_t a, uint64_t n);

struct Mat {
    int rows = 0, cols = 0;
    std::vector<int64_t> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}
    int64_t& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    int64_t at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
    static Mat identity(int n);
    bool operator==(const Mat&) const = default;
};

Mat mat_mul(const Mat& x, const Mat& y, uint64_t n);
Mat mat_add(const Mat& x, const Mat& y, uint64_t n);
Mat mat_sub(const Mat& x, const Mat& y, uint64_t n);
Mat mat_transpose(const Mat& x);
Mat mat_scale(const Mat& x, int64_t c, uint64_t n);

// Gaussian elimination with unit pivots; nullopt if the matrix is singular
// over Z/n (prime power or composite through CRT on the caller's side).
std::optional<Mat> mat_inverse(const Mat& x, uint64_t n);

// determinant over Z/ell^e via valuation-pivot elimination (exact residue)
int64_t mat_det(const Mat& x, uint64_t ell, unsigned e);

// rank of x over F_ell (entries reduced mod ell)
int rank_mod(const Mat& x, uint64_t ell);
// columns form a basis of ker(x) over F_ell
Mat kernel_basis_mod(const Mat& x, uint64_t ell);

// Smith normal form over Z/ell^e.  Pivots are chosen by minimal ell-adic
// valuation, ties broken lexicographically by (row, col).  u * a * v = d with
// d = diag(ell^exps), exps ascending.
struct Snf {
    std::vector<unsigned> exps;  // length min(rows, cols), values in [0, e]
    Mat u, v;
};
Snf smith_normal_form(const Mat& x, uint64_t ell, unsigned e);

// columns generate ker(x) as a Z/ell^e-module
Mat kernel_generators(const Mat& x, uint64_t ell, unsigned e);

// Isomorphism class of a finite module over Z/nZ: per prime, the multiset of
// exponents c with a cyclic factor Z/ell^c, descending, zeros omitted.
struct ModuleClass {
    std::vector<std::pair<uint64_t, std::vector<unsigned>>> parts;  // ell ascending

    void add_part(uint64_t ell, std::vector<unsigned> exps);
    Int order() const;
    bool trivial() const { return parts.empty(); }
    std::string str() const;
    bool operator==(const ModuleClass&) const = default;
    bool operator<(const ModuleClass& o) const;
};

// class of ker(x : (Z/n)^k -> (Z/n)^k) for square x
ModuleClass kernel_class(const Mat& x, const Modulus& m);

std::vector<Mat> crt_split(const Mat& x, const Modulus& m);
Mat crt_join(const std::vector<Mat>& parts, const Modulus& m);

}  // namespace orthosel
