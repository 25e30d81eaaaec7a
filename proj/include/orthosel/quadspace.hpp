#pragma once
#include <optional>
#include <vector>

#include "modring.hpp"

namespace orthosel {

// Even-rank quadratic space over Z/nZ.  The form is stored by its
// upper-triangular Gram theta (so char-2 moduli stay meaningful):
//   Q(x) = x^T theta x,   B(x, y) = x^T (theta + theta^T) y,
// and B(x, x) = 2 Q(x).
struct QuadSpace {
    Modulus mod;
    int rank = 0;
    Mat theta;     // upper triangular
    Mat bilinear;  // theta + theta^T, cached

    int64_t q(const std::vector<int64_t>& v) const;
    int64_t b(const std::vector<int64_t>& u, const std::vector<int64_t>& v) const;
    std::vector<int64_t> bil_row(const std::vector<int64_t>& v) const;  // v^T (theta+theta^T)
    int64_t disc() const;  // det of the bilinear Gram
};

QuadSpace make_space(const Modulus& mod, Mat theta);

// Q = x1 x2 + x3 x4 + ... + x_{2m-1} x_{2m}
QuadSpace build_standard_split(int m, const Modulus& mod);

// U^{2d-2} + (-E8)^d, rank 12d - 4, with the E8 block taken in a root basis
// (Gram = Cartan matrix, determinant 1, even diagonal).
QuadSpace build_qsel(int d, const Modulus& mod);
const Mat& e8_gram();

QuadSpace reduce_space(const QuadSpace& s, uint64_t ell, unsigned e);

// r_v(w) = w - B(w,v)/Q(v) * v; Q(v) must be a unit
Mat reflection(const QuadSpace& s, const std::vector<int64_t>& v);

// g^T theta g - theta alternating with zero diagonal, i.e. Q(gx) = Q(x) for all x
bool isometry_check(const QuadSpace& s, const Mat& g);

struct HyperbolicPair {
    std::vector<int64_t> e, f;  // Q(e) = Q(f) = 0, B(e, f) = 1
};

// first isotropic unimodular vector in lexicographic coefficient order over the
// given basis of a subspace (defaults to the standard basis), paired with a
// partner solved from the linear system.  Prime-power moduli only.
std::optional<HyperbolicPair> find_hyperbolic_pair(const QuadSpace& s,
                                                   const std::optional<Mat>& sub_basis = std::nullopt);

// orthogonal complement of span(e, f) as column basis + the restricted space
struct SplitOff {
    Mat basis;  // rank x (rank-2), columns
    QuadSpace complement;
};
SplitOff split_off(const QuadSpace& s, const HyperbolicPair& p);

// full Witt decomposition: T with columns successive hyperbolic pairs; the
// change of basis takes the space to build_standard_split(rank/2).
std::optional<Mat> split_basis(const QuadSpace& s);

}  // namespace orthosel
