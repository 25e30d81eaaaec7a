#pragma once
#include <functional>
#include <optional>

#include "quadspace.hpp"
#include "rng.hpp"

namespace orthosel {

// |O(Q)| for Q split of rank 2m over F_q
Int split_orthogonal_order(int m, uint64_t q);
// over Z/ell^e: the field order times ell^((e-1) m(2m-1)); composite moduli
// multiply over the prime factors
Int group_order(int rank, const Modulus& mod);

// Dickson invariant of g over Z/ell^e: dim ker(g - 1 mod ell) mod 2.
// Composite moduli go through crt_split and one call per prime factor.
int dickson(const QuadSpace& s, const Mat& g);

// Spinor norm as a square class, encoded 0 (trivial) / 1.  Odd prime-power
// moduli, plus the vacuous ell = 2, e = 1 case which is always 0.
int spinor(const QuadSpace& s, const Mat& g);             // reflection descent (reference)
int spinor_wall(const QuadSpace& s, const Mat& g);        // Wall-form discriminant
// disc(B) * det(1 - g) as a square class when det(1 - g) is a unit; nullopt otherwise
std::optional<int> spinor_zassenhaus(const QuadSpace& s, const Mat& g);

// dimension of the generalized 1-eigenspace over F_ell (field modulus)
int generalized_fixed_rank(const QuadSpace& s, const Mat& g);

// uniform over the full orthogonal group of a split space; for e >= 2 samples
// the residue-field layer and walks up one Hensel level at a time
Mat sample_uniform(const QuadSpace& s, Rng& rng);

// Coset constraint: Dickson value 0, 1, or -1 meaning "equal across primes,
// either value", plus a per-odd-prime spinor class (-1 = unconstrained).
struct CosetSpec {
    int dickson = -1;
    std::vector<std::pair<uint64_t, int>> spinor_targets;  // (ell, class), ell ascending

    // the coset the kernel model draws from: Dickson diagonal (either value),
    // spinor class of q^(d-1) at each odd prime of mod
    static CosetSpec from_q(uint64_t q, int d, const Modulus& mod);
    int spinor_target(uint64_t ell) const;  // -1 when unconstrained
    // one entry per prime factor, ells ascending as in Modulus::factors
    bool matches(const std::vector<uint64_t>& ells, const std::vector<int>& dicksons,
                 const std::vector<int>& spinors) const;
};

inline constexpr int kRejectionCap = 1024;

// one prime-power block of a sampled element, with its invariants cached
// (spinor is meaningful for odd ell; it is stored as 0 at ell = 2)
struct OrthoElem {
    Mat g;
    int dickson = 0;
    int spinor = 0;
};
OrthoElem classify_element(const QuadSpace& s, Mat g);

// one component per prime-power factor space; throws std::runtime_error after
// kRejectionCap joint rejections
std::vector<OrthoElem> sample_coset(const std::vector<QuadSpace>& prime_spaces,
                                    const CosetSpec& spec, Rng& rng);

// visit every element of O(Q) for a split space over Z/ell^e, each exactly
// once; returns the count.  Throws std::length_error (message carries the
// computed order) when |O(Q)| exceeds budget.
uint64_t enumerate_group(const QuadSpace& s, const std::function<void(const Mat&)>& visit,
                         uint64_t budget = 100'000'000);

// Hensel step shared by the sampler, the enumerator, and the lagrangian
// model: the isometries mod ell^(level+1) reducing to g mod ell^level are
// exactly g * (1 + ell^level (Z0(g) + Binv A)) with A alternating mod ell.
struct LiftContext {
    const QuadSpace* space;  // over the full target modulus ell^e
    Mat binv;
    int lie_dim;             // n(n-1)/2 alternating coordinates per level
};
LiftContext make_lift_context(const QuadSpace& s);
Mat lift_one_level(const LiftContext& ctx, const Mat& g, unsigned level, const Mat& alt);
Mat alternating_from_digits(int n, uint64_t ell, const std::vector<int64_t>& coeffs);

}  // namespace orthosel
