#pragma once

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "srg/grids.hpp"

namespace srg {

// Index helpers for flat storage of momentum tuples (digits are RadialGrid
// node indices, most significant first).
long tuple_count(int n_modes, int arity);
void tuple_unpack(long t, int n_modes, int arity, int* digits);
long tuple_pack(const int* digits, int n_modes, int arity);

// One kernel w_{m,n} sampled on (stencil point, r node, m-tuple, n-tuple).
struct Kernel {
    int m{0}, n{0};
    int n_r{0};
    int n_modes{0};
    std::vector<cplx> values; // [5][n_r][N^m][N^n], row-major

    Kernel() = default;
    Kernel(int m_, int n_, int n_r_, int n_modes_);

    long m_tuples() const { return tuple_count(n_modes, m); }
    long n_tuples() const { return tuple_count(n_modes, n); }

    cplx& at(int s, int jr, long mt, long nt) {
        return values[((long(s) * n_r + jr) * m_tuples() + mt) * n_tuples() + nt];
    }
    cplx at(int s, int jr, long mt, long nt) const {
        return values[((long(s) * n_r + jr) * m_tuples() + mt) * n_tuples() + nt];
    }
};

struct KernelFamily {
    std::shared_ptr<const Grids> grids;
    int m_max{2};
    std::map<std::pair<int, int>, Kernel> kernels; // (m,n) -> kernel, w00 always present

    const Kernel* find(int m, int n) const;
    Kernel& ensure(int m, int n);
};

// w00(z,r) = r, everything else zero.
KernelFamily reference_family(std::shared_ptr<const Grids> grids, int m_max = 2);

// w00(z,r) = z + r: the fixed point of the renormalization map.
KernelFamily free_family(std::shared_ptr<const Grids> grids, int m_max = 2);

// Average over the two permutation groups acting on the creation- and
// annihilation-side tuples.
Kernel symmetrize(const Kernel& k, const Grids& grids);
KernelFamily symmetrize(const KernelFamily& f);

// Canonical class representative: values with r + |tuple|_1 > rho on either
// side are set to zero.
KernelFamily canonicalize(const KernelFamily& f);

// Argument contraction by e^{-alpha} with the e^{alpha - (3/2)(m+n) alpha}
// prefactor; spectral-parameter substitution is not applied here.
KernelFamily scale_kernels(const KernelFamily& f, double alpha);

// Value at a stored stencil point, interpolating linearly in r and in each
// modulus (zero-anchored below the grid, zero above stored support).
cplx eval_at_stencil(const KernelFamily& f, int m, int n, int s, double r,
                     const std::vector<double>& moduli_m, const std::vector<double>& moduli_n);

// Full evaluation: quadratic z-reconstruction through the five stencil values
// of the (r, moduli)-interpolated kernel.
cplx eval(const KernelFamily& f, int m, int n, cplx z, double r,
          const std::vector<double>& moduli_m, const std::vector<double>& moduli_n);

// Central-difference z-derivative; the result holds derivative values at each
// stencil point.
Kernel d_dz(const KernelFamily& f, int m, int n);

// Pointwise sum (same grids); used to assemble w + w~ composites.
KernelFamily add_families(const KernelFamily& a, const KernelFamily& b);

// sup over all stored entries of |a - b|, missing kernels counting as zero
double family_sup_distance(const KernelFamily& a, const KernelFamily& b);

} // namespace srg
