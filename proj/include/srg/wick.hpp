#pragma once

#include <vector>

#include "srg/kernels.hpp"

namespace srg {

// One contraction term in the Neumann expansion: L factors, block ell
// carrying m_bar[ell] external creations, n_bar[ell] external annihilations,
// p_bar[ell]/q_bar[ell] internal legs.
struct ContractionIndex {
    int L{0};
    std::vector<int> m_bar, n_bar, p_bar, q_bar;
};

// Complete enumeration with the internal-leg truncation p,q <= P_max,
// deterministic order. Every factor must carry at least one leg.
std::vector<ContractionIndex> enumerate_B_L(int L, int m, int n, int P_max);

// Structurally vanishing terms: leading internal creations or trailing
// internal annihilations hit the vacuum, internal legs unbalanced, running
// photon count negative, or a referenced kernel absent from the family.
bool upsilon_productive(const KernelFamily& f, const ContractionIndex& u);

struct ROffsets {
    std::vector<double> r;       // per-block spectator energy offset
    std::vector<double> r_tilde; // r plus the block's own annihilation moduli
};

// ext_m / ext_n are the ordered external moduli, split sequentially into
// blocks by m_bar / n_bar.
ROffsets r_offsets(const ContractionIndex& u, const std::vector<double>& ext_m,
                   const std::vector<double>& ext_n);

// Vacuum expectation of the L-fold product at one point; kernels and the
// resolvent are read from the family (quadratic z-reconstruction off the
// stencil). Throws DomainError if the resolvent denominator collapses.
cplx eval_V_upsilon(const KernelFamily& f, const ContractionIndex& u, cplx z, double r,
                    const std::vector<double>& ext_m, const std::vector<double>& ext_n,
                    double alpha);

// Composed correction family: for each (m,n),
//   w~_{m,n} = sum_{L=2}^{L_max} (-1)^{L-1} sum_upsilon [prod binomials] V_upsilon,
// symmetrized, sampled on the family's own stencil and grids.
KernelFamily compose_tilde_w(const KernelFamily& f, double alpha, int L_max, int P_max);

} // namespace srg
