#pragma once

#include <map>

#include "srg/kernels.hpp"

namespace srg {

struct SeminormReport {
    std::map<std::pair<int, int>, double> inf0;       // sup-norm with momentum weights
    std::map<std::pair<int, int>, double> inf;        // inf0 of value and z-derivative
    std::map<std::pair<int, int>, double> zero;       // difference-quotient norm, full triangle
    std::map<std::pair<int, int>, double> alpha_norm; // restricted variant at the report's alpha
    double alpha{0};
    double I{0};     // interaction norm at the family's xi
    double I_4xi{0}; // same with xi replaced by 4 xi (tracked for partial steps)
    double Z{0};
    double F{0};
};

// sup over grid of |w| * prod |k|^{(1-mu)/2}; supremum over stored nodes.
double norm_inf_0(const Kernel& k, const Grids& g);

double norm_inf(const Kernel& k, const Kernel& k_dz, const Grids& g);

// convenience: builds the z-derivative internally; zero for absent kernels
double norm_inf_mn(const KernelFamily& f, int m, int n);

// Difference-quotient norm with the radially reduced measure
// 4 pi w^{(1-mu)/2} dw per momentum variable; the l1 simplex constraints at
// e^{-alpha} rho are enforced by indicators on node tuples. Requires m+n >= 1.
double norm_zero(const KernelFamily& f, int m, int n, double alpha);

// m = n = 0 variant: plain difference quotients of w00 over the restricted
// triangle.
double norm_zero_00(const KernelFamily& f, double alpha);

double norm_I(const KernelFamily& f);                     // xi from the family constants
double norm_I_weighted(const KernelFamily& f, double xi); // explicit weight
double norm_F(const KernelFamily& f);
double norm_Z(const KernelFamily& f);

// w00(z,0) = z on every stencil point (tol 1e-10) plus the three seminorm
// bounds of the polydisc definition.
bool in_polydisc(const KernelFamily& f, const EpsilonTriple& eps);

SeminormReport seminorm_report(const KernelFamily& f, double alpha);

} // namespace srg
