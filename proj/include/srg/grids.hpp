#pragma once

#include <array>
#include <complex>
#include <vector>

#include "srg/params.hpp"

namespace srg {

using cplx = std::complex<double>;

// Geometric momentum-modulus grid on (0, rho]: nodes omega_j = rho e^{-j delta},
// strictly decreasing. Quadrature cells tile [0, rho] exactly (the innermost
// cell absorbs the unresolved infrared tail), so the total d^3k volume of the
// ball is reproduced without error.
struct RadialGrid {
    double rho{};
    double delta{};
    double mu{};
    std::vector<double> nodes;        // omega_j, descending, nodes[0] = rho
    std::vector<double> vol_weights;  // per-cell  integral of 4 pi w^2 dw
    std::vector<double> norm_weights; // per-cell  integral of 4 pi w^{(1-mu)/2} dw

    RadialGrid() = default;
    RadialGrid(int n_nodes, double rho_, double delta_, double mu_);
    int size() const { return (int)nodes.size(); }
};

// r-axis grid on [0, rho]: the geometric nodes plus an anchor node at 0,
// stored ascending. Dilation by a multiple of delta is an exact index shift
// on the geometric part; linear interpolation with the zero anchor composes
// exactly under repeated contraction.
struct RGrid {
    double rho{};
    double delta{};
    std::vector<double> nodes; // ascending; nodes.front() = 0, nodes.back() = rho

    RGrid() = default;
    RGrid(int n_geometric, double rho_, double delta_);
    int size() const { return (int)nodes.size(); }
};

// Linear-interpolation location on an ascending node array. idx = -1 marks
// the implicit anchor (value 0 at coordinate 0); outside = true means the
// point lies above the top node and the value is 0 (no stored support).
struct LinLoc {
    int idx0{-1}, idx1{-1};
    double w0{0}, w1{0};
    bool outside{false};
};

// Exact node hits snap within 1e-12 relative so grid-multiple contractions
// are bit-stable index shifts.
LinLoc locate_linear(const std::vector<double>& ascending, double x);

// Five-point cross in the z-plane: {c, c+h, c-h, c+ih, c-ih}.
struct ZStencil {
    cplx center{};
    double h{1e-3};
    static constexpr int kPoints = 5;

    cplx point(int idx) const;
    std::array<cplx, kPoints> points() const;
};

// Quadratic holomorphic reconstruction through the five stencil values.
struct ZFit {
    cplx center{};
    cplx a0{}, a1{}, a2{};

    cplx eval(cplx z) const {
        cplx d = z - center;
        return a0 + a1 * d + a2 * d * d;
    }
    cplx deriv(cplx z) const { return a1 + 2.0 * a2 * (z - center); }
};

ZFit z_fit(const ZStencil& st, const std::array<cplx, 5>& values);

// Mismatch of the two directional first-derivative estimates; O(h^2) for data
// sampled from an analytic function.
double cauchy_riemann_residual(const ZStencil& st, const std::array<cplx, 5>& values);

// Everything a kernel family is discretized on.
struct Grids {
    ModelConstants constants;
    RadialGrid modes;
    RGrid raxis;
    ZStencil stencil;

    // ascending copy of the mode nodes for interpolation
    std::vector<double> modes_ascending;

    Grids() = default;
    Grids(const ModelConstants& c, int n_modes, double delta, cplx z_center, double h_z);
};

} // namespace srg
