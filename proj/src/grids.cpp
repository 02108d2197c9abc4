#include "srg/grids.hpp"

#include <algorithm>
#include <cmath>

namespace srg {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSnapTol = 1e-12;
} // namespace

RadialGrid::RadialGrid(int n_nodes, double rho_, double delta_, double mu_)
    : rho(rho_), delta(delta_), mu(mu_) {
    if (n_nodes < 2) throw DomainError("radial grid needs at least two nodes");
    nodes.resize(n_nodes);
    for (int j = 0; j < n_nodes; ++j) nodes[j] = rho * std::exp(-j * delta);

    // cell boundaries: b_0 = rho, b_j = rho e^{-(j-1/2) delta}, b_N = 0
    std::vector<double> b(n_nodes + 1);
    b[0] = rho;
    for (int j = 1; j < n_nodes; ++j) b[j] = rho * std::exp(-(j - 0.5) * delta);
    b[n_nodes] = 0.0;

    vol_weights.resize(n_nodes);
    norm_weights.resize(n_nodes);
    double p = (3.0 - mu) / 2.0;
    for (int j = 0; j < n_nodes; ++j) {
        vol_weights[j] = 4.0 * kPi / 3.0 * (std::pow(b[j], 3) - std::pow(b[j + 1], 3));
        norm_weights[j] = 4.0 * kPi / p * (std::pow(b[j], p) - std::pow(b[j + 1], p));
    }
}

RGrid::RGrid(int n_geometric, double rho_, double delta_) : rho(rho_), delta(delta_) {
    if (n_geometric < 1) throw DomainError("r-grid needs at least one geometric node");
    nodes.resize(n_geometric + 1);
    nodes[0] = 0.0;
    for (int j = 0; j < n_geometric; ++j)
        nodes[1 + j] = rho * std::exp(-(n_geometric - 1 - j) * delta);
}

LinLoc locate_linear(const std::vector<double>& asc, double x) {
    LinLoc loc;
    if (x < 0.0) throw DomainError("negative coordinate in grid lookup");
    double top = asc.back();
    if (x > top * (1.0 + kSnapTol)) {
        loc.outside = true;
        return loc;
    }
    if (x >= top) { // snapped top hit
        loc.idx0 = (int)asc.size() - 1;
        loc.w0 = 1.0;
        return loc;
    }
    auto it = std::upper_bound(asc.begin(), asc.end(), x);
    int hi = (int)(it - asc.begin());
    int lo = hi - 1;
    double xlo = lo >= 0 ? asc[lo] : 0.0;
    double xhi = asc[hi];
    // snap exact node hits so grid-multiple contractions shift indices
    if (lo >= 0 && std::abs(x - xlo) <= kSnapTol * std::max(xlo, 1e-300)) {
        loc.idx0 = lo;
        loc.w0 = 1.0;
        return loc;
    }
    if (std::abs(x - xhi) <= kSnapTol * xhi) {
        loc.idx0 = hi;
        loc.w0 = 1.0;
        return loc;
    }
    double t = (x - xlo) / (xhi - xlo);
    loc.idx0 = lo; // may be -1: implicit zero anchor at coordinate 0
    loc.idx1 = hi;
    loc.w0 = 1.0 - t;
    loc.w1 = t;
    return loc;
}

cplx ZStencil::point(int idx) const {
    switch (idx) {
        case 0: return center;
        case 1: return center + cplx(h, 0.0);
        case 2: return center - cplx(h, 0.0);
        case 3: return center + cplx(0.0, h);
        case 4: return center - cplx(0.0, h);
        default: throw DomainError("stencil index out of range");
    }
}

std::array<cplx, ZStencil::kPoints> ZStencil::points() const {
    return {point(0), point(1), point(2), point(3), point(4)};
}

ZFit z_fit(const ZStencil& st, const std::array<cplx, 5>& v) {
    ZFit f;
    f.center = st.center;
    double h = st.h;
    f.a0 = v[0];
    cplx d_re = (v[1] - v[2]) / (2.0 * h);
    cplx d_im = (v[3] - v[4]) / (cplx(0.0, 2.0 * h));
    f.a1 = 0.5 * (d_re + d_im);
    f.a2 = (v[1] + v[2] - v[3] - v[4]) / (4.0 * h * h);
    return f;
}

double cauchy_riemann_residual(const ZStencil& st, const std::array<cplx, 5>& v) {
    double h = st.h;
    cplx d_re = (v[1] - v[2]) / (2.0 * h);
    cplx d_im = (v[3] - v[4]) / (cplx(0.0, 2.0 * h));
    return std::abs(d_re - d_im);
}

Grids::Grids(const ModelConstants& c, int n_modes, double delta, cplx z_center, double h_z)
    : constants(c),
      modes(n_modes, c.rho, delta, c.mu),
      raxis(n_modes, c.rho, delta),
      stencil{z_center, h_z} {
    modes_ascending.assign(modes.nodes.rbegin(), modes.nodes.rend());
}

} // namespace srg
