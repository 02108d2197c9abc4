#pragma once

#include <memory>

#include "srg/grids.hpp"
#include "srg/kernels.hpp"

namespace srg::testutil {

inline std::shared_ptr<const Grids> strict_grids(int n_modes = 8, double delta = 1.0,
                                                 cplx center = cplx(0.0, 0.0),
                                                 double h_z = 1e-3) {
    auto c = ModelConstants::strict_defaults();
    return std::make_shared<Grids>(c, n_modes, delta, center, h_z);
}

inline std::shared_ptr<const Grids> lab_grids(int n_modes = 14, double delta = 1.0,
                                              cplx center = cplx(0.0, 0.0), double h_z = 1e-3) {
    auto c = ModelConstants::lab_defaults();
    return std::make_shared<Grids>(c, n_modes, delta, center, h_z);
}

// fill a kernel from a callable f(z, r, m-moduli, n-moduli)
template <typename F>
void fill_kernel(Kernel& k, const Grids& g, F&& f) {
    auto pts = g.stencil.points();
    const int N = k.n_modes;
    std::vector<int> md(std::max(k.m, 1)), nd(std::max(k.n, 1));
    std::vector<double> mm(k.m), nn(k.n);
    for (long mt = 0; mt < k.m_tuples(); ++mt) {
        tuple_unpack(mt, N, k.m, md.data());
        for (int i = 0; i < k.m; ++i) mm[i] = g.modes.nodes[md[i]];
        for (long nt = 0; nt < k.n_tuples(); ++nt) {
            tuple_unpack(nt, N, k.n, nd.data());
            for (int i = 0; i < k.n; ++i) nn[i] = g.modes.nodes[nd[i]];
            for (int s = 0; s < ZStencil::kPoints; ++s)
                for (int jr = 0; jr < k.n_r; ++jr)
                    k.at(s, jr, mt, nt) = f(pts[s], g.raxis.nodes[jr], mm, nn);
        }
    }
}

} // namespace srg::testutil
