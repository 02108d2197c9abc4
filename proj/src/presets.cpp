#include "srg/presets.hpp"

#include <cmath>
#include <random>

#include "srg/seminorms.hpp"

namespace srg {

KernelFamily coupling_family(std::shared_ptr<const Grids> grids, double g, int m_max) {
    KernelFamily f = free_family(std::move(grids), m_max);
    const Grids& gr = *f.grids;
    double p = (1.0 - gr.constants.mu) / 2.0;
    for (auto [m, n] : {std::pair{1, 0}, std::pair{0, 1}}) {
        Kernel& k = f.ensure(m, n);
        for (long t = 0; t < (long)gr.modes.size(); ++t) {
            double v = g * std::pow(gr.modes.nodes[t], -p);
            for (int s = 0; s < ZStencil::kPoints; ++s)
                for (int jr = 0; jr < k.n_r; ++jr)
                    k.at(s, jr, m == 1 ? t : 0, n == 1 ? t : 0) = cplx(v, 0.0);
        }
    }
    return canonicalize(f);
}

KernelFamily random_polydisc_family(std::shared_ptr<const Grids> grids, const EpsilonTriple& eps,
                                    std::uint64_t seed, double fill, int m_max) {
    KernelFamily f = free_family(std::move(grids), m_max);
    const Grids& gr = *f.grids;
    const double rho = gr.constants.rho;
    const double xi = gr.constants.xi;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);

    // free-part perturbation: w00 += a r^2 / rho, difference quotient <= 2|a|
    {
        double a = fill * 0.5 * (double)eps.eps_F * u(rng);
        Kernel& w00 = f.ensure(0, 0);
        for (int s = 0; s < ZStencil::kPoints; ++s)
            for (int jr = 0; jr < w00.n_r; ++jr) {
                double r = gr.raxis.nodes[jr];
                w00.at(s, jr, 0, 0) += cplx(a * r * r / rho, 0.0);
            }
    }

    // interaction kernels: weighted smooth shapes, then rescaled so each
    // (m,n) contributes the same target to the interaction norm
    double p = (1.0 - gr.constants.mu) / 2.0;
    auto pts = gr.stencil.points();
    for (int m = 0; m <= m_max; ++m)
        for (int n = 0; m + n <= m_max; ++n) {
            if (m + n < 1) continue;
            Kernel& k = f.ensure(m, n);
            cplx c0(u(rng), u(rng)), c1(u(rng), u(rng)), c2(u(rng), u(rng));
            cplx dz(0.2 * u(rng), 0.2 * u(rng));
            const int N = k.n_modes;
            std::vector<int> md(std::max(m, 1)), nd(std::max(n, 1));
            for (long mt = 0; mt < k.m_tuples(); ++mt) {
                tuple_unpack(mt, N, m, md.data());
                double wprod = 1.0, xprod = 1.0;
                for (int i = 0; i < m; ++i) {
                    wprod *= std::pow(gr.modes.nodes[md[i]], -p);
                    xprod *= gr.modes.nodes[md[i]] / rho;
                }
                for (long nt = 0; nt < k.n_tuples(); ++nt) {
                    tuple_unpack(nt, N, k.n, nd.data());
                    double wprod2 = wprod, xprod2 = xprod;
                    for (int i = 0; i < n; ++i) {
                        wprod2 *= std::pow(gr.modes.nodes[nd[i]], -p);
                        xprod2 *= gr.modes.nodes[nd[i]] / rho;
                    }
                    for (int jr = 0; jr < k.n_r; ++jr) {
                        double r = gr.raxis.nodes[jr] / rho;
                        cplx shape = c0 + c1 * r + c2 * xprod2;
                        for (int s = 0; s < ZStencil::kPoints; ++s)
                            k.at(s, jr, mt, nt) =
                                wprod2 * shape * (1.0 + dz * (pts[s] - pts[0]) / rho);
                    }
                }
            }
        }

    f = canonicalize(symmetrize(f));

    // rescale each interaction kernel so that the family interaction norm is
    // exactly fill * eps_I
    double target = fill * (double)eps.eps_I * xi * (1.0 - xi) * (1.0 - xi) / 2.0;
    for (int m = 0; m <= m_max; ++m)
        for (int n = 0; m + n <= m_max; ++n) {
            if (m + n < 1) continue;
            Kernel& k = f.ensure(m, n);
            double unit = norm_inf_mn(f, m, n) + norm_zero(f, m, n, 0.0);
            double scale = unit > 0 ? target * std::pow(xi, m + n - 1) / unit : 0.0;
            for (auto& v : k.values) v *= scale;
        }
    return f;
}

} // namespace srg
