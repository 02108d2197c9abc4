#include "srg/seminorms.hpp"

#include <cmath>

namespace srg {

namespace {

constexpr double kSlack = 1.0 + 1e-12;

double weight_product(const Kernel& k, const Grids& g, long mt, long nt) {
    const int N = k.n_modes;
    double p = (1.0 - g.constants.mu) / 2.0;
    double w = 1.0;
    std::vector<int> d(std::max(k.m, 1));
    tuple_unpack(mt, N, k.m, d.data());
    for (int i = 0; i < k.m; ++i) w *= std::pow(g.modes.nodes[d[i]], p);
    std::vector<int> dn(std::max(k.n, 1));
    tuple_unpack(nt, N, k.n, dn.data());
    for (int i = 0; i < k.n; ++i) w *= std::pow(g.modes.nodes[dn[i]], p);
    return w;
}

} // namespace

double norm_inf_0(const Kernel& k, const Grids& g) {
    double sup = 0.0;
    for (long mt = 0; mt < k.m_tuples(); ++mt)
        for (long nt = 0; nt < k.n_tuples(); ++nt) {
            double w = weight_product(k, g, mt, nt);
            for (int s = 0; s < ZStencil::kPoints; ++s)
                for (int jr = 0; jr < k.n_r; ++jr)
                    sup = std::max(sup, std::abs(k.at(s, jr, mt, nt)) * w);
        }
    return sup;
}

double norm_inf(const Kernel& k, const Kernel& k_dz, const Grids& g) {
    return norm_inf_0(k, g) + norm_inf_0(k_dz, g);
}

double norm_inf_mn(const KernelFamily& f, int m, int n) {
    const Kernel* k = f.find(m, n);
    if (!k) return 0.0;
    return norm_inf(*k, d_dz(f, m, n), *f.grids);
}

namespace {

// node-tuple measure weights with the l1 indicator at cut
double measure_product(const Kernel& k, const Grids& g, long t, int arity, double cut) {
    const int N = k.n_modes;
    std::vector<int> d(std::max(arity, 1));
    tuple_unpack(t, N, arity, d.data());
    double sum = 0.0, w = 1.0;
    for (int i = 0; i < arity; ++i) {
        sum += g.modes.nodes[d[i]];
        w *= g.modes.norm_weights[d[i]];
    }
    if (sum > cut * kSlack) return 0.0;
    return w;
}

} // namespace

double norm_zero(const KernelFamily& f, int m, int n, double alpha) {
    if (m + n < 1) throw DomainError("norm_zero requires m+n >= 1; use norm_zero_00");
    const Kernel* kp = f.find(m, n);
    if (!kp) return 0.0;
    const Kernel& k = *kp;
    const Grids& g = *f.grids;
    const double cut = g.constants.rho * std::exp(-alpha);

    std::vector<double> mw(k.m_tuples()), nw(k.n_tuples());
    for (long mt = 0; mt < k.m_tuples(); ++mt) mw[mt] = measure_product(k, g, mt, m, cut);
    for (long nt = 0; nt < k.n_tuples(); ++nt) nw[nt] = measure_product(k, g, nt, n, cut);

    double sup = 0.0;
    const auto& rn = g.raxis.nodes;
    for (int j1 = 0; j1 < (int)rn.size(); ++j1) {
        for (int j2 = j1 + 1; j2 < (int)rn.size(); ++j2) {
            if (rn[j2] > cut * kSlack) break; // s + r <= e^{-alpha} rho
            double r = rn[j2] - rn[j1];
            for (int s = 0; s < ZStencil::kPoints; ++s) {
                double acc = 0.0;
                for (long mt = 0; mt < k.m_tuples(); ++mt) {
                    if (mw[mt] == 0.0) continue;
                    for (long nt = 0; nt < k.n_tuples(); ++nt) {
                        if (nw[nt] == 0.0) continue;
                        acc += mw[mt] * nw[nt]
                               * std::abs(k.at(s, j2, mt, nt) - k.at(s, j1, mt, nt));
                    }
                }
                sup = std::max(sup, acc / r);
            }
        }
    }
    return sup;
}

double norm_zero_00(const KernelFamily& f, double alpha) {
    const Kernel* kp = f.find(0, 0);
    if (!kp) return 0.0;
    const Kernel& k = *kp;
    const Grids& g = *f.grids;
    const double cut = g.constants.rho * std::exp(-alpha);
    double sup = 0.0;
    const auto& rn = g.raxis.nodes;
    for (int j1 = 0; j1 < (int)rn.size(); ++j1)
        for (int j2 = j1 + 1; j2 < (int)rn.size(); ++j2) {
            if (rn[j2] > cut * kSlack) break;
            double r = rn[j2] - rn[j1];
            for (int s = 0; s < ZStencil::kPoints; ++s)
                sup = std::max(sup, std::abs(k.at(s, j2, 0, 0) - k.at(s, j1, 0, 0)) / r);
        }
    return sup;
}

double norm_I_weighted(const KernelFamily& f, double xi) {
    double sup = 0.0;
    for (int m = 0; m <= f.m_max; ++m)
        for (int n = 0; n + m <= f.m_max; ++n) {
            if (m + n < 1) continue;
            if (!f.find(m, n)) continue;
            double v = norm_inf_mn(f, m, n) + norm_zero(f, m, n, 0.0);
            sup = std::max(sup, std::pow(xi, -(m + n)) * v);
        }
    return 2.0 / ((1.0 - xi) * (1.0 - xi)) * sup;
}

double norm_I(const KernelFamily& f) { return norm_I_weighted(f, f.grids->constants.xi); }

double norm_F(const KernelFamily& f) {
    const Kernel* kp = f.find(0, 0);
    if (!kp) return 0.0;
    const Kernel& k = *kp;
    const Grids& g = *f.grids;
    const auto& rn = g.raxis.nodes;
    double sup = 0.0;
    for (int j1 = 0; j1 < (int)rn.size(); ++j1)
        for (int j2 = j1 + 1; j2 < (int)rn.size(); ++j2) {
            double r = rn[j2] - rn[j1];
            for (int s = 0; s < ZStencil::kPoints; ++s) {
                cplx d = (k.at(s, j2, 0, 0) - cplx(rn[j2], 0.0))
                         - (k.at(s, j1, 0, 0) - cplx(rn[j1], 0.0));
                sup = std::max(sup, std::abs(d) / r);
            }
        }
    return sup;
}

double norm_Z(const KernelFamily& f) {
    Kernel d00 = d_dz(f, 0, 0);
    double sup = 0.0;
    for (int s = 0; s < ZStencil::kPoints; ++s)
        for (int jr = 0; jr < d00.n_r; ++jr)
            sup = std::max(sup, std::abs(d00.at(s, jr, 0, 0)));
    return sup;
}

bool in_polydisc(const KernelFamily& f, const EpsilonTriple& eps) {
    const Kernel* w00 = f.find(0, 0);
    if (!w00) return false;
    auto pts = f.grids->stencil.points();
    for (int s = 0; s < ZStencil::kPoints; ++s)
        if (std::abs(w00->at(s, 0, 0, 0) - pts[s]) > 1e-10) return false;
    if ((ledger_real)norm_I(f) > eps.eps_I * (ledger_real)kSlack) return false;
    if ((ledger_real)norm_Z(f) > eps.eps_Z * (ledger_real)kSlack) return false;
    if ((ledger_real)norm_F(f) > eps.eps_F * (ledger_real)kSlack) return false;
    return true;
}

SeminormReport seminorm_report(const KernelFamily& f, double alpha) {
    SeminormReport r;
    r.alpha = alpha;
    for (const auto& [mn, k] : f.kernels) {
        auto [m, n] = mn;
        r.inf0[mn] = norm_inf_0(k, *f.grids);
        r.inf[mn] = norm_inf_mn(f, m, n);
        if (m + n >= 1) {
            r.zero[mn] = norm_zero(f, m, n, 0.0);
            r.alpha_norm[mn] = norm_zero(f, m, n, alpha);
        } else {
            r.zero[mn] = norm_zero_00(f, 0.0);
            r.alpha_norm[mn] = norm_zero_00(f, alpha);
        }
    }
    double xi = f.grids->constants.xi;
    r.I = norm_I(f);
    r.I_4xi = 4.0 * xi < 1.0 ? norm_I_weighted(f, 4.0 * xi) : 0.0;
    r.Z = norm_Z(f);
    r.F = norm_F(f);
    return r;
}

} // namespace srg
