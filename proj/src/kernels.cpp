#include "srg/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace srg {

namespace {
constexpr double kCutoffTol = 1.0 + 1e-12;
} // namespace

long tuple_count(int n_modes, int arity) {
    long c = 1;
    for (int i = 0; i < arity; ++i) c *= n_modes;
    return c;
}

void tuple_unpack(long t, int n_modes, int arity, int* digits) {
    for (int i = arity - 1; i >= 0; --i) {
        digits[i] = (int)(t % n_modes);
        t /= n_modes;
    }
}

long tuple_pack(const int* digits, int n_modes, int arity) {
    long t = 0;
    for (int i = 0; i < arity; ++i) t = t * n_modes + digits[i];
    return t;
}

Kernel::Kernel(int m_, int n_, int n_r_, int n_modes_)
    : m(m_), n(n_), n_r(n_r_), n_modes(n_modes_) {
    values.assign(long(ZStencil::kPoints) * n_r * tuple_count(n_modes, m) * tuple_count(n_modes, n),
                  cplx(0.0, 0.0));
}

const Kernel* KernelFamily::find(int m, int n) const {
    auto it = kernels.find({m, n});
    return it == kernels.end() ? nullptr : &it->second;
}

Kernel& KernelFamily::ensure(int m, int n) {
    auto it = kernels.find({m, n});
    if (it != kernels.end()) return it->second;
    auto [pos, ok] = kernels.emplace(std::make_pair(m, n),
                                     Kernel(m, n, grids->raxis.size(), grids->modes.size()));
    (void)ok;
    return pos->second;
}

KernelFamily reference_family(std::shared_ptr<const Grids> grids, int m_max) {
    KernelFamily f;
    f.grids = std::move(grids);
    f.m_max = m_max;
    Kernel& w00 = f.ensure(0, 0);
    for (int s = 0; s < ZStencil::kPoints; ++s)
        for (int jr = 0; jr < w00.n_r; ++jr)
            w00.at(s, jr, 0, 0) = cplx(f.grids->raxis.nodes[jr], 0.0);
    return f;
}

KernelFamily free_family(std::shared_ptr<const Grids> grids, int m_max) {
    KernelFamily f = reference_family(std::move(grids), m_max);
    Kernel& w00 = f.ensure(0, 0);
    auto pts = f.grids->stencil.points();
    for (int s = 0; s < ZStencil::kPoints; ++s)
        for (int jr = 0; jr < w00.n_r; ++jr)
            w00.at(s, jr, 0, 0) += pts[s];
    return f;
}

namespace {

std::vector<std::vector<int>> permutations(int arity) {
    std::vector<int> p(arity);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

} // namespace

Kernel symmetrize(const Kernel& k, const Grids&) {
    if (k.m < 2 && k.n < 2) return k;
    Kernel out = k;
    auto pm = permutations(k.m);
    auto pn = permutations(k.n);
    const int N = k.n_modes;
    std::vector<int> md(std::max(k.m, 1)), nd(std::max(k.n, 1)), tmp(std::max({k.m, k.n, 1}));
    for (int s = 0; s < ZStencil::kPoints; ++s)
        for (int jr = 0; jr < k.n_r; ++jr)
            for (long mt = 0; mt < k.m_tuples(); ++mt) {
                tuple_unpack(mt, N, k.m, md.data());
                for (long nt = 0; nt < k.n_tuples(); ++nt) {
                    tuple_unpack(nt, N, k.n, nd.data());
                    cplx acc(0.0, 0.0);
                    for (const auto& sm : pm)
                        for (const auto& sn : pn) {
                            for (int i = 0; i < k.m; ++i) tmp[i] = md[sm[i]];
                            long pmt = tuple_pack(tmp.data(), N, k.m);
                            for (int i = 0; i < k.n; ++i) tmp[i] = nd[sn[i]];
                            long pnt = tuple_pack(tmp.data(), N, k.n);
                            acc += k.at(s, jr, pmt, pnt);
                        }
                    out.at(s, jr, mt, nt) = acc / double(pm.size() * pn.size());
                }
            }
    return out;
}

KernelFamily symmetrize(const KernelFamily& f) {
    KernelFamily out = f;
    for (auto& [mn, k] : out.kernels) k = symmetrize(k, *f.grids);
    return out;
}

KernelFamily canonicalize(const KernelFamily& f) {
    KernelFamily out = f;
    const auto& g = *f.grids;
    const double rho = g.constants.rho;
    for (auto& [mn, k] : out.kernels) {
        const int N = k.n_modes;
        std::vector<int> md(std::max(k.m, 1)), nd(std::max(k.n, 1));
        for (long mt = 0; mt < k.m_tuples(); ++mt) {
            tuple_unpack(mt, N, k.m, md.data());
            double msum = 0;
            for (int i = 0; i < k.m; ++i) msum += g.modes.nodes[md[i]];
            for (long nt = 0; nt < k.n_tuples(); ++nt) {
                tuple_unpack(nt, N, k.n, nd.data());
                double nsum = 0;
                for (int i = 0; i < k.n; ++i) nsum += g.modes.nodes[nd[i]];
                for (int jr = 0; jr < k.n_r; ++jr) {
                    double r = g.raxis.nodes[jr];
                    if (r + msum > rho * kCutoffTol || r + nsum > rho * kCutoffTol)
                        for (int s = 0; s < ZStencil::kPoints; ++s)
                            k.at(s, jr, mt, nt) = cplx(0.0, 0.0);
                }
            }
        }
    }
    return out;
}

namespace {

// multilinear gather over (r, moduli) at one stencil point
cplx interp_stencil_point(const Kernel& k, const Grids& g, int s, double r,
                          const std::vector<double>& mm, const std::vector<double>& nn) {
    LinLoc rloc = locate_linear(g.raxis.nodes, r);
    if (rloc.outside) return cplx(0.0, 0.0);
    const int a = k.m + k.n;
    std::vector<LinLoc> locs(a);
    for (int i = 0; i < k.m; ++i) locs[i] = locate_linear(g.modes_ascending, mm[i]);
    for (int i = 0; i < k.n; ++i) locs[k.m + i] = locate_linear(g.modes_ascending, nn[i]);
    for (const auto& l : locs)
        if (l.outside) return cplx(0.0, 0.0);

    const int N = k.n_modes;
    std::vector<int> md(std::max(k.m, 1)), nd(std::max(k.n, 1));
    cplx acc(0.0, 0.0);
    int corners = 1 << a;
    for (int rc = 0; rc < 2; ++rc) {
        int jr = rc == 0 ? rloc.idx0 : rloc.idx1;
        double wr = rc == 0 ? rloc.w0 : rloc.w1;
        if (jr < 0 || wr == 0.0) continue;
        for (int c = 0; c < corners; ++c) {
            double w = wr;
            bool anchored = false;
            for (int i = 0; i < a && !anchored; ++i) {
                const LinLoc& l = locs[i];
                int idx = (c >> i) & 1 ? l.idx1 : l.idx0;
                double wi = (c >> i) & 1 ? l.w1 : l.w0;
                if (wi == 0.0 || idx < 0) {
                    anchored = true; // zero anchor below the mode grid
                    break;
                }
                // ascending index -> grid node index
                int digit = N - 1 - idx;
                if (i < k.m)
                    md[i] = digit;
                else
                    nd[i - k.m] = digit;
                w *= wi;
            }
            if (anchored || w == 0.0) continue;
            long mt = tuple_pack(md.data(), N, k.m);
            long nt = tuple_pack(nd.data(), N, k.n);
            acc += w * k.at(s, jr, mt, nt);
        }
    }
    return acc;
}

} // namespace

cplx eval_at_stencil(const KernelFamily& f, int m, int n, int s, double r,
                     const std::vector<double>& mm, const std::vector<double>& nn) {
    const Kernel* k = f.find(m, n);
    if (!k) return cplx(0.0, 0.0);
    return interp_stencil_point(*k, *f.grids, s, r, mm, nn);
}

cplx eval(const KernelFamily& f, int m, int n, cplx z, double r,
          const std::vector<double>& mm, const std::vector<double>& nn) {
    const Kernel* k = f.find(m, n);
    if (!k) return cplx(0.0, 0.0);
    std::array<cplx, 5> v{};
    for (int s = 0; s < ZStencil::kPoints; ++s)
        v[s] = interp_stencil_point(*k, *f.grids, s, r, mm, nn);
    return z_fit(f.grids->stencil, v).eval(z);
}

KernelFamily scale_kernels(const KernelFamily& f, double alpha) {
    if (alpha < 0.0) throw DomainError("scale_kernels requires alpha >= 0");
    const auto& g = *f.grids;
    KernelFamily out;
    out.grids = f.grids;
    out.m_max = f.m_max;
    double contraction = std::exp(-alpha);
    for (const auto& [mn, k] : f.kernels) {
        auto [m, n] = mn;
        Kernel& ko = out.ensure(m, n);
        double pref = std::exp(alpha * (1.0 - 1.5 * (m + n)));
        const int N = k.n_modes;
        std::vector<int> md(std::max(m, 1)), nd(std::max(n, 1));
        std::vector<double> mm(m), nn(n);
        for (long mt = 0; mt < k.m_tuples(); ++mt) {
            tuple_unpack(mt, N, m, md.data());
            for (int i = 0; i < m; ++i) mm[i] = contraction * g.modes.nodes[md[i]];
            for (long nt = 0; nt < k.n_tuples(); ++nt) {
                tuple_unpack(nt, N, n, nd.data());
                for (int i = 0; i < n; ++i) nn[i] = contraction * g.modes.nodes[nd[i]];
                for (int jr = 0; jr < k.n_r; ++jr) {
                    double r = contraction * g.raxis.nodes[jr];
                    for (int s = 0; s < ZStencil::kPoints; ++s)
                        ko.at(s, jr, mt, nt) = pref * interp_stencil_point(k, g, s, r, mm, nn);
                }
            }
        }
    }
    return out;
}

Kernel d_dz(const KernelFamily& f, int m, int n) {
    const Kernel* kp = f.find(m, n);
    const auto& g = *f.grids;
    Kernel out(m, n, g.raxis.size(), g.modes.size());
    if (!kp) return out;
    const Kernel& k = *kp;
    auto pts = g.stencil.points();
    for (int jr = 0; jr < k.n_r; ++jr)
        for (long mt = 0; mt < k.m_tuples(); ++mt)
            for (long nt = 0; nt < k.n_tuples(); ++nt) {
                std::array<cplx, 5> v{};
                for (int s = 0; s < ZStencil::kPoints; ++s) v[s] = k.at(s, jr, mt, nt);
                ZFit fit = z_fit(g.stencil, v);
                for (int s = 0; s < ZStencil::kPoints; ++s)
                    out.at(s, jr, mt, nt) = fit.deriv(pts[s]);
            }
    return out;
}

KernelFamily add_families(const KernelFamily& a, const KernelFamily& b) {
    KernelFamily out = a;
    for (const auto& [mn, kb] : b.kernels) {
        Kernel& ka = out.ensure(mn.first, mn.second);
        for (std::size_t i = 0; i < kb.values.size(); ++i) ka.values[i] += kb.values[i];
    }
    return out;
}

double family_sup_distance(const KernelFamily& a, const KernelFamily& b) {
    double sup = 0.0;
    auto visit = [&](const KernelFamily& x, const KernelFamily& y) {
        for (const auto& [mn, kx] : x.kernels) {
            const Kernel* ky = y.find(mn.first, mn.second);
            for (std::size_t i = 0; i < kx.values.size(); ++i) {
                cplx d = kx.values[i] - (ky ? ky->values[i] : cplx(0.0, 0.0));
                sup = std::max(sup, std::abs(d));
            }
        }
    };
    visit(a, b);
    visit(b, a);
    return sup;
}

} // namespace srg
