#include "srg/fock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace srg {

namespace {
constexpr double kSlack = 1.0 + 1e-12;

void enumerate_states(int n_modes, int n_max, std::vector<std::vector<int>>& out) {
    // by total photon number, then lexicographic
    std::vector<int> occ(n_modes, 0);
    for (int total = 0; total <= n_max; ++total) {
        std::fill(occ.begin(), occ.end(), 0);
        // iterate all occupations with sum == total
        std::function<void(int, int)> rec = [&](int mode, int left) {
            if (mode == n_modes - 1) {
                occ[mode] = left;
                out.push_back(occ);
                occ[mode] = 0;
                return;
            }
            for (int c = 0; c <= left; ++c) {
                occ[mode] = c;
                rec(mode + 1, left - c);
            }
            occ[mode] = 0;
        };
        if (n_modes > 0) rec(0, total);
    }
}

} // namespace

FockBasis::FockBasis(std::shared_ptr<const Grids> grids_, int n_max_)
    : grids(std::move(grids_)), n_max(n_max_) {
    enumerate_states(grids->modes.size(), n_max, states);
    energies.resize(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        double e = 0.0;
        for (int j = 0; j < grids->modes.size(); ++j)
            e += states[i][j] * grids->modes.nodes[j];
        energies[i] = e;
        index_[states[i]] = (int)i;
    }
}

int FockBasis::find(const std::vector<int>& occ) const {
    auto it = index_.find(occ);
    return it == index_.end() ? -1 : it->second;
}

FockOperatorMatrix::FockOperatorMatrix(const FockBasis& b)
    : basis(&b), mat(Eigen::MatrixXcd::Zero(b.dim(), b.dim())), active(b.dim(), 1) {}

Mask mask_all(const FockBasis& b) { return Mask(b.dim(), 1); }

Mask mask_energy_le(const FockBasis& b, double cut) {
    Mask m(b.dim(), 0);
    for (int i = 0; i < b.dim(); ++i)
        if (b.energies[i] <= cut * kSlack) m[i] = 1;
    return m;
}

Mask mask_and(const Mask& a, const Mask& b) {
    Mask m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) m[i] = a[i] && b[i];
    return m;
}

int mask_count(const Mask& m) { return (int)std::count(m.begin(), m.end(), 1); }

ModeOps mode_ops(const FockBasis& b) {
    ModeOps ops;
    const int N = b.grids->modes.size();
    ops.annihilate.assign(N, Eigen::MatrixXcd::Zero(b.dim(), b.dim()));
    ops.create.assign(N, Eigen::MatrixXcd::Zero(b.dim(), b.dim()));
    for (int i = 0; i < b.dim(); ++i) {
        const auto& occ = b.states[i];
        for (int j = 0; j < N; ++j) {
            if (occ[j] > 0) {
                std::vector<int> lower = occ;
                lower[j] -= 1;
                int tgt = b.find(lower);
                if (tgt >= 0) ops.annihilate[j](tgt, i) = std::sqrt(double(occ[j]));
            }
            std::vector<int> higher = occ;
            higher[j] += 1;
            int tgt = b.find(higher);
            if (tgt >= 0) ops.create[j](tgt, i) = std::sqrt(double(occ[j] + 1));
        }
    }
    return ops;
}

FockOperatorMatrix h_f(const FockBasis& b) {
    FockOperatorMatrix H(b);
    for (int i = 0; i < b.dim(); ++i) H.mat(i, i) = b.energies[i];
    return H;
}

FockOperatorMatrix build_W_mn(const KernelFamily& f, int m, int n, cplx z, const FockBasis& b) {
    if (!f.find(m, n)) throw DomainError("kernel absent in family");
    FockOperatorMatrix W(b);
    const Grids& g = *b.grids;
    const int N = g.modes.size();
    const auto& vol = g.modes.vol_weights;

    std::vector<double> mm(m), nn(n);
    std::vector<int> cre(std::max(m, 1));
    long n_cre = tuple_count(N, m);

    for (int col = 0; col < b.dim(); ++col) {
        const auto& occ = b.states[col];
        // ordered annihilation tuples drawn from the occupied modes
        std::vector<int> ann(std::max(n, 1));
        std::function<void(int, std::vector<int>&, double, double)> rec_ann =
            [&](int pos, std::vector<int>& cur, double amp, double energy) {
                if (pos == n) {
                    for (int i = 0; i < n; ++i) nn[i] = g.modes.nodes[ann[i]];
                    // intermediate state energy: after the annihilations
                    double e_mid = energy;
                    for (long ct = 0; ct < n_cre; ++ct) {
                        tuple_unpack(ct, N, m, cre.data());
                        // apply creations to cur
                        std::vector<int> out_occ = cur;
                        double amp_c = 1.0;
                        bool ok = true;
                        int total = 0;
                        for (int j = 0; j < N; ++j) total += out_occ[j];
                        for (int i = 0; i < m; ++i) {
                            if (total + 1 > b.n_max) {
                                ok = false;
                                break;
                            }
                            int mode = cre[i];
                            amp_c *= std::sqrt(double(out_occ[mode] + 1) * vol[mode]);
                            out_occ[mode] += 1;
                            ++total;
                            mm[i] = g.modes.nodes[mode];
                        }
                        if (!ok) continue;
                        int row = b.find(out_occ);
                        if (row < 0) continue;
                        cplx w = eval(f, m, n, z, e_mid, mm, nn);
                        if (w == cplx(0.0, 0.0)) continue;
                        W.mat(row, col) += amp * amp_c * w;
                    }
                    return;
                }
                for (int mode = 0; mode < N; ++mode) {
                    if (cur[mode] == 0) continue;
                    double a = std::sqrt(double(cur[mode]) * vol[mode]);
                    cur[mode] -= 1;
                    ann[pos] = mode;
                    rec_ann(pos + 1, cur, amp * a, energy - g.modes.nodes[mode]);
                    cur[mode] += 1;
                }
            };
        std::vector<int> work = occ;
        rec_ann(0, work, 1.0, b.energies[col]);
    }
    return W;
}

FockOperatorMatrix build_H(const KernelFamily& f, cplx z, const FockBasis& b) {
    FockOperatorMatrix H(b);
    Mask chi0 = mask_energy_le(b, b.grids->constants.rho);
    for (const auto& [mn, k] : f.kernels) {
        if (mn.first + mn.second > f.m_max) continue;
        FockOperatorMatrix W = build_W_mn(f, mn.first, mn.second, z, b);
        H.mat += W.mat;
    }
    for (int i = 0; i < b.dim(); ++i)
        for (int j = 0; j < b.dim(); ++j)
            if (!chi0[i] || !chi0[j]) H.mat(i, j) = cplx(0.0, 0.0);
    return H;
}

FockOperatorMatrix chi(double alpha, const FockBasis& b) {
    FockOperatorMatrix P(b);
    Mask m = mask_energy_le(b, b.grids->constants.rho * std::exp(-alpha));
    for (int i = 0; i < b.dim(); ++i) P.mat(i, i) = m[i] ? 1.0 : 0.0;
    return P;
}

namespace {

std::vector<int> mask_indices(const Mask& m) {
    std::vector<int> idx;
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i]) idx.push_back((int)i);
    return idx;
}

Eigen::MatrixXcd gather(const Eigen::MatrixXcd& M, const std::vector<int>& rows,
                        const std::vector<int>& cols) {
    Eigen::MatrixXcd out(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = M(rows[i], cols[j]);
    return out;
}

} // namespace

FockOperatorMatrix schur_feshbach(const FockOperatorMatrix& H, double alpha, double tol_inv_rel) {
    const FockBasis& b = *H.basis;
    double rho = b.grids->constants.rho;
    Mask low = mask_energy_le(b, rho * std::exp(-alpha));
    Mask window = mask_energy_le(b, rho);
    Mask P = mask_and(low, H.active);
    Mask Q(b.dim(), 0);
    for (int i = 0; i < b.dim(); ++i) Q[i] = window[i] && !low[i] && H.active[i];

    auto pi = mask_indices(P);
    auto qi = mask_indices(Q);

    FockOperatorMatrix R(b);
    R.active = P;
    Eigen::MatrixXcd HPP = gather(H.mat, pi, pi);
    if (!qi.empty()) {
        Eigen::MatrixXcd HQQ = gather(H.mat, qi, qi);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(HQQ, Eigen::ComputeThinU | Eigen::ComputeThinV);
        double smin = svd.singularValues().minCoeff();
        double scale = operator_norm(H, H.active);
        if (smin <= tol_inv_rel * scale) {
            std::ostringstream os;
            os << "barred block singular: smallest singular value " << smin << " vs tol "
               << tol_inv_rel * scale;
            throw DomainError(os.str());
        }
        Eigen::MatrixXcd HPQ = gather(H.mat, pi, qi);
        Eigen::MatrixXcd HQP = gather(H.mat, qi, pi);
        HPP -= HPQ * svd.solve(HQP);
    }
    for (std::size_t i = 0; i < pi.size(); ++i)
        for (std::size_t j = 0; j < pi.size(); ++j) R.mat(pi[i], pi[j]) = HPP(i, j);
    return R;
}

namespace {

int shift_steps(const FockBasis& b, double alpha) {
    double delta = b.grids->modes.delta;
    double kd = alpha / delta;
    int k = (int)std::lround(kd);
    if (std::abs(alpha - k * delta) > 1e-9 * std::max(1.0, alpha))
        throw DomainError("dilation step is not a multiple of the grid spacing");
    if (k < 0) throw DomainError("dilation requires alpha >= 0");
    return k;
}

} // namespace

Mask dilation_domain(const FockBasis& b, int k) {
    Mask m(b.dim(), 1);
    for (int i = 0; i < b.dim(); ++i)
        for (int j = 0; j < k && m[i]; ++j)
            if (b.states[i][j] > 0) m[i] = 0;
    return m;
}

Mask dilation_range(const FockBasis& b, int k) {
    const int N = b.grids->modes.size();
    Mask m(b.dim(), 1);
    for (int i = 0; i < b.dim(); ++i)
        for (int j = N - k; j < N && m[i]; ++j)
            if (j >= 0 && b.states[i][j] > 0) m[i] = 0;
    return m;
}

FockOperatorMatrix dilation(const FockBasis& b, double alpha) {
    int k = shift_steps(b, alpha);
    const int N = b.grids->modes.size();
    FockOperatorMatrix G(b);
    G.mat.setZero();
    G.active = dilation_domain(b, k);
    for (int i = 0; i < b.dim(); ++i) {
        if (!G.active[i]) continue;
        std::vector<int> shifted(N, 0);
        for (int j = k; j < N; ++j) shifted[j - k] = b.states[i][j];
        int tgt = b.find(shifted);
        if (tgt < 0) throw DomainError("dilation image left the basis");
        G.mat(tgt, i) = 1.0;
    }
    return G;
}

FockOperatorMatrix rescaled_map(const FockOperatorMatrix& H, double alpha, double tol_inv_rel) {
    const FockBasis& b = *H.basis;
    int k = shift_steps(b, alpha);
    FockOperatorMatrix F = schur_feshbach(H, alpha, tol_inv_rel);
    FockOperatorMatrix G = dilation(b, alpha);
    // the chi_alpha window consists of states with every photon at mode >= k,
    // so it lies inside the dilation domain
    for (int i = 0; i < b.dim(); ++i)
        if (F.active[i] && !G.active[i]) throw DomainError("Feshbach image escaped dilation domain");
    FockOperatorMatrix R(b);
    R.mat = std::exp(alpha) * (G.mat * F.mat * G.mat.adjoint());
    Mask out(b.dim(), 0);
    for (int i = 0; i < b.dim(); ++i) {
        if (!F.active[i]) continue;
        std::vector<int> shifted(b.grids->modes.size(), 0);
        for (int j = k; j < b.grids->modes.size(); ++j) shifted[j - k] = b.states[i][j];
        int tgt = b.find(shifted);
        if (tgt >= 0) out[tgt] = 1;
    }
    R.active = out;
    return R;
}

cplx vacuum_expectation(const FockOperatorMatrix& H) { return H.mat(0, 0); }

double min_singular(const FockOperatorMatrix& H, const Mask& mask) {
    auto idx = mask_indices(mask);
    if (idx.empty()) return std::numeric_limits<double>::infinity();
    Eigen::MatrixXcd B = gather(H.mat, idx, idx);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(B);
    return svd.singularValues().minCoeff();
}

double operator_norm(const FockOperatorMatrix& H, const Mask& mask) {
    auto idx = mask_indices(mask);
    if (idx.empty()) return 0.0;
    Eigen::MatrixXcd B = gather(H.mat, idx, idx);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(B);
    return svd.singularValues().maxCoeff();
}

double operator_norm(const FockOperatorMatrix& H) { return operator_norm(H, Mask(H.basis->dim(), 1)); }

cplx eigen_bottom(const FockOperatorMatrix& H, const Mask& mask) {
    auto idx = mask_indices(mask);
    if (idx.empty()) throw DomainError("empty block has no spectrum");
    Eigen::MatrixXcd B = gather(H.mat, idx, idx);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(B, false);
    const auto& ev = es.eigenvalues();
    int best = 0;
    for (int i = 1; i < ev.size(); ++i)
        if (ev(i).real() < ev(best).real()) best = i;
    return ev(best);
}

} // namespace srg
