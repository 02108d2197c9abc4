#include "srg/wick.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <map>

namespace srg {

namespace {

constexpr double kSlack = 1.0 + 1e-12;
constexpr double kResolventFloorRel = 1e-12;

double binom(int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

void compositions(int total, int parts, std::vector<int>& cur,
                  const std::function<void(const std::vector<int>&)>& emit, int pos = 0) {
    if (pos == parts - 1) {
        cur[pos] = total;
        emit(cur);
        return;
    }
    for (int c = 0; c <= total; ++c) {
        cur[pos] = c;
        compositions(total - c, parts, cur, emit, pos + 1);
    }
}

} // namespace

std::vector<ContractionIndex> enumerate_B_L(int L, int m, int n, int P_max) {
    if (L < 1) throw DomainError("contraction order must be >= 1");
    if (P_max < 0) throw DomainError("internal-leg truncation must be a finite nonnegative cap");
    std::vector<ContractionIndex> out;
    std::vector<int> mb(L), nb(L);
    compositions(m, L, mb, [&](const std::vector<int>& mbar) {
        compositions(n, L, nb, [&](const std::vector<int>& nbar) {
            // internal legs: odometer over (p,q) per factor
            std::vector<int> p(L, 0), q(L, 0);
            while (true) {
                bool ok = true;
                for (int l = 0; l < L; ++l)
                    if (mbar[l] + nbar[l] + p[l] + q[l] < 1) {
                        ok = false;
                        break;
                    }
                if (ok) {
                    ContractionIndex u;
                    u.L = L;
                    u.m_bar = mbar;
                    u.n_bar = nbar;
                    u.p_bar = p;
                    u.q_bar = q;
                    out.push_back(std::move(u));
                }
                int d = 2 * L - 1;
                for (; d >= 0; --d) {
                    int& v = d < L ? p[d] : q[d - L];
                    if (v < P_max) {
                        ++v;
                        break;
                    }
                    v = 0;
                }
                if (d < 0) break;
            }
        });
    });
    return out;
}

bool upsilon_productive(const KernelFamily& f, const ContractionIndex& u) {
    const int L = u.L;
    if (u.p_bar[0] != 0 || u.q_bar[L - 1] != 0) return false;
    int sp = 0, sq = 0;
    for (int l = 0; l < L; ++l) {
        sp += u.p_bar[l];
        sq += u.q_bar[l];
        if (!f.find(u.m_bar[l] + u.p_bar[l], u.n_bar[l] + u.q_bar[l])) return false;
    }
    if (sp != sq) return false;
    int count = 0;
    for (int l = L - 1; l >= 0; --l) { // applied right to left
        if (u.q_bar[l] > count) return false;
        count += u.p_bar[l] - u.q_bar[l];
    }
    return count == 0;
}

ROffsets r_offsets(const ContractionIndex& u, const std::vector<double>& ext_m,
                   const std::vector<double>& ext_n) {
    const int L = u.L;
    ROffsets o;
    o.r.assign(L, 0.0);
    o.r_tilde.assign(L, 0.0);
    // sequential split: block l holds ext_m[moff[l] .. moff[l]+m_bar[l])
    std::vector<int> moff(L + 1, 0), noff(L + 1, 0);
    for (int l = 0; l < L; ++l) {
        moff[l + 1] = moff[l] + u.m_bar[l];
        noff[l + 1] = noff[l] + u.n_bar[l];
    }
    std::vector<double> msum(L, 0.0), nsum(L, 0.0);
    for (int l = 0; l < L; ++l) {
        for (int i = moff[l]; i < moff[l + 1]; ++i) msum[l] += ext_m[i];
        for (int i = noff[l]; i < noff[l + 1]; ++i) nsum[l] += ext_n[i];
    }
    for (int l = 0; l < L; ++l) {
        double r = 0.0;
        for (int j = 0; j < l; ++j) r += nsum[j];
        for (int j = l + 1; j < L; ++j) r += msum[j];
        o.r[l] = r;
        o.r_tilde[l] = r + nsum[l];
    }
    return o;
}

// ---------------------------------------------------------------------------
// reference single-point evaluation

namespace {

double occupation_energy(const Grids& g, const std::vector<int>& occ) {
    double e = 0.0;
    for (int j = 0; j < (int)occ.size(); ++j) e += occ[j] * g.modes.nodes[j];
    return e;
}

} // namespace

cplx eval_V_upsilon(const KernelFamily& f, const ContractionIndex& u, cplx z, double r,
                    const std::vector<double>& ext_m, const std::vector<double>& ext_n,
                    double alpha) {
    if (!upsilon_productive(f, u)) return cplx(0.0, 0.0);
    const Grids& g = *f.grids;
    const int N = g.modes.size();
    const int L = u.L;
    const double rho = g.constants.rho;
    const double cut_lo = rho * std::exp(-alpha);

    ROffsets offs = r_offsets(u, ext_m, ext_n);
    std::vector<int> moff(L + 1, 0), noff(L + 1, 0);
    for (int l = 0; l < L; ++l) {
        moff[l + 1] = moff[l] + u.m_bar[l];
        noff[l + 1] = noff[l] + u.n_bar[l];
    }

    using State = std::vector<int>;
    std::map<State, cplx> v{{State(N, 0), cplx(1.0, 0.0)}};

    for (int l1 = L; l1 >= 1; --l1) {
        const int idx = l1 - 1;
        if (l1 < L) {
            // resolvent between factors l1+1 and l1
            std::map<State, cplx> nv;
            for (auto& [occ, amp] : v) {
                double x = occupation_energy(g, occ) + r + offs.r_tilde[idx];
                if (!(x > cut_lo * kSlack) || x > rho * kSlack) continue;
                cplx den = eval(f, 0, 0, z, x, {}, {});
                if (std::abs(den) < kResolventFloorRel * rho)
                    throw DomainError("resolvent denominator below floor");
                nv[occ] = amp / den;
            }
            v = std::move(nv);
        }
        const int p = u.p_bar[idx], q = u.q_bar[idx];
        const int mk = u.m_bar[idx] + p, nk = u.n_bar[idx] + q;
        std::map<State, cplx> nv;
        for (auto& [occ, amp0] : v) {
            // ordered annihilation tuples over occupied modes
            std::vector<int> ann(std::max(q, 1));
            State work = occ;
            std::function<void(int, double)> rec_ann = [&](int pos, double amp) {
                if (pos == q) {
                    double e_mid = occupation_energy(g, work);
                    std::vector<double> nn(nk);
                    for (int i = noff[idx]; i < noff[idx + 1]; ++i)
                        nn[i - noff[idx]] = ext_n[i];
                    for (int i = 0; i < q; ++i)
                        nn[u.n_bar[idx] + i] = g.modes.nodes[ann[i]];
                    // ordered creation tuples over all modes
                    std::vector<int> cre(std::max(p, 1));
                    std::function<void(int, double)> rec_cre = [&](int cpos, double camp) {
                        if (cpos == p) {
                            std::vector<double> mm(mk);
                            for (int i = moff[idx]; i < moff[idx + 1]; ++i)
                                mm[i - moff[idx]] = ext_m[i];
                            for (int i = 0; i < p; ++i)
                                mm[u.m_bar[idx] + i] = g.modes.nodes[cre[i]];
                            cplx w = eval(f, mk, nk, z, e_mid + r + offs.r[idx], mm, nn);
                            if (w != cplx(0.0, 0.0)) nv[work] += amp0 * amp * camp * w;
                            return;
                        }
                        for (int mode = 0; mode < N; ++mode) {
                            cre[cpos] = mode;
                            work[mode] += 1;
                            rec_cre(cpos + 1,
                                    camp * std::sqrt(double(work[mode]) * g.modes.vol_weights[mode]));
                            work[mode] -= 1;
                        }
                    };
                    rec_cre(0, amp);
                    return;
                }
                for (int mode = 0; mode < N; ++mode) {
                    if (work[mode] == 0) continue;
                    double a = std::sqrt(double(work[mode]) * g.modes.vol_weights[mode]);
                    work[mode] -= 1;
                    ann[pos] = mode;
                    rec_ann(pos + 1, amp * a);
                    work[mode] += 1;
                }
            };
            rec_ann(0, 1.0);
        }
        v = std::move(nv);
    }
    State vac(N, 0);
    auto it = v.find(vac);
    return it == v.end() ? cplx(0.0, 0.0) : it->second;
}

// ---------------------------------------------------------------------------
// vectorized composition over (r node, stencil point) columns

namespace {

struct Sector {
    std::vector<std::vector<int>> states;
    std::vector<double> energies;
    std::map<std::vector<int>, int> index;
};

void build_sector(const Grids& g, int count, Sector& out) {
    const int N = g.modes.size();
    std::vector<int> occ(N, 0);
    std::function<void(int, int)> rec = [&](int mode, int left) {
        if (mode == N - 1) {
            occ[mode] = left;
            out.index[occ] = (int)out.states.size();
            out.states.push_back(occ);
            occ[mode] = 0;
            return;
        }
        for (int c = 0; c <= left; ++c) {
            occ[mode] = c;
            rec(mode + 1, left - c);
        }
        occ[mode] = 0;
    };
    rec(0, count);
    out.energies.resize(out.states.size());
    for (std::size_t i = 0; i < out.states.size(); ++i)
        out.energies[i] = occupation_energy(g, out.states[i]);
}

class ComposeEngine {
  public:
    ComposeEngine(const KernelFamily& f, double alpha)
        : fam_(f), g_(*f.grids), alpha_(alpha), rho_(g_.constants.rho),
          cut_lo_(rho_ * std::exp(-alpha)), N_(g_.modes.size()), R_(g_.raxis.size()),
          cols_(R_ * ZStencil::kPoints) {
        w00_ = f.find(0, 0);
        if (!w00_) throw DomainError("family lacks w00");
        // resolvent values per (r-arg cache is built lazily per energy offset)
    }

    // V values over columns (jr * 5 + s) for one contraction term and one
    // assignment of external node digits
    Eigen::RowVectorXcd propagate(const ContractionIndex& u, const std::vector<int>& mdig,
                                  const std::vector<int>& ndig) {
        const int L = u.L;
        std::vector<int> moff(L + 1, 0), noff(L + 1, 0);
        for (int l = 0; l < L; ++l) {
            moff[l + 1] = moff[l] + u.m_bar[l];
            noff[l + 1] = noff[l] + u.n_bar[l];
        }
        std::vector<double> ext_m(mdig.size()), ext_n(ndig.size());
        for (std::size_t i = 0; i < mdig.size(); ++i) ext_m[i] = g_.modes.nodes[mdig[i]];
        for (std::size_t i = 0; i < ndig.size(); ++i) ext_n[i] = g_.modes.nodes[ndig[i]];
        ROffsets offs = r_offsets(u, ext_m, ext_n);

        Eigen::MatrixXcd v = Eigen::MatrixXcd::Ones(1, cols_);
        int count = 0;
        for (int l1 = L; l1 >= 1; --l1) {
            const int idx = l1 - 1;
            if (l1 < L) apply_resolvent(v, count, offs.r_tilde[idx]);
            apply_block(v, count, u, idx, mdig, ndig, moff, noff, offs.r[idx]);
        }
        return v.row(0);
    }

  private:
    const Sector& sector(int c) {
        if ((int)sectors_.size() <= c) sectors_.resize(c + 1);
        if (sectors_[c].states.empty()) build_sector(g_, c, sectors_[c]);
        return sectors_[c];
    }

    // multiply each (state,row; jr,s column) by chi-window / w00(z_s, x)
    void apply_resolvent(Eigen::MatrixXcd& v, int count, double rt) {
        const Sector& sec = sector(count);
        for (int row = 0; row < (int)sec.states.size(); ++row) {
            if (v.row(row).isZero(0.0)) continue;
            for (int jr = 0; jr < R_; ++jr) {
                double x = sec.energies[row] + g_.raxis.nodes[jr] + rt;
                if (!(x > cut_lo_ * kSlack) || x > rho_ * kSlack) {
                    v.block(row, jr * ZStencil::kPoints, 1, ZStencil::kPoints).setZero();
                    continue;
                }
                LinLoc loc = locate_linear(g_.raxis.nodes, x);
                for (int s = 0; s < ZStencil::kPoints; ++s) {
                    cplx den(0.0, 0.0);
                    if (loc.idx0 >= 0) den += loc.w0 * w00_->at(s, loc.idx0, 0, 0);
                    if (loc.idx1 >= 0) den += loc.w1 * w00_->at(s, loc.idx1, 0, 0);
                    if (std::abs(den) < kResolventFloorRel * rho_)
                        throw DomainError("resolvent denominator below floor");
                    v(row, jr * ZStencil::kPoints + s) /= den;
                }
            }
        }
    }

    void apply_block(Eigen::MatrixXcd& v, int& count, const ContractionIndex& u, int idx,
                     const std::vector<int>& mdig, const std::vector<int>& ndig,
                     const std::vector<int>& moff, const std::vector<int>& noff, double roff) {
        const int p = u.p_bar[idx], q = u.q_bar[idx];
        const int mk = u.m_bar[idx] + p, nk = u.n_bar[idx] + q;
        const Kernel* K = fam_.find(mk, nk);
        const Sector& in = sector(count);
        const int count_out = count - q + p;
        const Sector& out = sector(count_out);
        Eigen::MatrixXcd nv = Eigen::MatrixXcd::Zero(out.states.size(), cols_);

        std::vector<int> mtup(std::max(mk, 1)), ntup(std::max(nk, 1));
        for (int i = moff[idx]; i < moff[idx + 1]; ++i) mtup[i - moff[idx]] = mdig[i];
        for (int i = noff[idx]; i < noff[idx + 1]; ++i) ntup[i - noff[idx]] = ndig[i];

        std::vector<int> ann(std::max(q, 1)), cre(std::max(p, 1));
        std::vector<int> work;
        for (int row = 0; row < (int)in.states.size(); ++row) {
            if (v.row(row).isZero(0.0)) continue;
            work = in.states[row];
            std::function<void(int, double, double)> rec_ann = [&](int pos, double amp,
                                                                   double e_mid) {
                if (pos == q) {
                    for (int i = 0; i < q; ++i) ntup[u.n_bar[idx] + i] = ann[i];
                    std::function<void(int, double)> rec_cre = [&](int cpos, double camp) {
                        if (cpos == p) {
                            for (int i = 0; i < p; ++i) mtup[u.m_bar[idx] + i] = cre[i];
                            auto it = out.index.find(work);
                            if (it == out.index.end()) return;
                            long mt = tuple_pack(mtup.data(), N_, mk);
                            long nt = tuple_pack(ntup.data(), N_, nk);
                            accumulate(nv, it->second, v, row, *K, mt, nt, e_mid + roff, camp);
                            return;
                        }
                        for (int mode = 0; mode < N_; ++mode) {
                            cre[cpos] = mode;
                            work[mode] += 1;
                            rec_cre(cpos + 1, camp * std::sqrt(double(work[mode])
                                                               * g_.modes.vol_weights[mode]));
                            work[mode] -= 1;
                        }
                    };
                    rec_cre(0, amp);
                    return;
                }
                for (int mode = 0; mode < N_; ++mode) {
                    if (work[mode] == 0) continue;
                    double a = std::sqrt(double(work[mode]) * g_.modes.vol_weights[mode]);
                    work[mode] -= 1;
                    ann[pos] = mode;
                    rec_ann(pos + 1, amp * a, e_mid - g_.modes.nodes[mode]);
                    work[mode] += 1;
                }
            };
            rec_ann(0, 1.0, in.energies[row]);
        }
        v = std::move(nv);
        count = count_out;
    }

    // nv.row(target) += amp * v.row(src) .* kernel(e_base + r_j) over columns
    void accumulate(Eigen::MatrixXcd& nv, int target, const Eigen::MatrixXcd& v, int src,
                    const Kernel& K, long mt, long nt, double e_base, double amp) {
        for (int jr = 0; jr < R_; ++jr) {
            double x = e_base + g_.raxis.nodes[jr];
            LinLoc loc = locate_linear(g_.raxis.nodes, x);
            if (loc.outside) continue;
            for (int s = 0; s < ZStencil::kPoints; ++s) {
                cplx val(0.0, 0.0);
                if (loc.idx0 >= 0) val += loc.w0 * K.at(s, loc.idx0, mt, nt);
                if (loc.idx1 >= 0) val += loc.w1 * K.at(s, loc.idx1, mt, nt);
                if (val == cplx(0.0, 0.0)) continue;
                int col = jr * ZStencil::kPoints + s;
                nv(target, col) += amp * val * v(src, col);
            }
        }
    }

    const KernelFamily& fam_;
    const Grids& g_;
    double alpha_, rho_, cut_lo_;
    int N_, R_;
    int cols_;
    const Kernel* w00_;
    std::vector<Sector> sectors_;
};

} // namespace

KernelFamily compose_tilde_w(const KernelFamily& f, double alpha, int L_max, int P_max) {
    if (L_max < 2) throw DomainError("composition needs L_max >= 2");
    if (P_max < 0) throw DomainError("internal-leg truncation must be a finite nonnegative cap");
    ComposeEngine eng(f, alpha);
    const Grids& g = *f.grids;
    const int N = g.modes.size();

    KernelFamily out;
    out.grids = f.grids;
    out.m_max = f.m_max;

    for (int m = 0; m <= f.m_max; ++m)
        for (int n = 0; m + n <= f.m_max; ++n) {
            Kernel& ko = out.ensure(m, n);
            std::vector<int> mdig(std::max(m, 1)), ndig(std::max(n, 1));
            for (int L = 2; L <= L_max; ++L) {
                double sign = (L % 2 == 0) ? -1.0 : 1.0; // (-1)^{L-1}
                for (const auto& u : enumerate_B_L(L, m, n, P_max)) {
                    if (!upsilon_productive(f, u)) continue;
                    double coeff = sign;
                    for (int l = 0; l < L; ++l)
                        coeff *= binom(u.m_bar[l] + u.p_bar[l], u.p_bar[l])
                                 * binom(u.n_bar[l] + u.q_bar[l], u.q_bar[l]);
                    for (long mt = 0; mt < ko.m_tuples(); ++mt) {
                        tuple_unpack(mt, N, m, mdig.data());
                        for (long nt = 0; nt < ko.n_tuples(); ++nt) {
                            tuple_unpack(nt, N, n, ndig.data());
                            Eigen::RowVectorXcd V = eng.propagate(u, mdig, ndig);
                            for (int jr = 0; jr < ko.n_r; ++jr)
                                for (int s = 0; s < ZStencil::kPoints; ++s)
                                    ko.at(s, jr, mt, nt) +=
                                        coeff * V(jr * ZStencil::kPoints + s);
                        }
                    }
                }
            }
        }
    return symmetrize(out);
}

} // namespace srg
