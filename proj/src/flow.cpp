#include "srg/flow.hpp"

#include <cmath>

namespace srg {

double FlowDecomposition::s() const {
    double total = beta;
    for (double a : alphas.alphas) total += a;
    return total;
}

FlowDecomposition canonical_decomposition(const ModelConstants& c, double s) {
    if (s < 0.0) throw DomainError("flow parameter must be >= 0");
    FlowDecomposition d;
    int ell = (int)std::floor(s / c.alpha_minus + 1e-12);
    d.alphas.alphas.assign(ell, c.alpha_minus);
    d.beta = s - ell * c.alpha_minus;
    if (d.beta < 1e-12) d.beta = 0.0;
    return d;
}

namespace {

double measured_step_bound(const KernelFamily& f, double alpha) {
    // pullback displacement bound with measured seminorms
    const ModelConstants& c = f.grids->constants;
    EpsilonTriple meas{(ledger_real)norm_I(f), (ledger_real)norm_Z(f), (ledger_real)norm_F(f)};
    double den = std::exp(-alpha) * c.rho * (1.0 - (double)meas.eps_F)
                 - 0.5 * std::exp(-c.iota() * alpha) * c.rho - (double)meas.eps_I * c.xi;
    if (den <= 0.0) return std::numeric_limits<double>::infinity();
    double G = (double)g_alpha(meas, alpha, c);
    if (G >= 1.0) return std::numeric_limits<double>::infinity();
    double ei_xi = (double)meas.eps_I * c.xi;
    return ei_xi * ei_xi * std::min(alpha, 1.0) / ((1.0 - G) * den);
}

} // namespace

FlowState initial_state(const KernelFamily& f0, const FlowOptions& opt) {
    FlowState st;
    st.family = canonicalize(f0);
    st.options = opt;
    auto pts = f0.grids->stencil.points();
    for (int s = 0; s < ZStencil::kPoints; ++s) st.E_values[s] = pts[s];
    st.ledger = basis_triple(f0.grids->constants);
    if (opt.with_oracle)
        st.basis = std::make_shared<FockBasis>(f0.grids, opt.oracle_n_max);

    TrajectoryRow row;
    row.s = 0.0;
    row.E_center = st.E_values[0];
    row.norm_I = norm_I(st.family);
    row.norm_F = norm_F(st.family);
    row.norm_Z = norm_Z(st.family);
    double xi = f0.grids->constants.xi;
    row.norm_I_4xi = 4.0 * xi < 1.0 ? norm_I_weighted(st.family, 4.0 * xi) : 0.0;
    row.eps_I = st.ledger.eps_I;
    row.eps_Z = st.ledger.eps_Z;
    row.eps_F = st.ledger.eps_F;
    st.trajectory.push_back(row);
    return st;
}

FlowState advance(const FlowState& state, double alpha) {
    const ModelConstants& c = state.family.grids->constants;
    if (alpha <= 0.0) return state;
    if (alpha > c.alpha_plus * (1.0 + 1e-12))
        throw DomainError("step exceeds alpha_plus");

    FlowState next = state;
    double step_bound = measured_step_bound(state.family, alpha);

    StepReport rep;
    next.family = renormalize(state.family, alpha, state.options.L_max, state.options.P_max,
                              &rep, state.options.tol_fp, state.options.tol_norm);
    next.s = state.s + alpha;

    // E_{s+alpha} = E_s o Q^{-1}: reconstruct the stored map at the pullbacks
    ZFit efit = z_fit(state.family.grids->stencil,
                      {state.E_values[0], state.E_values[1], state.E_values[2],
                       state.E_values[3], state.E_values[4]});
    for (int s = 0; s < ZStencil::kPoints; ++s) next.E_values[s] = efit.eval(rep.zetas[s]);
    next.accum_E_bound = state.accum_E_bound + std::exp(-state.s) * step_bound;

    bool full_step = alpha >= c.alpha_minus - 1e-12;
    if (full_step) {
        next.steps_taken.alphas.push_back(alpha);
        next.ell = state.ell + 1;
        next.ledger = epsilon_sequence(c, next.steps_taken, basis_triple(c), next.ell);
    }

    TrajectoryRow row;
    row.s = next.s;
    row.E_center = next.E_values[0];
    row.norm_I = norm_I(next.family);
    row.norm_F = norm_F(next.family);
    row.norm_Z = norm_Z(next.family);
    row.norm_I_4xi = 4.0 * c.xi < 1.0 ? norm_I_weighted(next.family, 4.0 * c.xi) : 0.0;
    row.eps_I = next.ledger.eps_I;
    row.eps_Z = next.ledger.eps_Z;
    row.eps_F = next.ledger.eps_F;
    row.q = rep.q;
    int iters = 0;
    for (int i = 0; i < ZStencil::kPoints; ++i) iters = std::max(iters, rep.fp_iterations[i]);
    row.fp_iterations = iters;
    row.normalization_defect = rep.normalization_defect_max;
    if (next.basis) {
        FockOperatorMatrix H = build_H(next.family, next.family.grids->stencil.center, *next.basis);
        FockOperatorMatrix T(*next.basis);
        KernelFamily diag;
        diag.grids = next.family.grids;
        diag.m_max = next.family.m_max;
        if (const Kernel* w00 = next.family.find(0, 0)) diag.ensure(0, 0) = *w00;
        T = build_H(diag, next.family.grids->stencil.center, *next.basis);
        FockOperatorMatrix W(*next.basis);
        W.mat = H.mat - T.mat;
        row.norm_W_oracle = operator_norm(W);
    }
    row.error_bar = c.xi * row.norm_I;
    if (row.error_bar <= state.options.eigen_norm_w_cap) {
        ZFit efit2 = z_fit(next.family.grids->stencil,
                           {next.E_values[0], next.E_values[1], next.E_values[2],
                            next.E_values[3], next.E_values[4]});
        row.eig_estimate = -efit2.eval(cplx(0.0, 0.0));
    }
    next.trajectory.push_back(row);
    return next;
}

FlowState flow_with(const KernelFamily& f0, const FlowDecomposition& dec, const FlowOptions& opt) {
    check_sequence(f0.grids->constants, dec.alphas);
    FlowState st = initial_state(f0, opt);
    for (double a : dec.alphas.alphas) st = advance(st, a);
    if (dec.beta > 0.0) st = advance(st, dec.beta);
    return st;
}

FlowState flow_to(const KernelFamily& f0, double s, const FlowOptions& opt) {
    return flow_with(f0, canonical_decomposition(f0.grids->constants, s), opt);
}

FlowState continue_flow(const FlowState& state, double t) {
    FlowDecomposition dec = canonical_decomposition(state.family.grids->constants, t);
    FlowState st = state;
    for (double a : dec.alphas.alphas) st = advance(st, a);
    if (dec.beta > 0.0) st = advance(st, dec.beta);
    return st;
}

SemigroupCheck semigroup_check(const KernelFamily& f0, double s, double t,
                               const FlowOptions& opt) {
    FlowState direct = flow_to(f0, s + t, opt);
    FlowState staged = continue_flow(flow_to(f0, s, opt), t);

    SemigroupCheck out;
    out.family_distance =
        family_sup_distance(canonicalize(direct.family), canonicalize(staged.family));
    for (int i = 0; i < ZStencil::kPoints; ++i)
        out.E_distance = std::max(out.E_distance,
                                  std::abs(direct.E_values[i] - staged.E_values[i]));
    if (opt.with_oracle) {
        FockBasis basis(f0.grids, opt.oracle_n_max);
        cplx zc = f0.grids->stencil.center;
        FockOperatorMatrix Hd = build_H(direct.family, zc, basis);
        FockOperatorMatrix Hs = build_H(staged.family, zc, basis);
        FockOperatorMatrix D(basis);
        D.mat = Hd.mat - Hs.mat;
        out.oracle_distance = operator_norm(D);
    }
    out.discrepancy = std::max({out.family_distance, out.E_distance, out.oracle_distance});
    return out;
}

Splitting split(const FlowState& state) {
    Splitting sp;
    sp.T_s.grids = state.family.grids;
    sp.T_s.m_max = state.family.m_max;
    sp.W_s.grids = state.family.grids;
    sp.W_s.m_max = state.family.m_max;
    for (const auto& [mn, k] : state.family.kernels) {
        if (mn.first == 0 && mn.second == 0)
            sp.T_s.ensure(0, 0) = k;
        else
            sp.W_s.ensure(mn.first, mn.second) = k;
    }
    sp.W_s.ensure(0, 0); // zero w00 so T_s + W_s reassembles the family
    sp.norm_W = state.family.grids->constants.xi * norm_I(state.family);
    if (state.basis) {
        cplx zc = state.family.grids->stencil.center;
        FockOperatorMatrix H = build_H(state.family, zc, *state.basis);
        FockOperatorMatrix T = build_H(sp.T_s, zc, *state.basis);
        FockOperatorMatrix W(*state.basis);
        W.mat = H.mat - T.mat;
        sp.norm_W_oracle = operator_norm(W);
    }
    return sp;
}

EigenEstimate eigenvalue_estimate(const FlowState& state) {
    double nw = state.family.grids->constants.xi * norm_I(state.family);
    if (nw > state.options.eigen_norm_w_cap)
        throw DomainError("interaction norm too large for an eigenvalue estimate");
    ZFit efit = z_fit(state.family.grids->stencil,
                      {state.E_values[0], state.E_values[1], state.E_values[2],
                       state.E_values[3], state.E_values[4]});
    EigenEstimate est;
    est.value = -efit.eval(cplx(0.0, 0.0));
    est.error_bar = nw;
    return est;
}

} // namespace srg
