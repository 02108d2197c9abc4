#include "srg/rgmap.hpp"

#include <cmath>
#include <sstream>

namespace srg {

namespace {
constexpr double kSlack = 1.0 + 1e-12;
constexpr double kRecenterCap = 1e-6;
} // namespace

FeshbachGate gate(const KernelFamily& f, double alpha) {
    const Grids& g = *f.grids;
    const ModelConstants& c = g.constants;
    FeshbachGate out;
    out.eps_I_meas = norm_I(f);
    out.eps_F_meas = norm_F(f);

    double bound = std::exp(-c.iota() * alpha) * c.rho / 2.0;
    out.domain_ok = true;
    for (auto z : g.stencil.points())
        if (std::abs(z) > bound * kSlack) out.domain_ok = false;

    // Neumann ratio from measured seminorms and the resolvent bound at kappa=0
    double d0 = (1.0 - out.eps_F_meas) - 0.5 * std::exp((1.0 - c.iota()) * alpha);
    if (d0 > 0.0)
        out.q = c.xi * out.eps_I_meas / (c.rho * std::exp(-alpha)) / d0;
    else
        out.q = std::numeric_limits<double>::infinity();

    double den = std::exp(-alpha) * c.rho * (1.0 - out.eps_F_meas)
                 - 0.5 * std::exp(-c.iota() * alpha) * c.rho - out.eps_I_meas * c.xi;
    out.resolvent_bound = den > 0.0 ? 1.0 / den : -1.0;
    return out;
}

RgContext prepare_step(const KernelFamily& f, double alpha, int L_max, int P_max) {
    RgContext ctx;
    ctx.family = &f;
    ctx.alpha = alpha;
    ctx.L_max = L_max;
    ctx.P_max = P_max;
    ctx.gate = gate(f, alpha);
    if (!ctx.gate.pass()) {
        std::ostringstream os;
        os << "Feshbach gate failed: q = " << ctx.gate.q
           << ", domain_ok = " << ctx.gate.domain_ok
           << ", resolvent bound = " << ctx.gate.resolvent_bound;
        throw GateError(os.str());
    }
    ctx.composite = add_families(f, compose_tilde_w(f, alpha, L_max, P_max));
    return ctx;
}

cplx q_alpha(const RgContext& ctx, cplx z) {
    return std::exp(ctx.alpha) * eval(ctx.composite, 0, 0, z, 0.0, {}, {});
}

cplx q_alpha(const KernelFamily& f, cplx z, double alpha, QEngine engine, int L_max, int P_max,
             const FockBasis* basis) {
    if (engine == QEngine::kernel) {
        RgContext ctx = prepare_step(f, alpha, L_max, P_max);
        return q_alpha(ctx, z);
    }
    if (!basis) throw DomainError("oracle engine needs a Fock basis");
    FockOperatorMatrix H = build_H(f, z, *basis);
    return std::exp(alpha) * vacuum_expectation(schur_feshbach(H, alpha));
}

QInverseResult q_inverse(const RgContext& ctx, cplx zeta, double tol_fp, int max_iter) {
    const Grids& g = *ctx.family->grids;
    const ModelConstants& c = g.constants;
    if (std::abs(zeta) > c.rho / 2.0 * kSlack)
        throw FixedPointError("target spectral parameter outside D_{rho/2}");
    const double domain = std::exp(-c.iota() * ctx.alpha) * c.rho / 2.0;
    const double ea = std::exp(-ctx.alpha);

    QInverseResult res;
    cplx z = ea * zeta;
    double prev_step = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        if (std::abs(z) > domain * kSlack)
            throw FixedPointError("iterate left the contraction domain");
        cplx znext = z + ea * zeta - ea * q_alpha(ctx, z);
        double step = std::abs(znext - z);
        res.iterations = it;
        res.residual = step;
        if (prev_step > 1e-14 && step > 1e-14) {
            double ratio = step / prev_step;
            res.contraction_factor = std::max(res.contraction_factor, ratio);
            if (ratio >= 1.0) throw FixedPointError("fixed-point iteration is not contracting");
        }
        prev_step = step;
        z = znext;
        if (step <= tol_fp) {
            res.zeta = z;
            return res;
        }
    }
    throw FixedPointError("fixed-point iteration exceeded max_iter");
}

KernelFamily renormalize(const KernelFamily& f, double alpha, int L_max, int P_max,
                         StepReport* report, double tol_fp, double tol_norm) {
    const Grids& g = *f.grids;
    const bool strict = g.constants.strict_mode;
    RgContext ctx = prepare_step(f, alpha, L_max, P_max);

    StepReport rep;
    rep.alpha = alpha;
    rep.q = ctx.gate.q;

    auto pts = g.stencil.points();
    for (int s = 0; s < ZStencil::kPoints; ++s) {
        QInverseResult qr = q_inverse(ctx, pts[s], tol_fp);
        rep.zetas[s] = qr.zeta;
        rep.fp_iterations[s] = qr.iterations;
        rep.fp_residual_max = std::max(rep.fp_residual_max, qr.residual);
        rep.fp_contraction_max = std::max(rep.fp_contraction_max, qr.contraction_factor);
    }

    KernelFamily out;
    out.grids = f.grids;
    out.m_max = f.m_max;
    const double contraction = std::exp(-alpha);
    for (const auto& [mn, kc] : ctx.composite.kernels) {
        auto [m, n] = mn;
        Kernel& ko = out.ensure(m, n);
        const double pref = std::exp(alpha * (1.0 - 1.5 * (m + n)));
        const int N = kc.n_modes;
        std::vector<int> md(std::max(m, 1)), nd(std::max(n, 1));
        std::vector<double> mm(m), nn(n);
        for (long mt = 0; mt < kc.m_tuples(); ++mt) {
            tuple_unpack(mt, N, m, md.data());
            for (int i = 0; i < m; ++i) mm[i] = contraction * g.modes.nodes[md[i]];
            for (long nt = 0; nt < kc.n_tuples(); ++nt) {
                tuple_unpack(nt, N, n, nd.data());
                for (int i = 0; i < n; ++i) nn[i] = contraction * g.modes.nodes[nd[i]];
                for (int jr = 0; jr < kc.n_r; ++jr) {
                    double r = contraction * g.raxis.nodes[jr];
                    for (int s = 0; s < ZStencil::kPoints; ++s)
                        ko.at(s, jr, mt, nt) =
                            pref * eval(ctx.composite, m, n, rep.zetas[s], r, mm, nn);
                }
            }
        }
    }
    out = canonicalize(out);

    // normalization invariant at r = 0
    Kernel& w00 = out.ensure(0, 0);
    for (int s = 0; s < ZStencil::kPoints; ++s) {
        cplx defect = w00.at(s, 0, 0, 0) - pts[s];
        double d = std::abs(defect);
        rep.normalization_defect_max = std::max(rep.normalization_defect_max, d);
        if (d > tol_norm) {
            if (strict || d > kRecenterCap) {
                std::ostringstream os;
                os << "normalization defect " << d << " exceeds tolerance " << tol_norm;
                throw NormalizationError(os.str());
            }
            // truncation-sized defect: re-center the z-constant exactly
            for (int jr = 0; jr < w00.n_r; ++jr) w00.at(s, jr, 0, 0) -= defect;
            rep.recentered = true;
        }
    }

    if (report) *report = rep;
    return out;
}

} // namespace srg
