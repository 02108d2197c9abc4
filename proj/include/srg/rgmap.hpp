#pragma once

#include <array>

#include "srg/fock.hpp"
#include "srg/seminorms.hpp"
#include "srg/wick.hpp"

namespace srg {

struct FeshbachGate {
    double q{0};                // measured Neumann ratio
    bool domain_ok{false};      // all stencil points inside e^{-iota alpha} D_{rho/2}
    double resolvent_bound{0};  // barred-block inverse bound; <= 0 marks a dead denominator
    double eps_I_meas{0};
    double eps_F_meas{0};

    bool pass() const { return domain_ok && q < 1.0 && resolvent_bound > 0.0; }
};

FeshbachGate gate(const KernelFamily& f, double alpha);

struct QInverseResult {
    cplx zeta{};
    int iterations{0};
    double residual{0};
    double contraction_factor{0};
};

// One prepared map application: the composed correction is built once and
// every spectral-parameter evaluation reuses it.
struct RgContext {
    const KernelFamily* family{nullptr};
    KernelFamily composite; // w + w~(sym)
    double alpha{0};
    int L_max{3};
    int P_max{2};
    FeshbachGate gate;
};

RgContext prepare_step(const KernelFamily& f, double alpha, int L_max = 3, int P_max = 2);

// e^{alpha} (w00 + w~00)(z, 0) via the stencil reconstruction of the
// prepared composite.
cplx q_alpha(const RgContext& ctx, cplx z);

enum class QEngine { kernel, oracle };

// Convenience entry point; the oracle engine applies the exact Schur
// complement on the Fock matrix and takes the vacuum expectation.
cplx q_alpha(const KernelFamily& f, cplx z, double alpha, QEngine engine, int L_max = 3,
             int P_max = 2, const FockBasis* basis = nullptr);

QInverseResult q_inverse(const RgContext& ctx, cplx zeta, double tol_fp = 1e-12,
                         int max_iter = 200);

struct StepReport {
    double alpha{0};
    double q{0};
    std::array<cplx, ZStencil::kPoints> zetas{};
    std::array<int, ZStencil::kPoints> fp_iterations{};
    double fp_residual_max{0};
    double fp_contraction_max{0};
    double normalization_defect_max{0};
    bool recentered{false};
};

// One full renormalization step on kernel families. tol_norm is the
// normalization assertion; lab mode re-centers defects below 1e-6.
KernelFamily renormalize(const KernelFamily& f, double alpha, int L_max = 3, int P_max = 2,
                         StepReport* report = nullptr, double tol_fp = 1e-12,
                         double tol_norm = 1e-10);

} // namespace srg
