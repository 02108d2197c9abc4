#pragma once

#include <optional>

#include "srg/rgmap.hpp"

namespace srg {

struct FlowDecomposition {
    StepSequence alphas;
    double beta{0};

    double s() const;
};

// Greedy decomposition: full steps of alpha_minus plus a final partial step.
FlowDecomposition canonical_decomposition(const ModelConstants& c, double s);

struct TrajectoryRow {
    double s{0};
    cplx E_center{};
    double norm_I{0}, norm_F{0}, norm_Z{0}, norm_I_4xi{0};
    ledger_real eps_I{0}, eps_Z{0}, eps_F{0};
    double q{0};
    int fp_iterations{0};
    double norm_W_oracle{-1}; // negative = not computed
    cplx eig_estimate{};
    double error_bar{0};
    double normalization_defect{0};
};

struct FlowOptions {
    int L_max{3};
    int P_max{2};
    double tol_fp{1e-12};
    double tol_norm{1e-10};
    bool with_oracle{false}; // per-step interaction norm from the Fock matrix
    int oracle_n_max{2};
    double eigen_norm_w_cap{0.1}; // estimate declared meaningless above this
};

struct FlowState {
    double s{0};
    KernelFamily family;
    std::array<cplx, ZStencil::kPoints> E_values{};
    EpsilonTriple ledger;           // triple after the completed full steps
    int ell{0};                     // completed full steps
    StepSequence steps_taken;       // the full steps (partial steps excluded)
    double accum_E_bound{0};        // accumulated |E_s(z) - e^{-s} z| bound
    std::vector<TrajectoryRow> trajectory;
    FlowOptions options;
    std::shared_ptr<const FockBasis> basis; // set when options.with_oracle
};

FlowState initial_state(const KernelFamily& f0, const FlowOptions& opt = {});

// One renormalization step; alpha in [alpha_minus, alpha_plus] counts toward
// the ledger, smaller alpha is a partial (final) step.
FlowState advance(const FlowState& state, double alpha);

FlowState flow_with(const KernelFamily& f0, const FlowDecomposition& dec,
                    const FlowOptions& opt = {});
FlowState flow_to(const KernelFamily& f0, double s, const FlowOptions& opt = {});

// Continue an existing flow by the canonical decomposition of t.
FlowState continue_flow(const FlowState& state, double t);

struct SemigroupCheck {
    double family_distance{0};
    double E_distance{0};
    double oracle_distance{-1}; // negative = not computed
    double discrepancy{0};      // max of the above
};

SemigroupCheck semigroup_check(const KernelFamily& f0, double s, double t,
                               const FlowOptions& opt = {});

struct Splitting {
    KernelFamily T_s; // w00 part
    KernelFamily W_s; // interaction part
    double norm_W{0};
    double norm_W_oracle{-1};
};

Splitting split(const FlowState& state);

struct EigenEstimate {
    cplx value{};
    double error_bar{0};
};

// -E_s(0) with the interaction norm as error bar; throws DomainError when the
// interaction is too large for the estimate to mean anything.
EigenEstimate eigenvalue_estimate(const FlowState& state);

} // namespace srg
