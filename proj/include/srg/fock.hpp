#pragma once

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <vector>

#include "srg/kernels.hpp"

namespace srg {

using Mask = std::vector<char>;

// Truncated Fock space over the discretized modes: occupation vectors with at
// most n_max photons, enumerated by total photon number and then
// lexicographically; the vacuum is state 0.
struct FockBasis {
    std::shared_ptr<const Grids> grids;
    int n_max{2};
    std::vector<std::vector<int>> states;
    std::vector<double> energies;

    FockBasis(std::shared_ptr<const Grids> grids_, int n_max_);
    int dim() const { return (int)states.size(); }
    int find(const std::vector<int>& occ) const;

  private:
    std::map<std::vector<int>, int> index_;
};

struct FockOperatorMatrix {
    const FockBasis* basis{nullptr};
    Eigen::MatrixXcd mat;
    Mask active; // domain bookkeeping for partial-isometry images

    FockOperatorMatrix() = default;
    explicit FockOperatorMatrix(const FockBasis& b);
};

Mask mask_all(const FockBasis& b);
Mask mask_energy_le(const FockBasis& b, double cut);
Mask mask_and(const Mask& a, const Mask& b);
int mask_count(const Mask& m);

// Normalized mode operators: [b_i, b*_j] = delta_ij on the cutoff-respecting
// sector; quadrature volumes are carried by the operator constructions, not
// by the modes.
struct ModeOps {
    std::vector<Eigen::MatrixXcd> annihilate;
    std::vector<Eigen::MatrixXcd> create;
};
ModeOps mode_ops(const FockBasis& b);

FockOperatorMatrix h_f(const FockBasis& b);

// Quadrature realization of the normal-ordered monomial: per-leg factor
// sqrt(cell volume), kernel argument evaluated on the intermediate state
// (after the annihilations).
FockOperatorMatrix build_W_mn(const KernelFamily& f, int m, int n, cplx z, const FockBasis& b);

// sum of chi0-sandwiched monomials over m+n <= m_max
FockOperatorMatrix build_H(const KernelFamily& f, cplx z, const FockBasis& b);

// diagonal projector onto state energies <= e^{-alpha} rho
FockOperatorMatrix chi(double alpha, const FockBasis& b);

// Exact block Schur complement onto the range of chi_alpha. The barred block
// is inverted on the energy window (e^{-alpha} rho, rho] intersected with the
// operator's active sector; outside that window the operator vanishes
// identically. Throws DomainError when the block is numerically singular.
FockOperatorMatrix schur_feshbach(const FockOperatorMatrix& H, double alpha,
                                  double tol_inv_rel = 1e-10);

// Momentum dilation as a partial isometry: photons shift k = alpha/delta
// modes toward higher energy; alpha must be a grid multiple.
FockOperatorMatrix dilation(const FockBasis& b, double alpha);

// States on which the dilation is defined (all occupied modes >= k) and its
// range (all occupied modes <= N-1-k).
Mask dilation_domain(const FockBasis& b, int k);
Mask dilation_range(const FockBasis& b, int k);

// e^{alpha} Gamma_alpha F_alpha(H) Gamma_alpha^*; the active sector of the
// result is the dilated image of the chi_alpha window.
FockOperatorMatrix rescaled_map(const FockOperatorMatrix& H, double alpha,
                                double tol_inv_rel = 1e-10);

cplx vacuum_expectation(const FockOperatorMatrix& H);
double min_singular(const FockOperatorMatrix& H, const Mask& mask);
double operator_norm(const FockOperatorMatrix& H, const Mask& mask);
double operator_norm(const FockOperatorMatrix& H);
cplx eigen_bottom(const FockOperatorMatrix& H, const Mask& mask);

} // namespace srg
