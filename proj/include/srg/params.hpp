#pragma once

#include <string>
#include <vector>

#include "srg/errors.hpp"

namespace srg {

// Ledger arithmetic runs in 80-bit extended precision: the admissibility
// conditions compare quantities roughly 20 orders of magnitude apart.
using ledger_real = long double;

struct ModelConstants {
    double rho{1.0 / 144.0};   // momentum/spectral cutoff
    double mu{0.75};           // infrared exponent, in (0,1)
    double xi{0.2};            // interaction weight, in (0,1)
    double alpha_minus{8.0};   // minimum RG step
    double alpha_plus{16.0};   // maximum RG step
    bool strict_mode{true};

    // domain-shrink exponent, tied to alpha_plus
    double iota() const { return 1.0 - 1.0 / (10.0 * alpha_plus); }

    // Strict mode throws on any violated constraint; lab mode returns the
    // violations as warnings and keeps going.
    std::vector<std::string> validate() const;

    static ModelConstants strict_defaults();
    static ModelConstants lab_defaults();
};

struct EpsilonTriple {
    ledger_real eps_I{0};
    ledger_real eps_Z{0};
    ledger_real eps_F{0};
};

struct AdmissibilityReport {
    bool besto_ok{false};
    bool hirmn6_ok{false};
    bool g_lt_one_ok{false};
    bool hiELr22_ok{false};
    ledger_real g_value{0};
    bool admissible{false}; // conjunction of the four flags
};

struct StepSequence {
    std::vector<double> alphas;
};

// |alpha|_j = mu * (alpha_1 + ... + alpha_j); j = 0 gives 0.
ledger_real alpha_weight(const ModelConstants& c, const StepSequence& seq, int j);

// Throws DomainError if any entry leaves [alpha_minus, alpha_plus].
void check_sequence(const ModelConstants& c, const StepSequence& seq);

ledger_real g_alpha(const EpsilonTriple& eps, double alpha, const ModelConstants& c);

// Sharper variant actually proved as the derivative bound; requires the
// resolvent denominator to be positive.
ledger_real g_alpha_sharp(const EpsilonTriple& eps, double alpha, const ModelConstants& c);

AdmissibilityReport is_admissible(const EpsilonTriple& eps, double alpha, const ModelConstants& c);

// Induction-basis triple at its caps: (eps_I, 1, eps_F) with
// eps_F = (1/10)(1 - e^{1/10}/2), eps_I = (1/2) 1e-7 e^{-2 alpha_+} rho^2.
EpsilonTriple basis_triple(const ModelConstants& c);

// Closed recursions for the triple after ell steps of seq.
EpsilonTriple epsilon_sequence(const ModelConstants& c, const StepSequence& seq,
                               const EpsilonTriple& eps0, int ell);

// Bound functions; throw DomainError("outside ledger domain") when the
// common denominator 1 - 16 eps_I 3 (e^{-alpha} rho)^{-1} is <= 0.
ledger_real bound_A_inf(const EpsilonTriple& eps, double alpha, const ModelConstants& c);
ledger_real bound_A_0(const EpsilonTriple& eps, double alpha, const ModelConstants& c);

} // namespace srg
