#include "srg/params.hpp"

#include <cmath>
#include <sstream>

namespace srg {

namespace {

const ledger_real kPi = 3.14159265358979323846264338327950288L;

ledger_real lexp(ledger_real x) { return expl(x); }

void check_alpha_range(double alpha, const ModelConstants& c) {
    if (!(alpha >= 0.0) || alpha > c.alpha_plus * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "alpha = " << alpha << " outside [0, alpha_plus = " << c.alpha_plus << "]";
        throw DomainError(os.str());
    }
}

} // namespace

std::vector<std::string> ModelConstants::validate() const {
    std::vector<std::string> warnings;
    auto flag = [&](bool ok, const std::string& msg) {
        if (ok) return;
        if (strict_mode) throw ConfigError(msg);
        warnings.push_back(msg);
    };
    flag(mu > 0.0 && mu < 1.0, "mu must lie in (0,1)");
    flag(xi > 0.0 && xi < 1.0, "xi must lie in (0,1)");
    flag(rho > 0.0, "rho must be positive");
    if (strict_mode) flag(std::abs(rho - 1.0 / 144.0) < 1e-15, "strict mode requires rho = 1/144");
    flag(alpha_plus > 6.0 / mu, "alpha_plus must exceed 6/mu");
    flag(alpha_minus >= 6.0 / mu - 1e-12, "alpha_minus must be >= 6/mu");
    flag(alpha_plus >= 2.0 * alpha_minus - 1e-12, "alpha_plus must be >= 2*alpha_minus");
    flag(4.0 * M_PI * rho < 1.0, "4*pi*rho < 1 violated");
    flag(6.0 * std::sqrt(rho) <= 0.5 + 1e-15, "6*sqrt(rho) <= 1/2 violated");
    return warnings;
}

ModelConstants ModelConstants::strict_defaults() {
    return ModelConstants{};
}

ModelConstants ModelConstants::lab_defaults() {
    ModelConstants c;
    c.rho = 1.0;
    c.mu = 0.9;
    c.xi = 0.2;
    c.alpha_minus = 1.0;
    c.alpha_plus = 2.0;
    c.strict_mode = false;
    return c;
}

ledger_real alpha_weight(const ModelConstants& c, const StepSequence& seq, int j) {
    ledger_real sum = 0;
    for (int i = 0; i < j; ++i) sum += (ledger_real)seq.alphas.at(i);
    return (ledger_real)c.mu * sum;
}

void check_sequence(const ModelConstants& c, const StepSequence& seq) {
    for (std::size_t i = 0; i < seq.alphas.size(); ++i) {
        double a = seq.alphas[i];
        if (a < c.alpha_minus - 1e-12 || a > c.alpha_plus + 1e-12) {
            std::ostringstream os;
            os << "step " << i + 1 << " = " << a << " outside [alpha_minus, alpha_plus]";
            throw DomainError(os.str());
        }
    }
}

ledger_real g_alpha(const EpsilonTriple& eps, double alpha, const ModelConstants& c) {
    check_alpha_range(alpha, c);
    ledger_real a = alpha;
    ledger_real d = lexp(-a) * (ledger_real)c.rho;
    ledger_real m = a < 1 ? a : (ledger_real)1;
    return 3 * (m * eps.eps_I * eps.eps_I / d) * (2 + (3 / d) * (eps.eps_Z + eps.eps_I));
}

ledger_real g_alpha_sharp(const EpsilonTriple& eps, double alpha, const ModelConstants& c) {
    check_alpha_range(alpha, c);
    ledger_real a = alpha;
    ledger_real rho = c.rho;
    ledger_real xi = c.xi;
    ledger_real m = a < 1 ? a : (ledger_real)1;
    ledger_real den = lexp(-a) * rho * (1 - eps.eps_F) - lexp(-(ledger_real)c.iota() * a) * rho / 2
                      - eps.eps_I * xi;
    if (den <= 0) throw DomainError("resolvent denominator not positive");
    ledger_real ei = eps.eps_I * xi;
    return (m * ei * ei / den) * (2 + (1 / den) * (eps.eps_Z + ei));
}

AdmissibilityReport is_admissible(const EpsilonTriple& eps, double alpha, const ModelConstants& c) {
    check_alpha_range(alpha, c);
    AdmissibilityReport r;
    ledger_real rho = c.rho;
    ledger_real besto_lhs =
        (1 - eps.eps_F) - lexp(0.1L) / 2 - eps.eps_I / (rho * lexp(-(ledger_real)c.alpha_plus));
    r.besto_ok = besto_lhs > (ledger_real)1 / 3;
    ledger_real d = rho * lexp(-(ledger_real)alpha);
    r.hirmn6_ok = eps.eps_I / d < (ledger_real)1 / 48;
    r.g_value = g_alpha(eps, alpha, c);
    r.g_lt_one_ok = r.g_value < 1;
    if (r.g_lt_one_ok) {
        ledger_real lhs = 3 * lexp((ledger_real)alpha) * eps.eps_I * eps.eps_I / ((1 - r.g_value) * d);
        r.hiELr22_ok = lhs < (1 - (ledger_real)c.iota()) / 2 * rho;
    }
    r.admissible = r.besto_ok && r.hirmn6_ok && r.g_lt_one_ok && r.hiELr22_ok;
    return r;
}

EpsilonTriple basis_triple(const ModelConstants& c) {
    EpsilonTriple e;
    e.eps_Z = 1;
    e.eps_F = (ledger_real)0.1L * (1 - lexp(0.1L) / 2);
    e.eps_I = (ledger_real)0.5L * 1e-7L * lexp(-2 * (ledger_real)c.alpha_plus) * (ledger_real)c.rho
              * (ledger_real)c.rho;
    return e;
}

namespace {

void check_basis(const ModelConstants& c, const EpsilonTriple& eps0) {
    const EpsilonTriple cap = basis_triple(c);
    std::vector<std::string> bad;
    if (fabsl(eps0.eps_Z - 1) > 1e-15L) bad.push_back("eps_Z^(0) must equal 1");
    if (eps0.eps_F > cap.eps_F * (1 + 1e-15L)) bad.push_back("eps_F^(0) above its cap");
    if (eps0.eps_I > cap.eps_I * (1 + 1e-15L)) bad.push_back("eps_I^(0) above its cap");
    if (!bad.empty() && c.strict_mode) {
        std::string msg = "induction basis violated:";
        for (auto& b : bad) msg += " " + b + ";";
        throw DomainError(msg);
    }
}

} // namespace

EpsilonTriple epsilon_sequence(const ModelConstants& c, const StepSequence& seq,
                               const EpsilonTriple& eps0, int ell) {
    if (ell < 0) throw DomainError("ell must be >= 0");
    if ((std::size_t)ell > seq.alphas.size())
        throw DomainError("sequence shorter than requested ell");
    check_sequence(c, seq);
    check_basis(c, eps0);
    if (ell == 0) return eps0;

    EpsilonTriple out;
    ledger_real prod = 1;
    ledger_real sumZ = 0;
    // running product over l = j..ell-1 built backwards so each summand
    // carries exactly its tail factors
    std::vector<ledger_real> w(ell);
    for (int j = 0; j < ell; ++j) w[j] = lexp(-alpha_weight(c, seq, j) / 2);
    std::vector<ledger_real> tail(ell + 1, 1);
    for (int l = ell - 1; l >= 0; --l) tail[l] = tail[l + 1] / (1 - 1e-12L * w[l]);
    prod = tail[0];
    for (int j = 0; j < ell; ++j) sumZ += w[j] * tail[j];
    out.eps_Z = prod + 1e-7L * sumZ;

    ledger_real sumF = 0;
    for (int j = 0; j < ell; ++j) sumF += w[j];
    out.eps_F = eps0.eps_F + 1e-7L * sumF;

    out.eps_I = eps0.eps_I * lexp(-alpha_weight(c, seq, ell) / 4);
    return out;
}

namespace {

ledger_real bound_common(const EpsilonTriple& eps, double alpha, const ModelConstants& c,
                         ledger_real prefactor) {
    check_alpha_range(alpha, c);
    ledger_real inv = 3 / (lexp(-(ledger_real)alpha) * (ledger_real)c.rho);
    ledger_real den = 1 - eps.eps_I * inv * 16;
    if (den <= 0) throw DomainError("outside ledger domain");
    return prefactor * 3 * inv * inv * 256 / (den * den);
}

} // namespace

ledger_real bound_A_inf(const EpsilonTriple& eps, double alpha, const ModelConstants& c) {
    return bound_common(eps, alpha, c, 2 + eps.eps_Z);
}

ledger_real bound_A_0(const EpsilonTriple& eps, double alpha, const ModelConstants& c) {
    return bound_common(eps, alpha, c, 128 * kPi);
}

} // namespace srg
