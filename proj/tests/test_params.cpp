#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "srg/params.hpp"

using namespace srg;

namespace {

StepSequence random_sequence(std::mt19937_64& rng, const ModelConstants& c, int len) {
    std::uniform_real_distribution<double> u(c.alpha_minus, c.alpha_plus);
    StepSequence s;
    for (int i = 0; i < len; ++i) s.alphas.push_back(u(rng));
    return s;
}

} // namespace

TEST_CASE("g_alpha closed form") {
    auto c = ModelConstants::strict_defaults();

    SUBCASE("proportional to eps_I^2: zero at eps_I = 0") {
        CHECK(g_alpha({0.0L, 1.0L, 0.01L}, 1.0, c) == 0.0L);
    }
    SUBCASE("zero at alpha = 0 for any triple") {
        CHECK(g_alpha({0.3L, 1.0L, 0.01L}, 0.0, c) == 0.0L);
    }
    SUBCASE("frozen evaluation at eps=(1e-12,1,0.01), alpha=1, rho=1/144") {
        // independent high-precision evaluation of the closed form
        ledger_real g = g_alpha({1e-12L, 1.0L, 0.01L}, 1.0, c);
        CHECK(std::abs((double)(g / 1.3813238009080013e-18L) - 1.0) < 1e-12);
    }
    SUBCASE("alpha outside [0, alpha_plus] rejected") {
        CHECK_THROWS_AS(g_alpha({1e-12L, 1.0L, 0.01L}, -0.5, c), DomainError);
        CHECK_THROWS_AS(g_alpha({1e-12L, 1.0L, 0.01L}, c.alpha_plus + 1.0, c), DomainError);
    }
}

TEST_CASE("g_alpha_sharp below g_alpha on admissible triples") {
    auto c = ModelConstants::strict_defaults();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ua(0.05, c.alpha_plus);
    std::uniform_real_distribution<double> ue(-20.0, -6.0);
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
        double alpha = ua(rng);
        EpsilonTriple eps{powl(10.0L, ue(rng)), 1.0L, 0.02L};
        auto rep = is_admissible(eps, alpha, c);
        if (!rep.admissible) continue;
        ++checked;
        CHECK(g_alpha_sharp(eps, alpha, c) <= g_alpha(eps, alpha, c));
    }
    CHECK(checked > 50);
}

TEST_CASE("admissibility report") {
    auto c = ModelConstants::strict_defaults();

    SUBCASE("induction basis admissible for every beta in [0, alpha_plus]") {
        auto eps0 = basis_triple(c);
        for (double beta : {0.0, 0.5, 1.0, 4.0, 8.0, 12.0, 16.0}) {
            auto rep = is_admissible(eps0, beta, c);
            CHECK(rep.admissible);
        }
    }
    SUBCASE("eps = (rho, 1, 0.5) at alpha_plus fails the free-part condition") {
        auto rep = is_admissible({(ledger_real)c.rho, 1.0L, 0.5L}, c.alpha_plus, c);
        CHECK_FALSE(rep.besto_ok);
        CHECK_FALSE(rep.admissible);
    }
    SUBCASE("vanishing triple admissible") {
        auto rep = is_admissible({1e-300L, 0.0L, 0.0L}, 0.0, c);
        CHECK(rep.admissible);
    }
    SUBCASE("admissible implies report conjunction") {
        auto rep = is_admissible(basis_triple(c), 1.0, c);
        CHECK(rep.admissible == (rep.besto_ok && rep.hirmn6_ok && rep.g_lt_one_ok && rep.hiELr22_ok));
    }
}

TEST_CASE("epsilon_sequence recursions") {
    auto c = ModelConstants::strict_defaults();
    auto eps0 = basis_triple(c);

    SUBCASE("ell = 0 returns the basis unchanged") {
        StepSequence s{{c.alpha_minus, c.alpha_minus}};
        auto e = epsilon_sequence(c, s, eps0, 0);
        CHECK(e.eps_Z == eps0.eps_Z);
        CHECK(e.eps_I == eps0.eps_I);
        CHECK(e.eps_F == eps0.eps_F);
    }
    SUBCASE("geometric decay ratio e^{-mu alpha_minus/4} per step") {
        StepSequence s{std::vector<double>(12, c.alpha_minus)};
        ledger_real ratio = expl(-(ledger_real)c.mu * c.alpha_minus / 4);
        auto prev = epsilon_sequence(c, s, eps0, 1);
        for (int l = 2; l <= 12; ++l) {
            auto cur = epsilon_sequence(c, s, eps0, l);
            CHECK(std::abs((double)(cur.eps_I / prev.eps_I / ratio) - 1.0) < 1e-15);
            prev = cur;
        }
    }
    SUBCASE("hand value: ell=2, alphas=(7,7), mu=0.9, eps_I0=1e-15") {
        ModelConstants lab = c;
        lab.mu = 0.9;
        lab.alpha_minus = 20.0 / 3.0;
        lab.alpha_plus = 14.0;
        lab.strict_mode = false;
        EpsilonTriple e0 = basis_triple(lab);
        e0.eps_I = 1e-15L;
        StepSequence s{{7.0, 7.0}};
        auto e = epsilon_sequence(lab, s, e0, 2);
        CHECK(std::abs((double)(e.eps_I / 4.2852126867040180e-17L) - 1.0) < 1e-12);
    }
    SUBCASE("ill-formed sequence rejected") {
        StepSequence s{{c.alpha_minus, 0.5 * c.alpha_minus}};
        CHECK_THROWS_AS(epsilon_sequence(c, s, eps0, 2), DomainError);
    }
    SUBCASE("strict mode rejects a basis above its caps") {
        EpsilonTriple bad = eps0;
        bad.eps_F = 0.5L;
        StepSequence s{{c.alpha_minus}};
        CHECK_THROWS_AS(epsilon_sequence(c, s, bad, 1), DomainError);
    }
}

TEST_CASE("ledger trajectory properties") {
    auto c = ModelConstants::strict_defaults();
    auto eps0 = basis_triple(c);
    std::mt19937_64 rng(99);

    for (int trial = 0; trial < 20; ++trial) {
        auto seq = random_sequence(rng, c, 30);
        ledger_real prev_I = eps0.eps_I * 2;
        ledger_real prev_F = 0;
        for (int ell = 0; ell <= 30; ++ell) {
            auto e = epsilon_sequence(c, seq, eps0, ell);
            CHECK(e.eps_Z <= 2.0L);
            CHECK(e.eps_I < prev_I);
            CHECK(e.eps_F >= prev_F);
            prev_I = e.eps_I;
            prev_F = e.eps_F;

            // caps of the parameter theorem, on a beta sample
            for (double beta : {0.0, 1.0, c.alpha_minus, c.alpha_plus}) {
                CHECK(is_admissible(e, beta, c).admissible);
                ledger_real gcap = expl(-alpha_weight(c, seq, ell) / 2)
                                   * powl(expl(-(ledger_real)c.alpha_plus) * (ledger_real)c.rho, 2)
                                   / 1e12L;
                CHECK(g_alpha(e, beta, c) <= gcap);
                ledger_real scale = powl((ledger_real)c.rho * expl(-(ledger_real)beta), -2);
                CHECK(bound_A_inf(e, beta, c) <= 3e4L * scale);
                CHECK(bound_A_0(e, beta, c) <= 3e6L * scale);
            }
        }
        // eps_F stays below its finite cap
        ledger_real cap = eps0.eps_F
                          + 2e-7L / (1 - expl(-(ledger_real)c.mu * c.alpha_minus / 2));
        auto last = epsilon_sequence(c, seq, eps0, 30);
        CHECK(last.eps_F <= cap);
    }
}

TEST_CASE("bound functions") {
    auto c = ModelConstants::strict_defaults();

    SUBCASE("eps_I = eps_Z = 0 closes to the bare prefactor") {
        for (double alpha : {0.0, 1.0, 5.0}) {
            ledger_real inv = 3 / (expl(-(ledger_real)alpha) * (ledger_real)c.rho);
            CHECK(std::abs((double)(bound_A_inf({0, 0, 0}, alpha, c) / (2 * 3 * inv * inv * 256))
                           - 1.0) < 1e-15);
        }
    }
    SUBCASE("128 pi prefactor for the difference-norm bound") {
        ledger_real ratio = bound_A_0({0, 0, 0}, 1.0, c) / bound_A_inf({0, 0, 0}, 1.0, c);
        CHECK(std::abs((double)(ratio - 128 * 3.14159265358979323846L / 2)) < 1e-12);
    }
    SUBCASE("denominator boundary reports outside ledger domain") {
        // eps_I at the hirmn.6 boundary: eps_I (rho e^{-alpha})^{-1} = 1/48
        // makes the denominator 1 - 16*3*eps_I/(e^{-alpha} rho) = 0
        ledger_real eI = (ledger_real)c.rho * expl(-1.0L) / 48;
        CHECK_THROWS_AS(bound_A_inf({eI, 1.0L, 0.01L}, 1.0, c), DomainError);
        CHECK_THROWS_AS(bound_A_0({eI, 1.0L, 0.01L}, 1.0, c), DomainError);
    }
}

TEST_CASE("model constants validation") {
    SUBCASE("strict defaults pass") {
        CHECK_NOTHROW(ModelConstants::strict_defaults().validate());
    }
    SUBCASE("lab defaults collect warnings instead of throwing") {
        auto warnings = ModelConstants::lab_defaults().validate();
        CHECK(!warnings.empty());
    }
    SUBCASE("strict mode rejects a bad rho") {
        auto c = ModelConstants::strict_defaults();
        c.rho = 0.5;
        CHECK_THROWS_AS(c.validate(), ConfigError);
    }
    SUBCASE("iota tied to alpha_plus") {
        auto c = ModelConstants::strict_defaults();
        CHECK(c.iota() == doctest::Approx(1.0 - 1.0 / (10.0 * c.alpha_plus)));
        CHECK(c.iota() > 59.0 / 60.0);
        CHECK(c.iota() < 1.0);
    }
}
