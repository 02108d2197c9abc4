#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "srg/presets.hpp"
#include "srg/seminorms.hpp"
#include "test_util.hpp"

using namespace srg;
using namespace srg::testutil;

namespace {

KernelFamily random_small_family(std::shared_ptr<const Grids> g, std::uint64_t seed) {
    KernelFamily f = free_family(g);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto mn : {std::pair{1, 0}, std::pair{0, 1}, std::pair{1, 1}, std::pair{2, 0}}) {
        Kernel& k = f.ensure(mn.first, mn.second);
        for (auto& v : k.values) v = 1e-3 * cplx(u(rng), u(rng));
    }
    return f;
}

} // namespace

TEST_CASE("norm_inf_0") {
    auto g = strict_grids();
    double mu = g->constants.mu, rho = g->constants.rho;

    SUBCASE("weight cancels the coupling singularity exactly") {
        KernelFamily f = free_family(g);
        Kernel& k = f.ensure(1, 0);
        double c = 0.37;
        fill_kernel(k, *g, [&](cplx, double, const std::vector<double>& mm,
                               const std::vector<double>&) {
            return cplx(c * std::pow(mm[0], -(1.0 - mu) / 2.0), 0.0);
        });
        CHECK(norm_inf_0(k, *g) == doctest::Approx(c).epsilon(1e-13));
    }
    SUBCASE("zero kernel") {
        Kernel k(1, 1, g->raxis.size(), g->modes.size());
        CHECK(norm_inf_0(k, *g) == 0.0);
    }
    SUBCASE("unit w11 peaks at rho^{1-mu}") {
        KernelFamily f = free_family(g);
        Kernel& k = f.ensure(1, 1);
        fill_kernel(k, *g, [](cplx, double, const std::vector<double>&,
                              const std::vector<double>&) { return cplx(1.0, 0.0); });
        // independent evaluation: (1/144)^{1/4} = 1/sqrt(12)
        CHECK(norm_inf_0(k, *g) == doctest::Approx(std::pow(rho, 1.0 - mu)).epsilon(1e-13));
        CHECK(norm_inf_0(k, *g) == doctest::Approx(0.28867513459481288).epsilon(1e-13));
    }
}

TEST_CASE("norm_inf") {
    auto g = strict_grids();
    double rho = g->constants.rho;

    SUBCASE("free family: sup|z+r| plus unit derivative") {
        KernelFamily f = free_family(g);
        double expect = std::abs(cplx(g->stencil.h, 0.0) + rho) + 1.0;
        CHECK(norm_inf_mn(f, 0, 0) == doctest::Approx(expect).epsilon(1e-12));
    }
    SUBCASE("zero kernel with zero derivative") {
        KernelFamily f = free_family(g);
        f.ensure(1, 0);
        CHECK(norm_inf_mn(f, 1, 0) == 0.0);
    }
    SUBCASE("z-independent coupling kernel keeps its sup") {
        KernelFamily f = free_family(g);
        Kernel& k = f.ensure(0, 1);
        double mu = g->constants.mu;
        fill_kernel(k, *g, [&](cplx, double, const std::vector<double>&,
                               const std::vector<double>& nn) {
            return cplx(0.81 * std::pow(nn[0], -(1.0 - mu) / 2.0), 0.0);
        });
        CHECK(norm_inf_mn(f, 0, 1) == doctest::Approx(0.81).epsilon(1e-12));
    }
}

TEST_CASE("norm_zero") {
    auto g = strict_grids();
    double mu = g->constants.mu, rho = g->constants.rho;
    constexpr double kPi = 3.14159265358979323846;

    SUBCASE("r-independent kernel vanishes") {
        KernelFamily f = free_family(g);
        Kernel& k = f.ensure(1, 0);
        fill_kernel(k, *g, [](cplx, double, const std::vector<double>& mm,
                              const std::vector<double>&) { return cplx(mm[0], 2.0); });
        CHECK(norm_zero(f, 1, 0, 0.0) == 0.0);
    }
    SUBCASE("w10 = r against the hand integral of the measure") {
        KernelFamily f = free_family(g);
        Kernel& k = f.ensure(1, 0);
        fill_kernel(k, *g, [](cplx, double r, const std::vector<double>&,
                              const std::vector<double>&) { return cplx(r, 0.0); });
        double expect = 4.0 * kPi * std::pow(rho, (3.0 - mu) / 2.0) / ((3.0 - mu) / 2.0);
        CHECK(norm_zero(f, 1, 0, 0.0) == doctest::Approx(expect).epsilon(1e-12));
        CHECK(norm_zero(f, 1, 0, 0.0) == doctest::Approx(0.041677296340559559).epsilon(1e-12));
    }
    SUBCASE("free family has no interaction difference quotients") {
        KernelFamily f = free_family(g);
        f.ensure(1, 0);
        f.ensure(0, 1);
        CHECK(norm_zero(f, 1, 0, 0.0) == 0.0);
        CHECK(norm_zero(f, 0, 1, 0.0) == 0.0);
    }
    SUBCASE("rejects the scalar slot") {
        KernelFamily f = free_family(g);
        CHECK_THROWS_AS(norm_zero(f, 0, 0, 0.0), DomainError);
    }
    SUBCASE("restricted variant shrinks with alpha") {
        auto fam = random_small_family(g, 41);
        for (auto mn : {std::pair{1, 0}, std::pair{1, 1}}) {
            double prev = norm_zero(fam, mn.first, mn.second, 0.0);
            for (double alpha : {0.5, 1.0, 2.0}) {
                double cur = norm_zero(fam, mn.first, mn.second, alpha);
                CHECK(cur <= prev * (1.0 + 1e-12));
                prev = cur;
            }
        }
    }
}

TEST_CASE("norm_zero_00") {
    auto g = strict_grids();
    double rho = g->constants.rho;

    SUBCASE("slope of z + r is one") {
        KernelFamily f = free_family(g);
        CHECK(norm_zero_00(f, 0.0) == doctest::Approx(1.0).epsilon(1e-13));
    }
    SUBCASE("constant-in-r kernel vanishes") {
        KernelFamily f = free_family(g);
        Kernel& w00 = f.ensure(0, 0);
        fill_kernel(w00, *g, [](cplx z, double, const std::vector<double>&,
                                const std::vector<double>&) { return z; });
        CHECK(norm_zero_00(f, 0.0) == 0.0);
    }
    SUBCASE("quadratic perturbation maximizes on the largest node pair") {
        KernelFamily f = free_family(g);
        Kernel& w00 = f.ensure(0, 0);
        fill_kernel(w00, *g, [](cplx z, double r, const std::vector<double>&,
                                const std::vector<double>&) { return z + r + 0.01 * r * r; });
        // independent maximization over grid pairs: 1 + 0.01 (s + s')
        double expect = 0.0;
        const auto& rn = g->raxis.nodes;
        for (std::size_t i = 0; i < rn.size(); ++i)
            for (std::size_t j = i + 1; j < rn.size(); ++j)
                expect = std::max(expect, 1.0 + 0.01 * (rn[i] + rn[j]));
        CHECK(norm_zero_00(f, 0.0) == doctest::Approx(expect).epsilon(1e-13));
        CHECK(expect == doctest::Approx(1.0 + 0.01 * rho * (1.0 + std::exp(-1.0))).epsilon(1e-13));
    }
}

TEST_CASE("family norms") {
    auto g = strict_grids();
    double xi = g->constants.xi;

    SUBCASE("free family: I = 0, F = 0, Z = 1") {
        KernelFamily f = free_family(g);
        CHECK(norm_I(f) == 0.0);
        CHECK(norm_F(f) < 1e-12); // rounding of z + r at the smallest node gaps
        CHECK(norm_Z(f) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("reference family: F = 0, Z = 0") {
        KernelFamily f = reference_family(g);
        CHECK(norm_F(f) == 0.0);
        CHECK(norm_Z(f) < 1e-12);
    }
    SUBCASE("single w01 with unit-cancelled weight") {
        KernelFamily f = free_family(g);
        Kernel& k = f.ensure(0, 1);
        double mu = g->constants.mu, v = 4.2e-3;
        fill_kernel(k, *g, [&](cplx, double, const std::vector<double>&,
                               const std::vector<double>& nn) {
            return cplx(v * std::pow(nn[0], -(1.0 - mu) / 2.0), 0.0);
        });
        double expect = 2.0 * v / (xi * (1.0 - xi) * (1.0 - xi));
        CHECK(norm_I(f) == doctest::Approx(expect).epsilon(1e-12));
    }
    SUBCASE("interaction norm is homogeneous") {
        auto f = random_small_family(g, 77);
        double base = norm_I(f);
        for (auto& [mn, k] : f.kernels)
            if (mn.first + mn.second >= 1)
                for (auto& v : k.values) v *= 3.5;
        CHECK(norm_I(f) == doctest::Approx(3.5 * base).epsilon(1e-12));
    }
    SUBCASE("slope c in the free part lands in norm_F") {
        KernelFamily f = free_family(g);
        Kernel& w00 = f.ensure(0, 0);
        double c = 0.023;
        fill_kernel(w00, *g, [&](cplx z, double r, const std::vector<double>&,
                                 const std::vector<double>&) { return z + (1.0 + c) * r; });
        CHECK(norm_F(f) == doctest::Approx(c).epsilon(1e-10));
        CHECK(norm_Z(f) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("in_polydisc") {
    auto g = strict_grids();

    SUBCASE("free family belongs for any admissible triple") {
        KernelFamily f = free_family(g);
        CHECK(in_polydisc(f, {1e-8L, 1.0L, 0.01L}));
    }
    SUBCASE("reference family violates the spectral normalization") {
        KernelFamily f = reference_family(g);
        CHECK_FALSE(in_polydisc(f, {1e-8L, 1.0L, 0.01L}));
    }
    SUBCASE("interaction twice the budget is rejected") {
        auto eps = EpsilonTriple{1e-6L, 1.0L, 0.01L};
        KernelFamily f = random_polydisc_family(g, eps, 5, 0.9);
        CHECK(in_polydisc(f, eps));
        for (auto& [mn, k] : f.kernels)
            if (mn.first + mn.second >= 1)
                for (auto& v : k.values) v *= 2.0 / 0.9;
        CHECK_FALSE(in_polydisc(f, eps));
    }
}

TEST_CASE("seminorm properties on random kernels") {
    auto g = strict_grids();

    SUBCASE("triangle inequality") {
        for (std::uint64_t seed = 0; seed < 6; ++seed) {
            auto a = random_small_family(g, 100 + seed);
            auto b = random_small_family(g, 200 + seed);
            auto sum = add_families(a, b);
            // the sum doubles the free part; rebuild w00 as one free part
            Kernel& w00 = sum.ensure(0, 0);
            w00 = *a.find(0, 0);
            CHECK(norm_I(sum) <= norm_I(a) + norm_I(b) + 1e-12);
            for (auto mn : {std::pair{1, 0}, std::pair{1, 1}}) {
                const Kernel* ka = a.find(mn.first, mn.second);
                const Kernel* kb = b.find(mn.first, mn.second);
                Kernel ks = *ka;
                for (std::size_t i = 0; i < ks.values.size(); ++i)
                    ks.values[i] += kb->values[i];
                CHECK(norm_inf_0(ks, *g) <= norm_inf_0(*ka, *g) + norm_inf_0(*kb, *g) + 1e-12);
            }
        }
    }
    SUBCASE("refinement stability on a smooth kernel") {
        // same infrared depth, doubled resolution
        auto coarse = strict_grids(8, 1.0);
        auto fine = strict_grids(16, 0.5);
        double vals[2];
        int i = 0;
        for (auto gg : {coarse, fine}) {
            KernelFamily f = free_family(gg);
            Kernel& k = f.ensure(1, 0);
            double mu = gg->constants.mu;
            fill_kernel(k, *gg, [&](cplx, double r, const std::vector<double>& mm,
                                    const std::vector<double>&) {
                return cplx(std::pow(mm[0], -(1.0 - mu) / 2.0) * (1.0 + r), 0.0);
            });
            vals[i++] = norm_zero(f, 1, 0, 0.0);
        }
        // declared quadrature tolerance for the difference-quotient norm
        CHECK(std::abs(vals[0] - vals[1]) <= 0.05 * std::max(vals[0], vals[1]));
    }
}
