#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "srg/kernels.hpp"
#include "test_util.hpp"

using namespace srg;
using namespace srg::testutil;

constexpr double kPi = 3.14159265358979323846;

TEST_CASE("radial grid geometry") {
    auto g = strict_grids(8, 1.0);
    const auto& modes = g->modes;
    double rho = g->constants.rho;

    SUBCASE("nodes strictly decreasing from rho") {
        CHECK(modes.nodes[0] == rho);
        for (int j = 1; j < modes.size(); ++j) CHECK(modes.nodes[j] < modes.nodes[j - 1]);
    }
    SUBCASE("dilation closure: e^{-k delta} maps node j to node j+k") {
        for (int k = 1; k <= 3; ++k)
            for (int j = 0; j + k < modes.size(); ++j)
                CHECK(modes.nodes[j] * std::exp(-k * modes.delta)
                      == doctest::Approx(modes.nodes[j + k]).epsilon(1e-14));
    }
    SUBCASE("cell volumes tile the ball exactly") {
        double total = 0.0;
        for (double w : modes.vol_weights) total += w;
        CHECK(total == doctest::Approx(4.0 / 3.0 * kPi * rho * rho * rho).epsilon(1e-14));
    }
    SUBCASE("r-axis has the zero anchor and ends at rho") {
        CHECK(g->raxis.nodes.front() == 0.0);
        CHECK(g->raxis.nodes.back() == rho);
    }
}

TEST_CASE("reference and free families") {
    auto g = strict_grids();
    double rho = g->constants.rho;

    SUBCASE("reference family is the identity in r") {
        KernelFamily f = reference_family(g);
        CHECK(std::abs(eval(f, 0, 0, cplx(1e-4, 0.0), rho / 2.0, {}, {}) - rho / 2.0) < 1e-15);
        CHECK(family_sup_distance(f, reference_family(g)) == 0.0);
    }
    SUBCASE("free family evaluates to z + r") {
        KernelFamily f = free_family(g);
        cplx z(1e-3, 0.0);
        CHECK(std::abs(eval(f, 0, 0, z, 0.0, {}, {}) - z) < 1e-16);
        CHECK(std::abs(eval(f, 0, 0, z, rho / 3.0, {}, {}) - (z + rho / 3.0)) < 1e-15);
    }
}

TEST_CASE("symmetrize") {
    auto g = strict_grids(4);

    SUBCASE("already-symmetric kernel unchanged") {
        KernelFamily f = free_family(g);
        Kernel& k = f.ensure(2, 0);
        fill_kernel(k, *g, [](cplx, double r, const std::vector<double>& mm,
                              const std::vector<double>&) {
            return cplx(mm[0] * mm[1] + r, 0.0);
        });
        Kernel sym = symmetrize(k, *g);
        for (std::size_t i = 0; i < k.values.size(); ++i) CHECK(sym.values[i] == k.values[i]);
    }
    SUBCASE("w11 has singleton permutation groups") {
        KernelFamily f = free_family(g);
        Kernel& k = f.ensure(1, 1);
        fill_kernel(k, *g, [](cplx, double, const std::vector<double>& mm,
                              const std::vector<double>& nn) {
            return cplx(mm[0] - 2.0 * nn[0], 0.5);
        });
        Kernel sym = symmetrize(k, *g);
        for (std::size_t i = 0; i < k.values.size(); ++i) CHECK(sym.values[i] == k.values[i]);
    }
    SUBCASE("w20 two-term average") {
        KernelFamily f = free_family(g);
        Kernel& k = f.ensure(2, 0);
        fill_kernel(k, *g, [](cplx, double, const std::vector<double>& mm,
                              const std::vector<double>&) {
            return cplx(mm[0] + 3.0 * mm[1], 0.0); // asymmetric
        });
        Kernel sym = symmetrize(k, *g);
        const int N = k.n_modes;
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b) {
                double wa = g->modes.nodes[a], wb = g->modes.nodes[b];
                double expect = 0.5 * ((wa + 3.0 * wb) + (wb + 3.0 * wa));
                CHECK(sym.at(0, 0, a * N + b, 0).real() == doctest::Approx(expect).epsilon(1e-15));
            }
    }
    SUBCASE("idempotence") {
        KernelFamily f = free_family(g);
        Kernel& k = f.ensure(0, 2);
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (auto& v : k.values) v = cplx(u(rng), u(rng));
        Kernel s1 = symmetrize(k, *g);
        Kernel s2 = symmetrize(s1, *g);
        for (std::size_t i = 0; i < s1.values.size(); ++i)
            CHECK(std::abs(s1.values[i] - s2.values[i]) < 1e-15);
    }
}

TEST_CASE("canonicalize") {
    auto g = strict_grids(4);
    double rho = g->constants.rho;

    SUBCASE("support inside the cutoff is untouched, outside zeroed") {
        KernelFamily f = free_family(g);
        Kernel& k = f.ensure(1, 0);
        fill_kernel(k, *g, [](cplx, double, const std::vector<double>&,
                              const std::vector<double>&) { return cplx(1.0, 0.0); });
        KernelFamily cf = canonicalize(f);
        const Kernel& ck = *cf.find(1, 0);
        for (int jr = 0; jr < ck.n_r; ++jr)
            for (int a = 0; a < ck.n_modes; ++a) {
                bool inside = g->raxis.nodes[jr] + g->modes.nodes[a] <= rho * (1.0 + 1e-12);
                CHECK(ck.at(0, jr, a, 0) == (inside ? cplx(1.0, 0.0) : cplx(0.0, 0.0)));
            }
    }
    SUBCASE("families differing only outside the cutoff share a canonical form") {
        KernelFamily f1 = free_family(g);
        KernelFamily f2 = free_family(g);
        Kernel& k1 = f1.ensure(1, 0);
        Kernel& k2 = f2.ensure(1, 0);
        fill_kernel(k1, *g, [&](cplx, double r, const std::vector<double>& mm,
                                const std::vector<double>&) {
            return cplx(r + mm[0] > rho ? 7.0 : 1.0, 0.0);
        });
        fill_kernel(k2, *g, [&](cplx, double r, const std::vector<double>& mm,
                                const std::vector<double>&) {
            return cplx(r + mm[0] > rho ? -3.0 : 1.0, 0.0);
        });
        CHECK(family_sup_distance(canonicalize(f1), canonicalize(f2)) == 0.0);
    }
    SUBCASE("idempotent and commutes with symmetrize") {
        KernelFamily f = free_family(g);
        Kernel& k = f.ensure(2, 0);
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (auto& v : k.values) v = cplx(u(rng), u(rng));
        KernelFamily c1 = canonicalize(f);
        CHECK(family_sup_distance(c1, canonicalize(c1)) == 0.0);
        CHECK(family_sup_distance(canonicalize(symmetrize(f)), symmetrize(canonicalize(f)))
              < 1e-15);
    }
}

TEST_CASE("scale_kernels") {
    auto g = strict_grids(8, 1.0);

    SUBCASE("free family: r-part is exactly invariant") {
        KernelFamily f = free_family(g);
        for (double alpha : {1.0, 2.0, 0.37}) {
            KernelFamily sf = scale_kernels(f, alpha);
            const Kernel& w00 = *sf.find(0, 0);
            auto pts = g->stencil.points();
            for (int s = 0; s < ZStencil::kPoints; ++s)
                for (int jr = 0; jr < w00.n_r; ++jr) {
                    cplx expect = std::exp(alpha) * pts[s] + g->raxis.nodes[jr];
                    CHECK(std::abs(w00.at(s, jr, 0, 0) - expect) < 1e-14);
                }
        }
    }
    SUBCASE("constant coupling kernel picks up e^{-alpha/2}") {
        KernelFamily f = free_family(g);
        Kernel& k = f.ensure(1, 0);
        fill_kernel(k, *g, [](cplx, double, const std::vector<double>&,
                              const std::vector<double>&) { return cplx(0.7, 0.0); });
        double alpha = 2.0; // two grid steps
        KernelFamily sf = scale_kernels(f, alpha);
        const Kernel& sk = *sf.find(1, 0);
        int shift = 2;
        for (int a = 0; a + shift < sk.n_modes; ++a)
            CHECK(sk.at(0, sk.n_r - 1, a, 0).real()
                  == doctest::Approx(0.7 * std::exp(-alpha / 2.0)).epsilon(1e-13));
    }
    SUBCASE("alpha = 0 is the identity") {
        KernelFamily f = free_family(g);
        Kernel& k = f.ensure(1, 1);
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (auto& v : k.values) v = cplx(u(rng), u(rng));
        CHECK(family_sup_distance(scale_kernels(f, 0.0), f) < 1e-15);
    }
    SUBCASE("exact semigroup on grid multiples") {
        KernelFamily f = free_family(g);
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (auto mn : {std::pair{1, 0}, std::pair{1, 1}, std::pair{0, 2}}) {
            Kernel& k = f.ensure(mn.first, mn.second);
            for (auto& v : k.values) v = cplx(u(rng), u(rng));
        }
        double a = 1.0, b = 2.0;
        KernelFamily two_step = scale_kernels(scale_kernels(f, a), b);
        KernelFamily one_step = scale_kernels(f, a + b);
        CHECK(family_sup_distance(two_step, one_step) < 1e-12);
    }
    SUBCASE("negative alpha rejected") {
        KernelFamily f = free_family(g);
        CHECK_THROWS_AS(scale_kernels(f, -0.1), DomainError);
    }
}

TEST_CASE("eval") {
    auto g = strict_grids(6);

    SUBCASE("reproduces stored nodes exactly") {
        KernelFamily f = free_family(g);
        Kernel& k = f.ensure(1, 0);
        std::mt19937_64 rng(23);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (auto& v : k.values) v = cplx(u(rng), u(rng));
        auto pts = g->stencil.points();
        for (int jr = 0; jr < k.n_r; ++jr)
            for (int a = 0; a < k.n_modes; ++a) {
                cplx got = eval(f, 1, 0, pts[0], g->raxis.nodes[jr], {g->modes.nodes[a]}, {});
                CHECK(std::abs(got - k.at(0, jr, a, 0)) < 1e-14);
            }
    }
    SUBCASE("linear data interpolates exactly between r nodes") {
        KernelFamily f = free_family(g);
        Kernel& k = f.ensure(0, 1);
        fill_kernel(k, *g, [](cplx, double r, const std::vector<double>&,
                              const std::vector<double>&) { return cplx(2.0 * r + 0.3, 0.0); });
        double r1 = g->raxis.nodes[2], r2 = g->raxis.nodes[3];
        double mid = 0.5 * (r1 + r2);
        cplx got = eval(f, 0, 1, g->stencil.center, mid, {}, {g->modes.nodes[0]});
        CHECK(std::abs(got - cplx(2.0 * mid + 0.3, 0.0)) < 1e-14);
    }
    SUBCASE("free family evaluates to z + r off the stencil") {
        KernelFamily f = free_family(g);
        cplx z(2e-4, 1e-4);
        double r = 0.6 * g->constants.rho;
        CHECK(std::abs(eval(f, 0, 0, z, r, {}, {}) - (z + r)) < 1e-14);
    }
}

TEST_CASE("d_dz") {
    auto g = strict_grids(4, 1.0, cplx(1e-3, 0.0), 1e-4);

    SUBCASE("free family has unit derivative") {
        KernelFamily f = free_family(g);
        Kernel d = d_dz(f, 0, 0);
        for (int s = 0; s < ZStencil::kPoints; ++s)
            for (int jr = 0; jr < d.n_r; ++jr)
                CHECK(std::abs(d.at(s, jr, 0, 0) - cplx(1.0, 0.0)) < 1e-12);
    }
    SUBCASE("z-independent kernel has zero derivative") {
        KernelFamily f = reference_family(g);
        Kernel d = d_dz(f, 0, 0);
        for (auto& v : d.values) CHECK(std::abs(v) < 1e-12);
    }
    SUBCASE("quadratic test function differentiates exactly") {
        KernelFamily f = free_family(g);
        Kernel& w00 = f.ensure(0, 0);
        fill_kernel(w00, *g, [](cplx z, double r, const std::vector<double>&,
                                const std::vector<double>&) { return z * z + r; });
        Kernel d = d_dz(f, 0, 0);
        auto pts = g->stencil.points();
        for (int s = 0; s < ZStencil::kPoints; ++s)
            CHECK(std::abs(d.at(s, 0, 0, 0) - 2.0 * pts[s]) < 1e-10);
    }
}
