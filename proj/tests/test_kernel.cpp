#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rcm/dense_oracle.hpp"
#include "rcm/generator.hpp"
#include "rcm/powerlaw.hpp"
#include "rcm/rng.hpp"
#include "rcm/semigroup.hpp"
#include "test_support.hpp"

using namespace rcm;
using namespace rcm_test;

TEST_CASE("generator on the 3-cycle: delta becomes (-2, 1, 1)") {
    LatticeSpec spec(1, 3);
    Environment env = sample_environment(ConductanceLaw::dirac(), spec, 0);
    std::vector<double> v{1.0, 0.0, 0.0};
    auto lv = apply_generator(env, v);
    CHECK(lv[0] == doctest::Approx(-2.0));
    CHECK(lv[1] == doctest::Approx(1.0));
    CHECK(lv[2] == doctest::Approx(1.0));
}

TEST_CASE("generator kills constants and conserves mass") {
    LatticeSpec spec(2, 6);
    Environment env = sample_environment(ConductanceLaw::uniform(3.0), spec, 4);
    std::vector<double> ones(spec.n_sites(), 0.7);
    for (double x : apply_generator(env, ones)) CHECK(x == doctest::Approx(0.0));

    RngStream stream(5);
    std::vector<double> v(spec.n_sites());
    for (auto& x : v) x = stream.next_unit() - 0.5;
    CHECK(std::abs(total_mass(apply_generator(env, v))) < 1e-12);
}

TEST_CASE("generator dimension mismatch is rejected") {
    LatticeSpec spec(1, 5);
    Environment env = sample_environment(ConductanceLaw::dirac(), spec, 0);
    std::vector<double> bad(4);
    CHECK_THROWS_AS(apply_generator(env, bad), std::invalid_argument);
}

TEST_CASE("self-adjointness against a dense matrix assembled independently") {
    for (auto [d, L] : {std::pair{1, 6}, {2, 5}, {3, 4}}) {
        LatticeSpec spec(d, L);
        Environment env = sample_environment(ConductanceLaw::pareto(2.5), spec, 9);
        auto dense = dense_generator(env);
        const Site n = spec.n_sites();

        RngStream stream(31);
        std::vector<double> v(n), w(n);
        for (auto& x : v) x = stream.next_unit() - 0.5;
        for (auto& x : w) x = stream.next_unit() - 0.5;

        auto lv = apply_generator(env, v);
        auto lw = apply_generator(env, w);
        // Dense oracle agrees entry by entry.
        for (Site x = 0; x < n; ++x) {
            double acc = 0.0;
            for (Site y = 0; y < n; ++y) acc += dense[x * n + y] * v[y];
            CHECK(std::abs(acc - lv[x]) < 1e-12);
        }
        CHECK(std::abs(dot(lv, w) - dot(v, lw)) < 1e-10);
    }
}

TEST_CASE("semigroup at t = 0 returns the initial vector") {
    LatticeSpec spec(2, 5);
    Environment env = sample_environment(ConductanceLaw::uniform(2.0), spec, 8);
    ProbVector init = delta_at(spec, 7);
    ProbVector out = semigroup(env, 0.0, init);
    CHECK(out.p == init.p);
    CHECK(out.deficit <= 1e-12);
}

TEST_CASE("long-time limit is the uniform distribution") {
    LatticeSpec spec(1, 3);
    Environment env = sample_environment(ConductanceLaw::dirac(), spec, 0);
    ProbVector out = semigroup(env, 1e3, delta_at(spec, 0));
    for (double p : out.p) CHECK(std::abs(p - 1.0 / 3.0) < 1e-9);
}

TEST_CASE("rate-1 kernel on Z: return probability matches the Bessel series") {
    LatticeSpec spec(1, 64);
    Environment env = sample_environment(ConductanceLaw::dirac(), spec, 0);
    ProbVector out = semigroup(env, 4.0, delta_at(spec, 0));
    CHECK(std::abs(out.p[0] - z1_return_probability(4.0)) < 1e-8);
    // A few off-origin sites too.
    for (long long x : {1LL, 3LL, 7LL})
        CHECK(std::abs(out.p[std::size_t(x)] - z1_point_probability(x, 4.0)) < 1e-8);
}

TEST_CASE("higher-dimensional kernel factorizes over coordinates") {
    LatticeSpec spec(2, 32);
    Environment env = sample_environment(ConductanceLaw::dirac(), spec, 0);
    ProbVector out = semigroup(env, 3.0, delta_at(spec, 0));
    CHECK(std::abs(out.p[0] - zd_return_probability(2, 3.0)) < 1e-8);
}

TEST_CASE("semigroup preconditions") {
    LatticeSpec spec(1, 5);
    Environment env = sample_environment(ConductanceLaw::dirac(), spec, 0);
    CHECK_THROWS_AS(semigroup(env, -1.0, delta_at(spec, 0)), std::invalid_argument);
    UniformizationParams weak;
    weak.lambda = 1.0;  // below the max exit rate 2
    CHECK_THROWS_AS(semigroup(env, 1.0, delta_at(spec, 0), weak), std::invalid_argument);
}

TEST_CASE("probability conservation with explicit deficit") {
    for (auto [d, L, t] : {std::tuple{1, 32, 7.0}, {2, 12, 3.0}, {3, 6, 2.0}}) {
        LatticeSpec spec(d, L);
        Environment env = sample_environment(ConductanceLaw::two_point(3.0, 0.5), spec, 21);
        ProbVector out = semigroup(env, t, delta_at(spec, 0));
        for (double p : out.p) CHECK(p >= 0.0);
        CHECK(out.deficit <= 1e-12);
        CHECK(std::abs(total_mass(out.p) + out.deficit - 1.0) < 1e-12);
    }
}

TEST_CASE("reversibility residuals") {
    SUBCASE("x == y vanishes exactly") {
        LatticeSpec spec(2, 6);
        Environment env = sample_environment(ConductanceLaw::uniform(2.0), spec, 2);
        CHECK(reversibility_check(env, 2.0, 9, 9) == 0.0);
    }
    SUBCASE("random environment, random sites") {
        LatticeSpec spec(2, 8);
        Environment env = sample_environment(ConductanceLaw::pareto(3.0), spec, 13);
        RngStream stream(6);
        for (int trial = 0; trial < 5; ++trial) {
            Site x = Site(stream.next_unit() * spec.n_sites());
            Site y = Site(stream.next_unit() * spec.n_sites());
            CHECK(reversibility_check(env, 3.0, x, y) <= 1e-10);
        }
    }
    SUBCASE("lattice symmetry pair on the homogeneous torus") {
        LatticeSpec spec(2, 8);
        Environment env = sample_environment(ConductanceLaw::dirac(), spec, 0);
        Site x = spec.site_of(Coord{1, 0, 0, 0});
        Site y = spec.site_of(Coord{0, 1, 0, 0});
        CHECK(reversibility_check(env, 3.0, x, y) <= 1e-10);
    }
}

TEST_CASE("heat kernel l2: point mass at t = 0") {
    LatticeSpec spec(2, 6);
    Environment env = sample_environment(ConductanceLaw::uniform(2.0), spec, 1);
    CHECK(heat_kernel_l2(env, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("heat kernel l2 equals the Bessel value, two ways") {
    LatticeSpec spec(1, 64);
    Environment env = sample_environment(ConductanceLaw::dirac(), spec, 0);
    HeatKernelPoint hk = heat_kernel_l2_full(env, 2.0);
    double oracle = z1_return_probability(4.0);  // e^{-8} I_0(8)
    CHECK(hk.residual < 1e-9);
    CHECK(std::abs(hk.l2 - oracle) < 1e-8);
    CHECK(std::abs(hk.p2t_origin - oracle) < 1e-8);
}

TEST_CASE("heat kernel l2 is non-increasing on a geometric grid") {
    LatticeSpec spec(2, 24);
    Environment env = sample_environment(ConductanceLaw::two_point(2.0, 0.5), spec, 3);
    double prev = 2.0;
    for (double t : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) {
        double now = heat_kernel_l2(env, t);
        CHECK(now <= prev + 1e-12);
        prev = now;
    }
}

TEST_CASE("gradient sum at t = 0 equals 2d by direct enumeration") {
    for (int d : {1, 2, 3}) {
        LatticeSpec spec(d, 5);
        Environment env = sample_environment(ConductanceLaw::uniform(4.0), spec, 7);
        // Oracle: enumerate the unordered-edge sum on the delta vector.
        std::vector<double> p(spec.n_sites(), 0.0);
        p[0] = 1.0;
        double byhand = 0.0;
        for (Site x = 0; x < spec.n_sites(); ++x)
            for (int axis = 0; axis < d; ++axis) {
                double diff = p[x] - p[spec.neighbor(x, axis + 1)];
                byhand += diff * diff;
            }
        CHECK(byhand == doctest::Approx(2.0 * d));
        CHECK(gradient_l2(env, 0.0) == doctest::Approx(2.0 * d));
    }
}

TEST_CASE("gradient decay exponent is d/2 + 1 on the homogeneous lattice") {
    LatticeSpec spec(2, 128);
    Environment env = sample_environment(ConductanceLaw::dirac(), spec, 0);
    std::vector<double> times{4.0, 8.0, 16.0, 32.0, 64.0};
    KernelSeries ks = heat_kernel_series(env, times);
    PowerLawFit fit = fit_power_law(ks.times, ks.grad, {}, FitWindow{4.0, 64.0});
    CHECK(std::abs(fit.exponent - (-2.0)) < 0.15);
}

TEST_CASE("weighted gradient equals minus the derivative of the l2 norm") {
    LatticeSpec spec(2, 48);
    Environment env = sample_environment(ConductanceLaw::two_point(2.0, 0.5), spec, 19);
    for (double t : {2.0, 4.0}) {
        double h = 0.01;
        double up = heat_kernel_l2(env, t + h);
        double down = heat_kernel_l2(env, t - h);
        double fd = (up - down) / (2.0 * h);
        ProbVector pt = semigroup(env, t, delta_at(spec, 0));
        double weighted = weighted_gradient_l2_of(env, pt.p);
        CHECK(std::abs(fd + weighted) < 1e-6);
    }
}

TEST_CASE("uniformization agrees with the dense eigendecomposition oracle") {
    for (auto [d, L] : {std::pair{1, 7}, {2, 14}, {3, 6}}) {
        LatticeSpec spec(d, L);
        Environment env = sample_environment(ConductanceLaw::uniform(3.0), spec, 23);
        DenseExpm oracle(env);
        for (double t : {0.5, 2.0, 8.0}) {
            ProbVector mine = semigroup(env, t, delta_at(spec, 0));
            std::vector<double> expected = oracle.row(t, 0);
            for (Site x = 0; x < spec.n_sites(); ++x)
                CHECK(std::abs(mine.p[x] - expected[x]) < 1e-9);
        }
    }
}

TEST_CASE("dense oracle refuses large tori") {
    LatticeSpec spec(3, 7);  // 343 sites
    Environment env = sample_environment(ConductanceLaw::dirac(), spec, 0);
    CHECK_THROWS_AS(DenseExpm{env}, std::invalid_argument);
}

TEST_CASE("complete monotonicity signature of the kernel l2 norm") {
    LatticeSpec spec(2, 24);
    for (auto law : {ConductanceLaw::dirac(), ConductanceLaw::two_point(3.0, 0.5)}) {
        Environment env = sample_environment(law, spec, 29);
        for (double t : {0.5, 1.0, 2.0, 4.0, 8.0}) {
            KernelDerivatives kd = heat_kernel_derivatives(env, t);
            CHECK(kd.u >= 0.0);
            CHECK(kd.du <= 1e-14);
            CHECK(kd.d2u >= 0.0);
        }
    }
}

TEST_CASE("kernel series residuals stay below the tail tolerance") {
    LatticeSpec spec(2, 32);
    Environment env = sample_environment(ConductanceLaw::pareto(2.5), spec, 37);
    std::vector<double> times{1.0, 2.0, 4.0, 8.0};
    KernelSeries ks = heat_kernel_series(env, times);
    for (std::size_t k = 0; k < times.size(); ++k) {
        CHECK(ks.l2_residual[k] < 1e-9);
        CHECK(ks.deficit[k] <= 1e-12);
    }
}
