#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rcm/efron_stein.hpp"
#include "rcm/powerlaw.hpp"
#include "rcm/rng.hpp"
#include "rcm/variance.hpp"
#include "test_support.hpp"

using namespace rcm;
using namespace rcm_test;

namespace {

LocalFunction constant_observable(int dim, double c) {
    return LocalFunction("const", dim, {{Coord{}, 0}},
                         [c](std::span<const double>) { return c; }, 0.0, false);
}

}  // namespace

TEST_CASE("exact_ft at t = 0 reads the observable, constants are conserved") {
    LatticeSpec spec(2, 16);
    auto law = ConductanceLaw::two_point(3.0, 0.5);
    Environment env = sample_environment(law, spec, 4);
    LocalFunction f1 = make_observable("F1", 2, law);
    CHECK(exact_ft(env, f1, 0.0) == doctest::Approx(eval_local(f1, env, 0)));

    LocalFunction c = constant_observable(2, 2.5);
    for (double t : {0.5, 2.0})
        CHECK(exact_ft(env, c, t) == doctest::Approx(2.5).epsilon(1e-10));
}

TEST_CASE("wraparound guard refuses, not warns") {
    LatticeSpec spec(2, 8);
    auto law = ConductanceLaw::two_point(3.0, 0.5);
    Environment env = sample_environment(law, spec, 1);
    LocalFunction f1 = make_observable("F1", 2, law);
    CHECK_THROWS_AS(exact_ft(env, f1, 50.0), std::invalid_argument);
    CHECK(max_admissible_time(spec, law) < 50.0);
    std::vector<double> times{50.0};
    VarianceDecayOptions opts;
    opts.n_env = 2;
    CHECK_THROWS_AS(estimate_variance_decay(law, f1, spec, times, opts), std::invalid_argument);
}

TEST_CASE("variance decay at t = 0 recovers Var(w) for the single-edge observable") {
    LatticeSpec spec(1, 16);
    auto law = ConductanceLaw::two_point(3.0, 0.5);
    LocalFunction f1 = make_observable("F1", 1, law);
    std::vector<double> times{0.0};
    VarianceDecayOptions opts;
    opts.n_env = 4000;
    opts.master_seed = 100;
    auto result = estimate_variance_decay(law, f1, spec, times, opts);
    // Var(w) = 1 for the (1,3,1/2) two-point law.
    CHECK(std::abs(result.series.values[0] - 1.0) <= 3.0 * result.series.std_errors[0]);
}

TEST_CASE("non-centered observables are rejected") {
    LatticeSpec spec(1, 16);
    auto law = ConductanceLaw::uniform(2.0);
    LocalFunction raw("raw", 1, {{Coord{}, 0}},
                      [](std::span<const double> v) { return v[0]; }, 0.0, false);
    std::vector<double> times{1.0};
    VarianceDecayOptions opts;
    CHECK_THROWS_AS(estimate_variance_decay(law, raw, spec, times, opts), std::invalid_argument);
}

TEST_CASE("deterministic law gives the identically zero series for centered observables") {
    LatticeSpec spec(1, 32);
    auto law = ConductanceLaw::dirac();
    LocalFunction f1 = make_observable("F1", 1, law);
    std::vector<double> times{0.0, 1.0, 2.0, 4.0};
    VarianceDecayOptions opts;
    opts.n_env = 3;
    auto result = estimate_variance_decay(law, f1, spec, times, opts);
    for (double v : result.series.values) CHECK(v == 0.0);
}

TEST_CASE("scaling covariance: c f multiplies the series by c^2 exactly") {
    LatticeSpec spec(1, 24);
    auto law = ConductanceLaw::two_point(3.0, 0.5);
    LocalFunction f1 = make_observable("F1", 1, law);
    LocalFunction f2 = scale_local(f1, 2.0);
    std::vector<double> times{0.0, 1.0, 2.0};
    VarianceDecayOptions opts;
    opts.n_env = 32;
    opts.master_seed = 9;
    auto base = estimate_variance_decay(law, f1, spec, times, opts);
    auto scaled = estimate_variance_decay(law, f2, spec, times, opts);
    for (std::size_t k = 0; k < times.size(); ++k)
        CHECK(scaled.series.values[k] == 4.0 * base.series.values[k]);
}

TEST_CASE("series with exact inner expectation is non-increasing and convex within errors") {
    LatticeSpec spec(1, 48);
    auto law = ConductanceLaw::two_point(3.0, 0.5);
    LocalFunction f1 = make_observable("F1", 1, law);
    std::vector<double> times{0.0, 1.0, 2.0, 4.0, 8.0, 16.0};
    VarianceDecayOptions opts;
    opts.n_env = 256;
    opts.master_seed = 11;
    opts.workers = 4;
    auto result = estimate_variance_decay(law, f1, spec, times, opts);
    const auto& v = result.series.values;
    const auto& se = result.series.std_errors;
    for (std::size_t k = 0; k + 1 < v.size(); ++k)
        CHECK(v[k + 1] <= v[k] + 3.0 * std::hypot(se[k], se[k + 1]));
    // Convexity through second divided differences.
    for (std::size_t k = 1; k + 1 < v.size(); ++k) {
        double t0 = times[k - 1], t1 = times[k], t2 = times[k + 1];
        double dd = ((v[k + 1] - v[k]) / (t2 - t1) - (v[k] - v[k - 1]) / (t1 - t0)) / (t2 - t0);
        double sigma = (se[k - 1] + 2.0 * se[k] + se[k + 1]) / ((t2 - t1) * (t1 - t0));
        CHECK(dd >= -3.0 * sigma);
    }
}

TEST_CASE("monte carlo inner mode with the unbiased pair trick") {
    LatticeSpec spec(1, 32);
    auto law = ConductanceLaw::two_point(3.0, 0.5);
    LocalFunction f1 = make_observable("F1", 1, law);
    std::vector<double> times{1.0};
    VarianceDecayOptions exact_opts;
    exact_opts.n_env = 512;
    exact_opts.master_seed = 21;
    exact_opts.workers = 4;
    auto exact = estimate_variance_decay(law, f1, spec, times, exact_opts);

    VarianceDecayOptions mc_opts = exact_opts;
    mc_opts.inner = VarianceDecayOptions::Inner::MonteCarlo;
    mc_opts.n_walks = 64;
    auto mc = estimate_variance_decay(law, f1, spec, times, mc_opts);
    double gap = std::abs(mc.series.values[0] - exact.series.values[0]);
    double sigma = std::hypot(mc.series.std_errors[0], exact.series.std_errors[0]);
    CHECK(gap <= 3.0 * sigma);
}

TEST_CASE("vertical derivative: forced two-point case") {
    LatticeSpec spec(1, 8);
    auto law = ConductanceLaw::two_point(3.0, 0.5);
    Environment env = sample_environment(law, spec, 2);
    env.set_edge(spec.edge_index(0, 0), 3.0);
    EnvFunctional F = [&spec](Environment& e) { return e.edge(spec.edge_index(0, 0)); };
    // E^{(0)}[w_{0,e_1}] = 2, current value 3.
    CHECK(vertical_derivative(F, env, 0, VerticalScheme::exact()) == doctest::Approx(1.0));
}

TEST_CASE("vertical derivative vanishes for functionals not touching a(y)") {
    LatticeSpec spec(2, 6);
    auto law = ConductanceLaw::two_point(2.0, 0.4);
    Environment env = sample_environment(law, spec, 8);
    Site far = spec.site_of(Coord{3, 3, 0, 0});
    EnvFunctional F = [&spec, far](Environment& e) {
        return std::cos(e.edge(spec.edge_index(far, 0)));
    };
    CHECK(vertical_derivative(F, env, 0, VerticalScheme::exact()) == 0.0);
}

TEST_CASE("tower property: the conditional mean of the vertical derivative is zero") {
    LatticeSpec spec(2, 5);
    auto law = ConductanceLaw::two_point(3.0, 0.5);
    Environment env = sample_environment(law, spec, 13);
    EnvFunctional F = [&spec](Environment& e) {
        double a = e.edge(spec.edge_index(0, 0));
        double b = e.edge(spec.edge_index(0, 1));
        double c = e.edge(spec.edge_index(3, 0));
        return a * b + std::sin(a) * c;
    };
    EnvFunctional dF = [&](Environment& e) {
        return vertical_derivative(F, e, 0, VerticalScheme::exact());
    };
    CHECK(std::abs(conditional_mean(dF, env, 0, VerticalScheme::exact())) < 1e-12);
}

TEST_CASE("quadrature scheme reproduces unconditional means for continuous laws") {
    LatticeSpec spec(1, 8);
    auto law = ConductanceLaw::uniform(3.0);
    Environment env = sample_environment(law, spec, 5);
    // E^{(0)}[w_{0,e_1}^2] should equal the law's second moment.
    EnvFunctional F = [&spec](Environment& e) {
        double w = e.edge(spec.edge_index(0, 0));
        return w * w;
    };
    double got = conditional_mean(F, env, 0, VerticalScheme::quadrature(8));
    CHECK(got == doctest::Approx(law.second_moment()).epsilon(1e-10));

    auto pareto = ConductanceLaw::pareto(2.5);
    Environment penv = sample_environment(pareto, spec, 6);
    double pg = conditional_mean(F, penv, 0, VerticalScheme::quadrature(32));
    CHECK(pg == doctest::Approx(pareto.second_moment()).epsilon(5e-3));
}

TEST_CASE("efron-stein: additive functional attains equality") {
    std::vector<TwoPointVar> vars(6, TwoPointVar{-1.0, 2.0, 0.3});
    auto F = [](std::span<const double> x) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    };
    auto result = efron_stein_enumerate(F, vars);
    CHECK(result.variance == doctest::Approx(result.conditional_sum).epsilon(1e-12));
    CHECK(result.slack() >= -1e-10);
}

TEST_CASE("efron-stein: centered product doubles the variance bound") {
    // X1 X2 with centered +-1 two-point variables: rhs = 2 lhs.
    std::vector<TwoPointVar> vars(2, TwoPointVar{-1.0, 1.0, 0.5});
    auto F = [](std::span<const double> x) { return x[0] * x[1]; };
    auto result = efron_stein_enumerate(F, vars);
    CHECK(result.conditional_sum == doctest::Approx(2.0 * result.variance).epsilon(1e-12));
}

TEST_CASE("efron-stein holds on 1000 random multilinear functionals") {
    const int n = 8;
    std::vector<TwoPointVar> vars;
    RngStream stream(404);
    for (int i = 0; i < n; ++i)
        vars.push_back({-1.0 + stream.next_unit(), 1.0 + stream.next_unit(),
                        0.2 + 0.6 * stream.next_unit()});
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> coeff(1 << n);
        for (auto& c : coeff) c = 2.0 * stream.next_unit() - 1.0;
        auto F = [&coeff, n](std::span<const double> x) {
            double total = 0.0;
            for (std::size_t mask = 0; mask < coeff.size(); ++mask) {
                double term = coeff[mask];
                for (int i = 0; i < n; ++i)
                    if ((mask >> i) & 1) term *= x[i];
                total += term;
            }
            return total;
        };
        auto result = efron_stein_enumerate(F, vars);
        worst = std::min(worst, result.slack());
    }
    CHECK(worst >= -1e-10);
}

TEST_CASE("efron-stein monte carlo variant brackets the enumerated answer") {
    std::vector<ConductanceLaw> vars(4, ConductanceLaw::uniform(3.0));
    auto F = [](std::span<const double> x) { return x[0] * x[1] + x[2] - 0.5 * x[3] * x[0]; };
    auto mc = efron_stein_mc(F, vars, 200'000, 55);
    CHECK(mc.variance <= mc.conditional_sum * 1.05 + 1e-9);
}

TEST_CASE("h and g: the exact case table") {
    LatticeSpec spec(1, 5);
    auto law = ConductanceLaw::two_point(3.0, 0.5);
    auto scheme = VerticalScheme::exact();
    LocalFunction f1 = make_observable("F1", 1, law);
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        Environment env = sample_environment(law, spec, seed);
        for (Site y = 0; y < spec.n_sites(); ++y) {
            HGField field = compute_h_g_field(env, f1, 0.7, y, scheme);
            double gsum = 0.0;
            for (double g : field.g) gsum += g;
            for (Site x = 0; x < spec.n_sites(); ++x) {
                if (x == y)
                    CHECK(std::abs(field.h[x] - gsum) < 1e-12);
                else if (x == spec.neighbor(y, 1))
                    CHECK(std::abs(field.h[x] + field.g[0]) < 1e-12);
                else
                    CHECK(std::abs(field.h[x]) < 1e-12);
            }
        }
    }
}

TEST_CASE("h and g vanish on the deterministic environment") {
    LatticeSpec spec(2, 5);
    auto law = ConductanceLaw::dirac();
    Environment env = sample_environment(law, spec, 0);
    LocalFunction f1 = make_observable("F1", 2, law);
    HGResult hg = compute_h_g(env, f1, 1.0, 3, 0, VerticalScheme::exact());
    CHECK(hg.h == doctest::Approx(0.0));
    for (double g : hg.g) CHECK(g == doctest::Approx(0.0));
}

TEST_CASE("h and g refuse continuous-law schemes") {
    LatticeSpec spec(1, 5);
    auto law = ConductanceLaw::uniform(2.0);
    Environment env = sample_environment(law, spec, 1);
    LocalFunction f1 = make_observable("F1", 1, law);
    CHECK_THROWS_AS(compute_h_g(env, f1, 1.0, 0, 0, VerticalScheme::quadrature(8)),
                    std::invalid_argument);
}

TEST_CASE("intermediate identity: kernel-transported h matches the gradient form") {
    LatticeSpec spec(1, 5);
    auto law = ConductanceLaw::two_point(3.0, 0.5);
    auto scheme = VerticalScheme::exact();
    LocalFunction f1 = make_observable("F1", 1, law);
    for (std::uint64_t seed : {10ull, 11ull, 12ull}) {
        Environment env = sample_environment(law, spec, seed);
        for (Site y = 0; y < spec.n_sites(); ++y)
            CHECK(intermediate_identity_residual(env, f1, 1.0, 1.0, y, scheme) <= 1e-8);
    }
    SUBCASE("deterministic environment is exactly zero") {
        Environment env = sample_environment(ConductanceLaw::dirac(), spec, 0);
        LocalFunction f = make_observable("F1", 1, ConductanceLaw::dirac());
        CHECK(intermediate_identity_residual(env, f, 1.0, 2.0, 0, scheme) < 1e-13);
    }
    SUBCASE("t = 0 reduces to the case table") {
        Environment env = sample_environment(law, spec, 13);
        CHECK(intermediate_identity_residual(env, f1, 0.8, 0.0, 2, scheme) < 1e-12);
    }
}

TEST_CASE("duhamel formula residual") {
    LatticeSpec spec(1, 5);
    auto law = ConductanceLaw::two_point(3.0, 0.5);
    auto scheme = VerticalScheme::exact();
    LocalFunction f1 = make_observable("F1", 1, law);
    SUBCASE("t = 0 vanishes") {
        Environment env = sample_environment(law, spec, 3);
        DuhamelReport report = duhamel_residual(env, f1, 0.0, 2, scheme);
        CHECK(report.residual < 1e-13);
    }
    SUBCASE("t = 1, every y, three seeds") {
        for (std::uint64_t seed : {5ull, 6ull, 7ull}) {
            Environment env = sample_environment(law, spec, seed);
            for (Site y = 0; y < spec.n_sites(); ++y) {
                DuhamelReport report = duhamel_residual(env, f1, 1.0, y, scheme);
                CHECK(report.residual <= 1e-7);
            }
        }
    }
    SUBCASE("quadrature non-convergence raises") {
        Environment env = sample_environment(law, spec, 3);
        CHECK_THROWS_AS(duhamel_residual(env, f1, 1.0, 1, scheme, 1e-18, 2), std::runtime_error);
    }
}

TEST_CASE("key lemma margins") {
    LatticeSpec spec(1, 5);
    auto law = ConductanceLaw::two_point(3.0, 0.5);
    auto scheme = VerticalScheme::exact();
    LocalFunction f1 = make_observable("F1", 1, law);
    SUBCASE("exact enumeration keeps both margins nonnegative") {
        for (double s : {0.25, 1.0, 4.0}) {
            auto report = lemmeclef_check(law, f1, s, spec, EnsembleSpec::enumerate_all(), scheme);
            CHECK(report.margin_conditional >= -1e-10);
            CHECK(report.margin_weighted >= -1e-10);
        }
    }
    SUBCASE("deterministic law: left sides vanish, margins equal the rhs") {
        auto dirac = ConductanceLaw::dirac();
        LocalFunction f = make_observable("F1", 1, dirac);
        auto report = lemmeclef_check(dirac, f, 1.0, spec, EnsembleSpec::enumerate_all(), scheme);
        CHECK(report.lhs_conditional == doctest::Approx(0.0));
        CHECK(report.lhs_weighted == doctest::Approx(0.0));
        CHECK(report.margin_conditional == doctest::Approx(report.rhs));
        CHECK(report.rhs >= 0.0);
    }
    SUBCASE("long times equilibrate everything to zero") {
        auto report = lemmeclef_check(law, f1, 30.0, spec, EnsembleSpec::enumerate_all(), scheme);
        CHECK(report.lhs_conditional < 1e-12);
        CHECK(report.lhs_weighted < 1e-12);
        CHECK(report.rhs < 1e-12);
    }
}

TEST_CASE("dirichlet derivative closed form at s = 0") {
    LatticeSpec spec(1, 5);
    auto law = ConductanceLaw::two_point(3.0, 0.5);
    LocalFunction f1 = make_observable("F1", 1, law);
    // Per incident direction E[a (b - a)^2] = E[a]E[b^2] - 2E[a^2]E[b] + E[a^3]
    // = 10 - 20 + 14 = 4, so the derivative is -8.
    double got = dirichlet_derivative(law, f1, 0.0, spec, EnsembleSpec::enumerate_all());
    CHECK(got == doctest::Approx(-8.0).epsilon(1e-12));

    LocalFunction c = constant_observable(1, 1.3);
    CHECK(dirichlet_derivative(law, c, 0.5, spec, EnsembleSpec::enumerate_all()) ==
          doctest::Approx(0.0));
}

TEST_CASE("dirichlet derivative matches the finite difference of E[f_s^2]") {
    SUBCASE("exact enumeration on the small torus") {
        LatticeSpec spec(1, 5);
        auto law = ConductanceLaw::two_point(3.0, 0.5);
        LocalFunction f1 = make_observable("F1", 1, law);
        auto report =
            dirichlet_derivative_check(law, f1, 1.0, spec, EnsembleSpec::enumerate_all(), 0.05);
        CHECK(report.residual() < 1e-6);
    }
    SUBCASE("monte carlo ensemble in two dimensions") {
        LatticeSpec spec(2, 8);
        auto law = ConductanceLaw::two_point(2.0, 0.5);
        LocalFunction f1 = make_observable("F1", 2, law);
        auto report =
            dirichlet_derivative_check(law, f1, 1.0, spec, EnsembleSpec::mc(256, 77), 0.05);
        CHECK(report.residual() <= 3.0 * report.se_paired + 1e-6);
    }
}

TEST_CASE("fixed-scheme divergence decay") {
    SUBCASE("gradient of a constant is the zero series") {
        LatticeSpec spec(2, 24);
        auto law = ConductanceLaw::two_point(3.0, 0.5);
        Environment m = sample_environment(ConductanceLaw::dirac(), spec, 0);
        LocalFunction c = constant_observable(2, 4.0);
        std::vector<double> times{0.0, 1.0, 2.0};
        auto series = fixed_scheme_divergence_decay(m, law, c, 1, times, 16, 5);
        for (double v : series.values) CHECK(v == doctest::Approx(0.0));
    }
    SUBCASE("t = 0 recovers 2 Var(w) for the aligned single-edge observable") {
        LatticeSpec spec(1, 16);
        auto law = ConductanceLaw::two_point(3.0, 0.5);
        Environment m = sample_environment(ConductanceLaw::dirac(), spec, 0);
        LocalFunction f1 = make_observable("F1", 1, law);
        std::vector<double> times{0.0};
        auto series = fixed_scheme_divergence_decay(m, law, f1, 1, times, 4000, 6);
        CHECK(std::abs(series.values[0] - 2.0) <= 3.0 * series.std_errors[0]);
    }
    SUBCASE("homogeneous scheme matches the closed-form variance formula") {
        LatticeSpec spec(2, 64);
        auto law = ConductanceLaw::two_point(3.0, 0.5);
        Environment m = sample_environment(ConductanceLaw::dirac(), spec, 0);
        LocalFunction f1 = make_observable("F1", 2, law);
        std::vector<double> times{2.0, 4.0};
        auto series = fixed_scheme_divergence_decay(m, law, f1, 1, times, 512, 7);
        // Oracle: E[(P_t D_1 g)^2] = Var(w) sum_y (p(y - e_1) - p(y))^2.
        Propagated kernel = propagate(m, delta_at(spec, 0).p, times);
        for (std::size_t k = 0; k < times.size(); ++k) {
            double grad = 0.0;
            for (Site y = 0; y < spec.n_sites(); ++y) {
                double diff = kernel.at[k][spec.neighbor(y, -1)] - kernel.at[k][y];
                grad += diff * diff;
            }
            double expect = law.variance() * grad;
            CHECK(std::abs(series.values[k] - expect) <= 3.0 * series.std_errors[k]);
        }
    }
    SUBCASE("fitted exponent in two dimensions is at most -1.7") {
        LatticeSpec spec(2, 128);
        auto law = ConductanceLaw::two_point(3.0, 0.5);
        Environment m = sample_environment(ConductanceLaw::dirac(), spec, 0);
        LocalFunction f1 = make_observable("F1", 2, law);
        std::vector<double> times{4.0, 8.0, 16.0, 32.0, 64.0};
        auto series = fixed_scheme_divergence_decay(m, law, f1, 1, times, 256, 8, 1.0, 4);
        PowerLawFit fit = fit_power_law(series);
        CHECK(fit.exponent <= -1.7);
    }
}

TEST_CASE("iterated generator decay") {
    SUBCASE("n = 0 is identical to the plain variance decay") {
        LatticeSpec spec(1, 24);
        auto law = ConductanceLaw::two_point(3.0, 0.5);
        LocalFunction f1 = make_observable("F1", 1, law);
        std::vector<double> times{0.0, 1.0, 2.0};
        VarianceDecayOptions opts;
        opts.n_env = 64;
        opts.master_seed = 3;
        auto direct = estimate_variance_decay(law, f1, spec, times, opts);
        auto iterated = iterated_generator_decay(law, f1, 0, spec, times, opts);
        CHECK(iterated.series.values == direct.series.values);
    }
    SUBCASE("deterministic law, n = 1, d = 1: exact slope -5/2") {
        LatticeSpec spec(1, 192);
        auto law = ConductanceLaw::dirac();
        LocalFunction f1 = make_observable("F1", 1, law);
        std::vector<double> times{8.0, 16.0, 32.0, 64.0, 128.0};
        VarianceDecayOptions opts;
        auto result = iterated_generator_decay(law, f1, 1, spec, times, opts);
        CHECK(result.series.meta.inner_mode == "kernel");
        PowerLawFit fit = fit_power_law(result.series, FitWindow{8.0, 128.0});
        CHECK(std::abs(fit.exponent - (-2.5)) <= 0.2);
    }
    SUBCASE("two-point law in three dimensions, n = 1: fitted exponent at most -2.5") {
        LatticeSpec spec(3, 32);
        auto law = ConductanceLaw::two_point(2.0, 0.5);
        LocalFunction f1 = make_observable("F1", 3, law);
        std::vector<double> times{2.0, 4.0, 8.0, 16.0};
        VarianceDecayOptions opts;
        opts.n_env = 96;
        opts.master_seed = 41;
        opts.workers = 8;
        opts.guard_scale = 0.25;
        auto result = iterated_generator_decay(law, f1, 1, spec, times, opts);
        PowerLawFit fit = fit_power_law(result.series, FitWindow{2.0, 16.0});
        CHECK(fit.exponent <= -2.5);
    }
}

TEST_CASE("enumerated exact series: value, monotonicity, convexity") {
    LatticeSpec spec(1, 5);
    auto law = ConductanceLaw::two_point(3.0, 0.5);
    LocalFunction f1 = make_observable("F1", 1, law);
    std::vector<double> times{0.0, 0.5, 1.0, 2.0, 4.0, 8.0};
    auto series = exact_variance_series_enumerated(law, f1, spec, times);
    CHECK(series.values[0] == doctest::Approx(1.0).epsilon(1e-12));  // Var(w)
    for (std::size_t k = 0; k < times.size(); ++k) {
        CHECK(series.values[k] >= 0.0);
        CHECK(series.du[k] <= 1e-13);
        CHECK(series.d2u[k] >= -1e-13);
    }
    // Derivative consistency: du should equal -E[sum_i w (D_i f_t)^2].
    double dir = dirichlet_derivative(law, f1, 1.0, spec, EnsembleSpec::enumerate_all());
    CHECK(series.du[2] == doctest::Approx(dir).epsilon(1e-10));
}
