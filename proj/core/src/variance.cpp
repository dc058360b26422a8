#include "rcm/variance.hpp"

#include <cmath>
#include <stdexcept>

#include "rcm/generator.hpp"
#include "rcm/pool.hpp"
#include "rcm/walker.hpp"

namespace rcm {

namespace {

std::vector<double> observable_field(const Environment& env, const LocalFunction& f) {
    const Site n = env.spec().n_sites();
    std::vector<double> v(n);
    for (Site x = 0; x < n; ++x) v[x] = eval_local(f, env, x);
    return v;
}

double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / double(xs.size());
}

double std_error_of(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / double(xs.size() - 1) / double(xs.size()));
}

/// (L v)(x) for a single site, without materializing the full matvec.
double generator_at(const Environment& env, std::span<const double> v, Site x) {
    const Topology& topo = env.topology();
    const Site* nbr = topo.neighbor_row(x);
    const EdgeId* edge = topo.incident_row(x);
    double acc = 0.0;
    for (int k = 0; k < topo.fanout(); ++k)
        acc += env.edge(edge[k]) * (v[nbr[k]] - v[x]);
    return acc;
}

double dirichlet_at_origin(const Environment& env, std::span<const double> v) {
    const Topology& topo = env.topology();
    const Site* nbr = topo.neighbor_row(0);
    const EdgeId* edge = topo.incident_row(0);
    double acc = 0.0;
    for (int k = 0; k < topo.fanout(); ++k) {
        double diff = v[nbr[k]] - v[0];
        acc += env.edge(edge[k]) * diff * diff;
    }
    return acc;
}

}  // namespace

// ---------------------------------------------------------------------------
// Wraparound guard
// ---------------------------------------------------------------------------

double max_admissible_time(const LatticeSpec& spec, const ConductanceLaw& law,
                           double guard_scale) {
    double w_max = law.quantile999();
    double cap = double(spec.side()) / (8.0 * guard_scale);
    return cap * cap / (2.0 * spec.dim() * w_max);
}

void check_wraparound(const LatticeSpec& spec, const ConductanceLaw& law, double t,
                      double guard_scale) {
    double spread = 8.0 * guard_scale *
                    std::sqrt(2.0 * spec.dim() * law.quantile999() * t);
    if (spread > double(spec.side()))
        throw std::invalid_argument(
            "wraparound guard: t = " + std::to_string(t) + " needs side >= " +
            std::to_string(spread) + " but side is " + std::to_string(spec.side()));
}

// ---------------------------------------------------------------------------
// f_t and the main experiment
// ---------------------------------------------------------------------------

FtProfile exact_ft_profile(const Environment& env, const LocalFunction& f,
                           std::span<const double> times) {
    std::vector<double> v = observable_field(env, f);
    Propagated prop = propagate(env, v, times);

    const Topology& topo = env.topology();
    FtProfile profile;
    profile.ft0.reserve(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        const std::vector<double>& ft = prop.at[k];
        profile.ft0.push_back(ft[0]);
        profile.dirichlet.push_back(dirichlet_at_origin(env, ft));
        double lf0 = generator_at(env, ft, 0);
        profile.lf0.push_back(lf0);
        // (L^2 f_t)(0) needs L f_t on the origin's neighborhood only.
        double acc = 0.0;
        const Site* nbr = topo.neighbor_row(0);
        const EdgeId* edge = topo.incident_row(0);
        for (int k2 = 0; k2 < topo.fanout(); ++k2)
            acc += env.edge(edge[k2]) * (generator_at(env, ft, nbr[k2]) - lf0);
        profile.l2f0.push_back(acc);
    }
    return profile;
}

double exact_ft(const Environment& env, const LocalFunction& f, double t, double guard_scale) {
    check_wraparound(env.spec(), env.law(), t, guard_scale);
    double times[1] = {t};
    return exact_ft_profile(env, f, times).ft0[0];
}

VarianceDecayResult estimate_variance_decay(const ConductanceLaw& law, const LocalFunction& f,
                                            const LatticeSpec& spec,
                                            std::span<const double> times,
                                            const VarianceDecayOptions& options) {
    if (!f.centered())
        throw std::invalid_argument(
            "estimate_variance_decay: observable must be centered (E[f] = 0)");
    if (options.n_env < 1) throw std::invalid_argument("estimate_variance_decay: n_env >= 1");
    for (double t : times) check_wraparound(spec, law, t, options.guard_scale);

    const std::size_t nt = times.size();
    const bool exact = options.inner == VarianceDecayOptions::Inner::Exact;

    std::vector<FtProfile> slots(options.n_env);
    std::vector<std::vector<double>> mc_slots;
    if (exact) {
        std::vector<double> times_copy(times.begin(), times.end());
        parallel_for(options.n_env, options.workers, [&](std::int64_t r) {
            Environment env = sample_environment(law, spec, options.master_seed, std::uint64_t(r));
            slots[r] = exact_ft_profile(env, f, times_copy);
        });
    } else {
        if (options.n_walks < 4)
            throw std::invalid_argument("MC inner mode needs at least 4 walks");
        mc_slots.assign(options.n_env, std::vector<double>(nt, 0.0));
        std::vector<double> times_copy(times.begin(), times.end());
        parallel_for(options.n_env, options.workers, [&](std::int64_t r) {
            Environment env = sample_environment(law, spec, options.master_seed, std::uint64_t(r));
            const std::int64_t half = options.n_walks / 2;
            for (std::size_t k = 0; k < times_copy.size(); ++k) {
                // Product of two independent half-ensemble means: unbiased
                // for f_t^2, unlike the squared full-ensemble mean.
                double sum_a = 0.0, sum_b = 0.0;
                for (std::int64_t j = 0; j < half; ++j) {
                    RngStream sa(env.seed(), std::uint64_t(j), 2 * k);
                    RngStream sb(env.seed(), std::uint64_t(j), 2 * k + 1);
                    sum_a += eval_local(f, env, simulate_endpoint(env, times_copy[k], sa));
                    sum_b += eval_local(f, env, simulate_endpoint(env, times_copy[k], sb));
                }
                mc_slots[r][k] = (sum_a / double(half)) * (sum_b / double(half));
            }
        });
    }

    VarianceDecayResult result;
    result.series.times.assign(times.begin(), times.end());
    result.series.meta = SeriesMeta{law.to_string(), f.id(),       spec.dim(),
                                    spec.side(),     options.n_env, options.master_seed,
                                    exact ? "exact" : "mc",         options.guard_scale};

    std::vector<double> samples(options.n_env);
    for (std::size_t k = 0; k < nt; ++k) {
        for (int r = 0; r < options.n_env; ++r)
            samples[r] = exact ? slots[r].ft0[k] * slots[r].ft0[k] : mc_slots[r][k];
        double m = mean_of(samples);
        result.series.values.push_back(m);
        result.series.std_errors.push_back(std_error_of(samples, m));
        if (exact) {
            for (int r = 0; r < options.n_env; ++r)
                samples[r] = 2.0 * slots[r].ft0[k] * slots[r].lf0[k];
            result.du.push_back(mean_of(samples));
            for (int r = 0; r < options.n_env; ++r)
                samples[r] = 2.0 * (slots[r].lf0[k] * slots[r].lf0[k] +
                                    slots[r].ft0[k] * slots[r].l2f0[k]);
            double m2 = mean_of(samples);
            result.d2u.push_back(m2);
            result.d2u_se.push_back(std_error_of(samples, m2));
            for (int r = 0; r < options.n_env; ++r) samples[r] = slots[r].dirichlet[k];
            double md = mean_of(samples);
            result.dirichlet.push_back(md);
            result.dirichlet_se.push_back(std_error_of(samples, md));
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Environment ensembles
// ---------------------------------------------------------------------------

void for_each_env(const ConductanceLaw& law, const LatticeSpec& spec,
                  const EnsembleSpec& ensemble,
                  const std::function<void(Environment&, double)>& fn) {
    if (ensemble.mode == EnsembleSpec::Mode::MonteCarlo) {
        if (ensemble.n_env < 1) throw std::invalid_argument("ensemble: n_env >= 1");
        double w = 1.0 / ensemble.n_env;
        for (int r = 0; r < ensemble.n_env; ++r) {
            Environment env =
                sample_environment(law, spec, ensemble.master_seed, std::uint64_t(r));
            fn(env, w);
        }
        return;
    }
    // Exact enumeration over all edge assignments.
    if (law.kind() == LawKind::Dirac) {
        Environment env = sample_environment(law, spec, 0, 0);
        fn(env, 1.0);
        return;
    }
    if (law.kind() != LawKind::TwoPoint)
        throw std::invalid_argument("environment enumeration needs a discrete law");
    const std::int64_t n_edges = spec.n_edges();
    if (n_edges > 20)
        throw std::invalid_argument("environment enumeration limited to 20 edges");
    const double hi = law.hi(), p = law.prob_hi();
    Environment env = sample_environment(law, spec, 0, 0);
    const std::uint64_t states = std::uint64_t(1) << n_edges;
    for (std::uint64_t mask = 0; mask < states; ++mask) {
        double prob = 1.0;
        for (std::int64_t e = 0; e < n_edges; ++e) {
            bool up = (mask >> e) & 1;
            env.set_edge(e, up ? hi : 1.0);
            prob *= up ? p : 1.0 - p;
        }
        fn(env, prob);
    }
}

// ---------------------------------------------------------------------------
// Proof identities
// ---------------------------------------------------------------------------

HGField compute_h_g_field(Environment& env, const LocalFunction& f, double s, Site y,
                          const VerticalScheme& scheme) {
    if (scheme.mode != VerticalScheme::Mode::ExactEnumeration)
        throw std::invalid_argument("compute_h_g: exact enumeration schemes only");
    const LatticeSpec& spec = env.spec();
    const int d = spec.dim();
    const Site n = spec.n_sites();
    double times[1] = {s};

    std::vector<double> mean_fs(n, 0.0), mean_lfs(n, 0.0);
    std::vector<double> mean_wdf(d, 0.0), mean_df(d, 0.0);
    for_each_conditional_assignment(env, y, scheme, [&](double wgt) {
        std::vector<double> v = observable_field(env, f);
        std::vector<double> fs = std::move(propagate(env, v, times).at[0]);
        std::vector<double> lfs = apply_generator(env, fs);
        for (Site i = 0; i < n; ++i) {
            mean_fs[i] += wgt * fs[i];
            mean_lfs[i] += wgt * lfs[i];
        }
        for (int axis = 0; axis < d; ++axis) {
            double df = fs[spec.neighbor(y, axis + 1)] - fs[y];
            mean_wdf[axis] += wgt * env.edge(spec.edge_index(y, axis)) * df;
            mean_df[axis] += wgt * df;
        }
    });

    HGField field;
    std::vector<double> l_mean = apply_generator(env, mean_fs);
    field.h.resize(n);
    for (Site i = 0; i < n; ++i) field.h[i] = mean_lfs[i] - l_mean[i];
    field.g.resize(d);
    for (int axis = 0; axis < d; ++axis)
        field.g[axis] = mean_wdf[axis] - env.edge(spec.edge_index(y, axis)) * mean_df[axis];
    return field;
}

HGResult compute_h_g(Environment& env, const LocalFunction& f, double s, Site x, Site y,
                     const VerticalScheme& scheme) {
    HGField field = compute_h_g_field(env, f, s, y, scheme);
    return {field.h[x], std::move(field.g)};
}

double intermediate_identity_residual(Environment& env, const LocalFunction& f, double s,
                                      double t, Site y, const VerticalScheme& scheme) {
    const LatticeSpec& spec = env.spec();
    const int d = spec.dim();
    const Site n = spec.n_sites();
    HGField field = compute_h_g_field(env, f, s, y, scheme);

    double times[1] = {t};
    std::vector<double> pt_h = std::move(propagate(env, field.h, times).at[0]);
    // p_t(x, y) columns via reversibility: propagate deltas at y and y+e_i.
    std::vector<double> from_y =
        std::move(propagate(env, delta_at(spec, y).p, times).at[0]);
    std::vector<std::vector<double>> from_ynbr(d);
    for (int axis = 0; axis < d; ++axis)
        from_ynbr[axis] = std::move(
            propagate(env, delta_at(spec, spec.neighbor(y, axis + 1)).p, times).at[0]);

    double worst = 0.0;
    for (Site x = 0; x < n; ++x) {
        double rhs = 0.0;
        for (int axis = 0; axis < d; ++axis)
            rhs += (from_ynbr[axis][x] - from_y[x]) * field.g[axis];
        worst = std::max(worst, std::abs(pt_h[x] + rhs));
    }
    return worst;
}

DuhamelReport duhamel_residual(Environment& env, const LocalFunction& f, double t, Site y,
                               const VerticalScheme& scheme, double quad_tol,
                               int max_doublings) {
    if (!(t >= 0.0)) throw std::invalid_argument("duhamel_residual: t must be >= 0");
    const LatticeSpec& spec = env.spec();
    const Site n = spec.n_sites();

    // d_y P_t f(0, w): the conditional mean re-runs the full kernel because
    // f_t depends on a(y) through both the observable and the walk rates.
    double times_t[1] = {t};
    auto ft0 = [&](Environment& e) {
        std::vector<double> v = observable_field(e, f);
        return propagate(e, v, times_t).at[0][0];
    };
    double actual_ft0 = ft0(env);
    double lhs = actual_ft0 - conditional_mean(ft0, env, y, scheme);

    // P_t d_y f(0, w): only the observable is conditioned here.
    std::vector<double> mean_f(n, 0.0);
    for_each_conditional_assignment(env, y, scheme, [&](double wgt) {
        for (Site x = 0; x < n; ++x) mean_f[x] += wgt * eval_local(f, env, x);
    });
    std::vector<double> pt0 = std::move(propagate(env, delta_at(spec, 0).p, times_t).at[0]);
    double pt_df = 0.0;
    for (Site x = 0; x < n; ++x) pt_df += pt0[x] * (eval_local(f, env, x) - mean_f[x]);

    DuhamelReport report;
    report.commutator = lhs - pt_df;
    if (t == 0.0) {
        report.residual = std::abs(report.commutator);
        return report;
    }

    auto integrand = [&](double s) {
        HGField field = compute_h_g_field(env, f, s, y, scheme);
        double times_rem[1] = {t - s};
        return propagate(env, field.h, times_rem).at[0][0];
    };

    // Composite Simpson with panel doubling; previously computed nodes are
    // reused at even indices.
    int panels = 2;
    std::vector<double> vals{integrand(0.0), integrand(t / 2.0), integrand(t)};
    auto simpson = [&](const std::vector<double>& v, int np) {
        double h = t / np;
        double acc = v.front() + v.back();
        for (int i = 1; i < np; ++i) acc += (i % 2 ? 4.0 : 2.0) * v[i];
        return acc * h / 3.0;
    };
    double integral = simpson(vals, panels);
    bool converged = false;
    for (int round = 0; round < max_doublings; ++round) {
        int np = panels * 2;
        std::vector<double> next(np + 1);
        for (int i = 0; i <= panels; ++i) next[2 * i] = vals[i];
        for (int i = 1; i < np; i += 2) next[i] = integrand(t * double(i) / np);
        double refined = simpson(next, np);
        vals = std::move(next);
        panels = np;
        if (std::abs(refined - integral) < quad_tol) {
            integral = refined;
            converged = true;
            break;
        }
        integral = refined;
    }
    if (!converged)
        throw std::runtime_error("duhamel_residual: Simpson quadrature did not converge");

    report.integral = integral;
    report.panels = panels;
    // (d_y L - L d_y) P_s f = -h_s for this h, so the commutator equals
    // minus the transported integral.
    report.residual = std::abs(report.commutator + integral);
    return report;
}

KeyLemmaReport lemmeclef_check(const ConductanceLaw& law, const LocalFunction& f, double s,
                               const LatticeSpec& spec, const EnsembleSpec& ensemble,
                               const VerticalScheme& scheme) {
    const int d = spec.dim();
    double times[1] = {s};

    std::vector<double> lhs_cond_samples, lhs_w_samples, dirichlet_samples, weights;
    for_each_env(law, spec, ensemble, [&](Environment& env, double weight) {
        // Conditional means over a(0), the walk kernel re-run per assignment.
        std::vector<double> e0_wdf(d, 0.0), e0_df(d, 0.0);
        for_each_conditional_assignment(env, 0, scheme, [&](double wgt) {
            std::vector<double> v = observable_field(env, f);
            std::vector<double> fs = std::move(propagate(env, v, times).at[0]);
            for (int axis = 0; axis < d; ++axis) {
                double df = fs[spec.neighbor(0, axis + 1)] - fs[0];
                e0_wdf[axis] += wgt * env.edge(spec.edge_index(0, axis)) * df;
                e0_df[axis] += wgt * df;
            }
        });
        double lhs_cond = 0.0, lhs_w = 0.0;
        for (int axis = 0; axis < d; ++axis) {
            lhs_cond += e0_wdf[axis] * e0_wdf[axis];
            double w_actual = env.edge(spec.edge_index(0, axis));
            lhs_w += w_actual * e0_df[axis] * w_actual * e0_df[axis];
        }
        std::vector<double> v = observable_field(env, f);
        std::vector<double> fs = std::move(propagate(env, v, times).at[0]);
        lhs_cond_samples.push_back(lhs_cond);
        lhs_w_samples.push_back(lhs_w);
        dirichlet_samples.push_back(dirichlet_at_origin(env, fs));
        weights.push_back(weight);
    });

    auto weighted_mean = [&](const std::vector<double>& xs) {
        double acc = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) acc += weights[i] * xs[i];
        return acc;
    };
    KeyLemmaReport report;
    report.lhs_conditional = weighted_mean(lhs_cond_samples);
    report.lhs_weighted = weighted_mean(lhs_w_samples);
    report.rhs = law.second_moment() * weighted_mean(dirichlet_samples);
    report.margin_conditional = report.rhs - report.lhs_conditional;
    report.margin_weighted = report.rhs - report.lhs_weighted;
    if (ensemble.mode == EnsembleSpec::Mode::MonteCarlo) {
        double mc = report.lhs_conditional, mw = report.lhs_weighted;
        double md = weighted_mean(dirichlet_samples);
        report.se_conditional = std_error_of(lhs_cond_samples, mc);
        report.se_weighted = std_error_of(lhs_w_samples, mw);
        report.se_rhs = law.second_moment() * std_error_of(dirichlet_samples, md);
    }
    return report;
}

double dirichlet_derivative(const ConductanceLaw& law, const LocalFunction& f, double s,
                            const LatticeSpec& spec, const EnsembleSpec& ensemble) {
    double times[1] = {s};
    double acc = 0.0;
    for_each_env(law, spec, ensemble, [&](Environment& env, double weight) {
        std::vector<double> v = observable_field(env, f);
        std::vector<double> fs = std::move(propagate(env, v, times).at[0]);
        acc += weight * dirichlet_at_origin(env, fs);
    });
    return -acc;
}

DirichletDerivativeReport dirichlet_derivative_check(const ConductanceLaw& law,
                                                     const LocalFunction& f, double s,
                                                     const LatticeSpec& spec,
                                                     const EnsembleSpec& ensemble,
                                                     double step) {
    if (!(s > 0.0))
        throw std::invalid_argument("dirichlet_derivative_check: needs s > 0");
    double h = std::min(step, s / 2.0);
    double times[5] = {s - h, s - h / 2.0, s + h / 2.0, s + h, s};

    std::vector<double> diffs;
    double mean_dirichlet = 0.0, mean_fd = 0.0;
    for_each_env(law, spec, ensemble, [&](Environment& env, double weight) {
        std::vector<double> v = observable_field(env, f);
        Propagated prop = propagate(env, v, times);
        auto sq0 = [&](int k) { return prop.at[k][0] * prop.at[k][0]; };
        double q1 = (sq0(3) - sq0(0)) / (2.0 * h);
        double q2 = (sq0(2) - sq0(1)) / h;
        double richardson = (4.0 * q2 - q1) / 3.0;
        double dir = dirichlet_at_origin(env, prop.at[4]);
        mean_fd += weight * richardson;
        mean_dirichlet += weight * dir;
        diffs.push_back(richardson + dir);  // zero in expectation
    });

    DirichletDerivativeReport report;
    report.dirichlet = -mean_dirichlet;
    report.fd = mean_fd;
    report.step = h;
    if (ensemble.mode == EnsembleSpec::Mode::MonteCarlo)
        report.se_paired = std_error_of(diffs, mean_fd + mean_dirichlet);
    return report;
}

// ---------------------------------------------------------------------------
// Fixed walk scheme and iterated generator decays
// ---------------------------------------------------------------------------

DecaySeries fixed_scheme_divergence_decay(const Environment& scheme_env,
                                          const ConductanceLaw& law, const LocalFunction& g,
                                          int dir, std::span<const double> times, int n_env,
                                          std::uint64_t master_seed, double guard_scale,
                                          int workers) {
    const LatticeSpec& spec = scheme_env.spec();
    double w_max = 0.0;
    for (double w : scheme_env.conductances()) w_max = std::max(w_max, w);
    for (double t : times) {
        double spread = 8.0 * guard_scale * std::sqrt(2.0 * spec.dim() * w_max * t);
        if (spread > double(spec.side()))
            throw std::invalid_argument("wraparound guard: fixed-scheme run refuses t = " +
                                        std::to_string(t));
    }

    LocalFunction f = difference_local(g, dir);
    Propagated kernel = propagate(scheme_env, delta_at(spec, 0).p, times);

    std::vector<std::vector<double>> slots(n_env);
    parallel_for(n_env, workers, [&](std::int64_t r) {
        Environment env = sample_environment(law, spec, master_seed, std::uint64_t(r));
        std::vector<double> fvec = observable_field(env, f);
        std::vector<double>& row = slots[r];
        row.resize(times.size());
        for (std::size_t k = 0; k < times.size(); ++k) {
            double val = dot(kernel.at[k], fvec);
            row[k] = val * val;
        }
    });

    DecaySeries series;
    series.times.assign(times.begin(), times.end());
    series.meta = SeriesMeta{law.to_string(), "D" + std::to_string(dir) + "(" + g.id() + ")",
                             spec.dim(),      spec.side(),
                             n_env,           master_seed,
                             "fixed-scheme",  guard_scale};
    std::vector<double> samples(n_env);
    for (std::size_t k = 0; k < times.size(); ++k) {
        for (int r = 0; r < n_env; ++r) samples[r] = slots[r][k];
        double m = mean_of(samples);
        series.values.push_back(m);
        series.std_errors.push_back(std_error_of(samples, m));
    }
    return series;
}

VarianceDecayResult iterated_generator_decay(const ConductanceLaw& law, const LocalFunction& g,
                                             int n, const LatticeSpec& spec,
                                             std::span<const double> times,
                                             const VarianceDecayOptions& options) {
    if (n < 0 || n > 2) throw std::invalid_argument("iterated_generator_decay: n in {0,1,2}");
    if (!law.is_deterministic()) {
        LocalFunction f = g;
        for (int k = 0; k < n; ++k) f = apply_generator_local(f);
        return estimate_variance_decay(law, f, spec, times, options);
    }

    // Deterministic environment: every centered local observable vanishes
    // identically, so the observable route carries no signal. The kernel
    // realization ||P_t L^n delta_0||^2 has the same decay exponent
    // d/2 + 2n and is exactly computable.
    for (double t : times) check_wraparound(spec, law, t, options.guard_scale);
    Environment env = sample_environment(law, spec, options.master_seed, 0);
    std::vector<double> v = delta_at(spec, 0).p;
    for (int k = 0; k < n; ++k) v = apply_generator(env, v);
    Propagated prop = propagate(env, v, times);

    VarianceDecayResult result;
    result.series.times.assign(times.begin(), times.end());
    result.series.meta = SeriesMeta{law.to_string(), "L^" + std::to_string(n) + "(delta)",
                                    spec.dim(),      spec.side(),
                                    1,               options.master_seed,
                                    "kernel",        options.guard_scale};
    for (std::size_t k = 0; k < times.size(); ++k) {
        const std::vector<double>& w = prop.at[k];
        std::vector<double> lw = apply_generator(env, w);
        result.series.values.push_back(dot(w, w));
        result.series.std_errors.push_back(0.0);
        result.du.push_back(2.0 * dot(lw, w));
        result.d2u.push_back(4.0 * dot(lw, lw));
        result.d2u_se.push_back(0.0);
        result.dirichlet.push_back(weighted_gradient_l2_of(env, w));
        result.dirichlet_se.push_back(0.0);
    }
    return result;
}

EnumeratedSeries exact_variance_series_enumerated(const ConductanceLaw& law,
                                                  const LocalFunction& f,
                                                  const LatticeSpec& spec,
                                                  std::span<const double> times) {
    EnumeratedSeries series;
    series.times.assign(times.begin(), times.end());
    series.values.assign(times.size(), 0.0);
    series.du.assign(times.size(), 0.0);
    series.d2u.assign(times.size(), 0.0);
    for_each_env(law, spec, EnsembleSpec::enumerate_all(), [&](Environment& env, double weight) {
        FtProfile profile = exact_ft_profile(env, f, times);
        for (std::size_t k = 0; k < times.size(); ++k) {
            double ft = profile.ft0[k], lf = profile.lf0[k], l2f = profile.l2f0[k];
            series.values[k] += weight * ft * ft;
            series.du[k] += weight * 2.0 * ft * lf;
            series.d2u[k] += weight * 2.0 * (lf * lf + ft * l2f);
        }
    });
    return series;
}

}  // namespace rcm
