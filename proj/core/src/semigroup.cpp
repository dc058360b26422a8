#include "rcm/semigroup.hpp"

#include <cmath>
#include <stdexcept>

#include "rcm/generator.hpp"

namespace rcm {

namespace {

/// Poisson(mu) weights 0..N with cumulative mass >= 1 - tail_tol. Terms that
/// underflow to zero cost nothing in the power chain, which realizes the
/// lower truncation.
std::vector<double> poisson_window(double mu, double tail_tol) {
    if (mu == 0.0) return {1.0};
    std::vector<double> w;
    const double log_mu = std::log(mu);
    double cum = 0.0;
    // Hard cap: mu + 12 sqrt(mu) + 64 covers tail_tol down to ~1e-16.
    const std::int64_t cap = std::int64_t(mu + 12.0 * std::sqrt(mu) + 64.0);
    for (std::int64_t n = 0; n <= cap; ++n) {
        double lw = -mu + double(n) * log_mu - std::lgamma(double(n) + 1.0);
        double wn = std::exp(lw);
        w.push_back(wn);
        cum += wn;
        if (cum >= 1.0 - tail_tol) return w;
    }
    throw std::runtime_error("uniformization: Poisson window did not close (mu too large?)");
}

}  // namespace

ProbVector delta_at(const LatticeSpec& spec, Site x) {
    ProbVector pv{spec, std::vector<double>(spec.n_sites(), 0.0), 0.0};
    pv.p[x] = 1.0;
    return pv;
}

Propagated propagate(const Environment& env, std::span<const double> v,
                     std::span<const double> times, const UniformizationParams& params) {
    const Site n_sites = env.spec().n_sites();
    if (std::int64_t(v.size()) != n_sites)
        throw std::invalid_argument("propagate: vector length must equal site count");
    for (double t : times)
        if (!(t >= 0.0)) throw std::invalid_argument("propagate: times must be >= 0");

    const double max_exit = env.max_exit_rate();
    double lambda = params.lambda;
    if (lambda == 0.0)
        lambda = max_exit;
    else if (lambda < max_exit)
        throw std::invalid_argument("uniformization rate below maximum exit rate");

    Propagated out;
    out.lambda = lambda;
    out.at.resize(times.size());
    out.deficit.assign(times.size(), 0.0);

    std::vector<std::vector<double>> weights(times.size());
    std::size_t max_terms = 0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        weights[k] = poisson_window(lambda * times[k], params.tail_tol);
        max_terms = std::max(max_terms, weights[k].size());
        double cum = 0.0;
        for (double w : weights[k]) cum += w;
        out.deficit[k] = std::max(0.0, 1.0 - cum);
        out.at[k].assign(n_sites, 0.0);
    }
    out.terms = int(max_terms);

    std::vector<double> cur(v.begin(), v.end());
    std::vector<double> lv(n_sites);
    const double inv_lambda = 1.0 / lambda;
    for (std::size_t n = 0; n < max_terms; ++n) {
        for (std::size_t k = 0; k < times.size(); ++k) {
            if (n < weights[k].size() && weights[k][n] > 0.0) {
                const double w = weights[k][n];
                double* acc = out.at[k].data();
                for (Site i = 0; i < n_sites; ++i) acc[i] += w * cur[i];
            }
        }
        if (n + 1 < max_terms) {
            apply_generator(env, cur, lv);
            for (Site i = 0; i < n_sites; ++i) cur[i] += lv[i] * inv_lambda;
        }
    }
    return out;
}

ProbVector semigroup(const Environment& env, double t, const ProbVector& init,
                     const UniformizationParams& params) {
    if (!(t >= 0.0)) throw std::invalid_argument("semigroup: t must be >= 0");
    if (!(init.spec == env.spec()))
        throw std::invalid_argument("semigroup: init vector on the wrong lattice");
    double times[1] = {t};
    Propagated prop = propagate(env, init.p, times, params);
    ProbVector out{env.spec(), std::move(prop.at[0]), init.deficit + prop.deficit[0]};
    return out;
}

double reversibility_check(const Environment& env, double t, Site x, Site y,
                           const UniformizationParams& params) {
    ProbVector from_x = semigroup(env, t, delta_at(env.spec(), x), params);
    ProbVector from_y = semigroup(env, t, delta_at(env.spec(), y), params);
    return std::abs(from_x.p[y] - from_y.p[x]);
}

HeatKernelPoint heat_kernel_l2_full(const Environment& env, double t,
                                    const UniformizationParams& params) {
    ProbVector delta = delta_at(env.spec(), 0);
    double times[2] = {t, 2.0 * t};
    Propagated prop = propagate(env, delta.p, times, params);
    HeatKernelPoint hk;
    hk.l2 = dot(prop.at[0], prop.at[0]);
    hk.p2t_origin = prop.at[1][0];
    hk.residual = std::abs(hk.l2 - hk.p2t_origin);
    return hk;
}

double heat_kernel_l2(const Environment& env, double t, const UniformizationParams& params) {
    HeatKernelPoint hk = heat_kernel_l2_full(env, t, params);
    if (hk.residual > 1e-9)
        throw std::runtime_error("heat_kernel_l2: l2 norm and return probability disagree");
    return hk.l2;
}

double gradient_l2_of(const Environment& env, std::span<const double> p) {
    const Topology& topo = env.topology();
    const Site n = env.spec().n_sites();
    const int d = env.spec().dim();
    double total = 0.0;
    for (Site x = 0; x < n; ++x) {
        const Site* nbr = topo.neighbor_row(x);
        for (int axis = 0; axis < d; ++axis) {
            double diff = p[x] - p[nbr[axis]];
            total += diff * diff;
        }
    }
    return total;
}

double gradient_l2(const Environment& env, double t, const UniformizationParams& params) {
    ProbVector pt = semigroup(env, t, delta_at(env.spec(), 0), params);
    return gradient_l2_of(env, pt.p);
}

double weighted_gradient_l2_of(const Environment& env, std::span<const double> p) {
    const Topology& topo = env.topology();
    const Site n = env.spec().n_sites();
    const int fanout = topo.fanout();
    const double* w = env.conductances().data();
    double total = 0.0;
    for (Site x = 0; x < n; ++x) {
        const Site* nbr = topo.neighbor_row(x);
        const EdgeId* edge = topo.incident_row(x);
        for (int k = 0; k < fanout; ++k) {
            double diff = p[nbr[k]] - p[x];
            total += w[edge[k]] * diff * diff;
        }
    }
    return total;
}

KernelSeries heat_kernel_series(const Environment& env, std::span<const double> times,
                                const UniformizationParams& params) {
    std::vector<double> all_times;
    all_times.reserve(2 * times.size());
    for (double t : times) all_times.push_back(t);
    for (double t : times) all_times.push_back(2.0 * t);
    ProbVector delta = delta_at(env.spec(), 0);
    Propagated prop = propagate(env, delta.p, all_times, params);

    KernelSeries ks;
    ks.times.assign(times.begin(), times.end());
    for (std::size_t k = 0; k < times.size(); ++k) {
        const auto& pt = prop.at[k];
        const auto& p2t = prop.at[times.size() + k];
        ks.l2.push_back(dot(pt, pt));
        ks.p2t_origin.push_back(p2t[0]);
        ks.l2_residual.push_back(std::abs(ks.l2.back() - ks.p2t_origin.back()));
        ks.grad.push_back(gradient_l2_of(env, pt));
        ks.weighted_grad.push_back(weighted_gradient_l2_of(env, pt));
        ks.deficit.push_back(prop.deficit[k]);
    }
    return ks;
}

KernelDerivatives heat_kernel_derivatives(const Environment& env, double t,
                                          const UniformizationParams& params) {
    ProbVector pt = semigroup(env, t, delta_at(env.spec(), 0), params);
    std::vector<double> lp = apply_generator(env, pt.p);
    KernelDerivatives kd;
    kd.u = dot(pt.p, pt.p);
    kd.du = 2.0 * dot(lp, pt.p);
    kd.d2u = 4.0 * dot(lp, lp);
    return kd;
}

}  // namespace rcm
