#include "rcm/walker.hpp"

#include <cmath>
#include <stdexcept>

namespace rcm {

namespace {

template <typename OnJump>
Site run_walk(const Environment& env, double t, RngStream& stream, OnJump&& on_jump) {
    if (!(t >= 0.0)) throw std::invalid_argument("walker: t must be >= 0");
    const Topology& topo = env.topology();
    const int fanout = topo.fanout();
    const double* w = env.conductances().data();
    Site x = 0;
    double clock = 0.0;
    for (;;) {
        const EdgeId* edge = topo.incident_row(x);
        double rate = 0.0;
        for (int k = 0; k < fanout; ++k) rate += w[edge[k]];
        clock += stream.next_exponential(rate);
        if (clock > t) return x;
        // Embedded jump chain: neighbor k with probability w_k / W(x).
        double target = stream.next_unit() * rate;
        double cum = 0.0;
        int pick = fanout - 1;
        for (int k = 0; k < fanout; ++k) {
            cum += w[edge[k]];
            if (target < cum) {
                pick = k;
                break;
            }
        }
        x = topo.neighbor(x, pick);
        on_jump(clock, x);
    }
}

}  // namespace

Site simulate_endpoint(const Environment& env, double t, RngStream stream) {
    return run_walk(env, t, stream, [](double, Site) {});
}

WalkEndpoint simulate_endpoint_counted(const Environment& env, double t, RngStream stream) {
    std::int64_t jumps = 0;
    Site x = run_walk(env, t, stream, [&](double, Site) { ++jumps; });
    return {x, jumps};
}

std::vector<std::pair<double, Site>> simulate_path(const Environment& env, double t,
                                                   RngStream stream) {
    std::vector<std::pair<double, Site>> path{{0.0, 0}};
    run_walk(env, t, stream, [&](double when, Site where) { path.emplace_back(when, where); });
    return path;
}

McEstimate mc_ft(const Environment& env, const LocalFunction& f, double t,
                 std::int64_t n_walks, std::uint64_t seed) {
    if (n_walks < 2) throw std::invalid_argument("mc_ft: need at least 2 walks");
    double sum = 0.0, sumsq = 0.0;
    for (std::int64_t k = 0; k < n_walks; ++k) {
        Site endpoint = simulate_endpoint(env, t, RngStream(seed, std::uint64_t(k), 0x77a1u));
        double val = eval_local(f, env, endpoint);
        sum += val;
        sumsq += val * val;
    }
    McEstimate est;
    est.n_walks = n_walks;
    est.estimate = sum / double(n_walks);
    double var = (sumsq - sum * sum / double(n_walks)) / double(n_walks - 1);
    est.std_error = std::sqrt(std::max(0.0, var) / double(n_walks));
    return est;
}

std::vector<std::int64_t> endpoint_histogram(const Environment& env, double t,
                                             std::int64_t n_walks, std::uint64_t seed) {
    std::vector<std::int64_t> counts(env.spec().n_sites(), 0);
    for (std::int64_t k = 0; k < n_walks; ++k)
        ++counts[simulate_endpoint(env, t, RngStream(seed, std::uint64_t(k), 0x77a1u))];
    return counts;
}

}  // namespace rcm
