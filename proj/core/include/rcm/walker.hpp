#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rcm/environment.hpp"
#include "rcm/local_function.hpp"
#include "rcm/rng.hpp"

namespace rcm {

/// Event-driven walk from the origin: exponential holding times with the
/// site's total exit rate, next site proportional to the edge conductance.
/// Samples X_t exactly; identical (env, stream) gives identical trajectories.
Site simulate_endpoint(const Environment& env, double t, RngStream stream);

/// Endpoint plus jump count, for rate diagnostics.
struct WalkEndpoint {
    Site position;
    std::int64_t jumps;
};
WalkEndpoint simulate_endpoint_counted(const Environment& env, double t, RngStream stream);

/// Full trajectory (jump times and sites), behind its own entry point since
/// the estimators only need endpoints.
std::vector<std::pair<double, Site>> simulate_path(const Environment& env, double t,
                                                   RngStream stream);

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::int64_t n_walks = 0;
};

/// Monte Carlo estimate of f_t(0, w) = E_0[f(X_t, w)]. Walk k uses the
/// substream (seed, k); reduction runs in walk-index order.
McEstimate mc_ft(const Environment& env, const LocalFunction& f, double t,
                 std::int64_t n_walks, std::uint64_t seed);

/// Endpoint counts over n_walks independent walks from the origin.
std::vector<std::int64_t> endpoint_histogram(const Environment& env, double t,
                                             std::int64_t n_walks, std::uint64_t seed);

}  // namespace rcm
