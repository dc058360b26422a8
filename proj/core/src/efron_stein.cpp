#include "rcm/efron_stein.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rcm/rng.hpp"

namespace rcm {

EfronSteinResult efron_stein_enumerate(const VectorFunctional& F,
                                       std::span<const TwoPointVar> vars) {
    const int n = int(vars.size());
    if (n < 1 || n > 20) throw std::invalid_argument("efron_stein_enumerate: n out of range");
    const std::uint64_t states = std::uint64_t(1) << n;

    std::vector<double> values(states), probs(states);
    std::vector<double> x(n);
    for (std::uint64_t mask = 0; mask < states; ++mask) {
        double prob = 1.0;
        for (int i = 0; i < n; ++i) {
            bool hi = (mask >> i) & 1;
            x[i] = hi ? vars[i].hi : vars[i].lo;
            prob *= hi ? vars[i].p_hi : 1.0 - vars[i].p_hi;
        }
        values[mask] = F(x);
        probs[mask] = prob;
    }

    double mean = 0.0, meansq = 0.0;
    for (std::uint64_t mask = 0; mask < states; ++mask) {
        mean += probs[mask] * values[mask];
        meansq += probs[mask] * values[mask] * values[mask];
    }

    EfronSteinResult result;
    result.variance = meansq - mean * mean;
    for (int i = 0; i < n; ++i) {
        const std::uint64_t bit = std::uint64_t(1) << i;
        const double p = vars[i].p_hi;
        double acc = 0.0;
        for (std::uint64_t mask = 0; mask < states; ++mask) {
            if (mask & bit) continue;  // visit each pair once via the lo member
            double outer_prob = probs[mask] / (1.0 - p);
            double lo = values[mask], hi = values[mask | bit];
            double m = (1.0 - p) * lo + p * hi;
            double v = (1.0 - p) * (lo - m) * (lo - m) + p * (hi - m) * (hi - m);
            acc += outer_prob * v;
        }
        result.conditional_sum += acc;
    }
    return result;
}

EfronSteinResult efron_stein_mc(const VectorFunctional& F, std::span<const ConductanceLaw> vars,
                                std::int64_t n_samples, std::uint64_t seed) {
    const int n = int(vars.size());
    if (n < 1) throw std::invalid_argument("efron_stein_mc: need at least one variable");
    if (n_samples < 2) throw std::invalid_argument("efron_stein_mc: need at least 2 samples");

    double sum = 0.0, sumsq = 0.0, cond = 0.0;
    std::vector<double> x(n);
    for (std::int64_t k = 0; k < n_samples; ++k) {
        RngStream stream(seed, std::uint64_t(k), 0xe5ull);
        for (int i = 0; i < n; ++i) x[i] = vars[i].quantile(stream.next_unit());
        double fx = F(x);
        sum += fx;
        sumsq += fx * fx;
        for (int i = 0; i < n; ++i) {
            double orig = x[i];
            x[i] = vars[i].quantile(stream.next_unit());
            double fxp = F(x);
            x[i] = orig;
            cond += 0.5 * (fx - fxp) * (fx - fxp);
        }
    }
    EfronSteinResult result;
    double mean = sum / double(n_samples);
    result.variance = sumsq / double(n_samples) - mean * mean;
    result.conditional_sum = cond / double(n_samples);
    return result;
}

}  // namespace rcm
