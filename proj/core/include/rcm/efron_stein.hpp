#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "rcm/law.hpp"

namespace rcm {

/// Independent scalar variable taking value lo or hi, P(hi) = p_hi.
struct TwoPointVar {
    double lo = 0.0;
    double hi = 1.0;
    double p_hi = 0.5;
};

struct EfronSteinResult {
    double variance = 0.0;         // Var(F)
    double conditional_sum = 0.0;  // sum_i E[Var^{(i)}(F)]
    double slack() const { return conditional_sum - variance; }
};

using VectorFunctional = std::function<double(std::span<const double>)>;

/// Exact Efron-Stein decomposition by full enumeration over two-point
/// variables; n is capped at 20 states bits.
EfronSteinResult efron_stein_enumerate(const VectorFunctional& F,
                                       std::span<const TwoPointVar> vars);

/// Monte Carlo variant for arbitrary laws. Uses the resampling pair identity
/// Var^{(i)}(F) = E^{(i)}[(F - F')^2] / 2 with one independent redraw of
/// coordinate i per sample.
EfronSteinResult efron_stein_mc(const VectorFunctional& F, std::span<const ConductanceLaw> vars,
                                std::int64_t n_samples, std::uint64_t seed);

}  // namespace rcm
