#pragma once

#include <span>
#include <vector>

#include "rcm/environment.hpp"

namespace rcm {

/// Uniformization of exp(tL): Poisson mixture of powers of the stochastic
/// jump matrix I + L/Lambda.
struct UniformizationParams {
    /// Uniformization rate; 0 selects the exact maximum exit rate of the
    /// environment. Must otherwise dominate it.
    double lambda = 0.0;
    /// Poisson tail truncation tolerance; truncated mass is tracked as
    /// deficit, never renormalized away.
    double tail_tol = 1e-12;
};

/// Sub-probability vector over torus sites.
struct ProbVector {
    LatticeSpec spec;
    std::vector<double> p;
    double deficit = 0.0;
};

ProbVector delta_at(const LatticeSpec& spec, Site x);

/// exp(tL) v for every requested time, sharing one power chain. Times need
/// not be sorted; all must be >= 0.
struct Propagated {
    std::vector<std::vector<double>> at;  // one vector per requested time
    std::vector<double> deficit;          // truncated Poisson mass per time
    double lambda = 0.0;
    int terms = 0;
};
Propagated propagate(const Environment& env, std::span<const double> v,
                     std::span<const double> times, const UniformizationParams& params = {});

ProbVector semigroup(const Environment& env, double t, const ProbVector& init,
                     const UniformizationParams& params = {});

/// |P_x(X_t = y) - P_y(X_t = x)|, computed from two independent runs.
double reversibility_check(const Environment& env, double t, Site x, Site y,
                           const UniformizationParams& params = {});

/// sum_y p_t(0,y)^2 together with the independently computed p_{2t}(0,0);
/// the two must agree (Chapman-Kolmogorov + reversibility).
struct HeatKernelPoint {
    double l2 = 0.0;       // sum of squares at time t
    double p2t_origin = 0.0;  // return probability at time 2t
    double residual = 0.0;
};
HeatKernelPoint heat_kernel_l2_full(const Environment& env, double t,
                                    const UniformizationParams& params = {});

/// Returns sum_y p_t(0,y)^2 after verifying it against p_{2t}(0,0) within
/// 1e-9; throws if the cross-check fails.
double heat_kernel_l2(const Environment& env, double t, const UniformizationParams& params = {});

/// sum over unordered edges {y, y+e_i} of (p_t(0,y) - p_t(0,y+e_i))^2.
double gradient_l2(const Environment& env, double t, const UniformizationParams& params = {});
double gradient_l2_of(const Environment& env, std::span<const double> p);

/// Conductance-weighted gradient sum over ordered pairs (y, y+z), |z|=1:
/// equals -d/dt of sum_y p_t(0,y)^2.
double weighted_gradient_l2_of(const Environment& env, std::span<const double> p);

/// Batched heat-kernel diagnostics on a time grid.
struct KernelSeries {
    std::vector<double> times;
    std::vector<double> l2;            // sum p_t^2
    std::vector<double> p2t_origin;    // p_{2t}(0,0)
    std::vector<double> l2_residual;   // |l2 - p2t_origin|
    std::vector<double> grad;          // unweighted gradient sum
    std::vector<double> weighted_grad; // conductance-weighted, ordered pairs
    std::vector<double> deficit;
};
KernelSeries heat_kernel_series(const Environment& env, std::span<const double> times,
                                const UniformizationParams& params = {});

/// u = <p_t, p_t>, u' = 2 <L p_t, p_t>, u'' = 4 <L p_t, L p_t>: exact
/// derivative signs for complete-monotonicity checks.
struct KernelDerivatives {
    double u = 0.0;
    double du = 0.0;
    double d2u = 0.0;
};
KernelDerivatives heat_kernel_derivatives(const Environment& env, double t,
                                          const UniformizationParams& params = {});

}  // namespace rcm
