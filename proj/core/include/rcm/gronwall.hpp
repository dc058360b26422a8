#pragma once

#include <cstdint>
#include <vector>

namespace rcm {

/// Sampled C^1 non-increasing function a(t) on a grid, with its derivative
/// and the decay rate alpha > 1/2. The coupling function is derived:
/// b(t) = sqrt(-2 a'(t) a(t)). C = 0 asks the verifier to calibrate the
/// smallest hypothesis constant from the data itself.
struct GronwallInstance {
    std::vector<double> t;
    std::vector<double> a;
    std::vector<double> a_prime;
    double alpha = 1.0;
    double C = 0.0;
    /// Enforce the trapezoid grid-resolution precondition (1e-6 via grid
    /// doubling). Measured series on coarse grids disable this and carry the
    /// estimated quadrature error into the reported margins instead.
    bool strict_grid = true;
};

struct GronwallReport {
    double C_used = 0.0;
    /// min over the grid of C * RHS(t) - a(t), RHS = (t+1)^{-alpha} +
    /// int_0^t (t-s+1)^{-alpha} b(s) ds.
    double hypothesis_margin = 0.0;
    bool hypothesis_pass = false;
    /// Smallest K with a(t) <= K max(C, a(0)) (t+1)^{-alpha} on the grid.
    double K = 0.0;
    bool conclusion_finite = false;
    double quadrature_error = 0.0;  // grid-doubling estimate on the integral
    std::vector<double> rhs;        // C-free right-hand side per grid point
};

/// Checks the hypothesis and conclusion of the Gronwall-type bound as an
/// implication: a failing hypothesis is reported as such, never as a
/// conclusion violation.
GronwallReport gronwall_verify(const GronwallInstance& inst);

/// Randomized admissible instance built from a non-increasing C^1 monotone
/// cubic spline; C is calibrated so the hypothesis holds with a 5% margin.
GronwallInstance random_admissible_instance(double alpha, std::uint64_t seed, int grid_points = 513,
                                            double t_max = 64.0);

}  // namespace rcm
