#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rcm {

/// Finite nonnegative exponential mixture sum_i w_i exp(-lambda_i t): the
/// Laplace transform of a discrete positive measure, hence exactly
/// completely monotone and closed under differentiation.
struct CMFunction {
    std::vector<double> weights;
    std::vector<double> rates;

    double value(double t) const;
    double derivative(double t) const;
    /// (-1)^n f^(n)(t), nonnegative for every mixture.
    double alternating_derivative(int n, double t) const;
};

CMFunction random_mixture(int max_terms, std::uint64_t seed, double rate_lo = 0.05,
                          double rate_hi = 20.0);

/// Hypothesis f(t) <= C / t^alpha with C read off the same grid, conclusion
/// -f'(t) <= C e^alpha alpha^{-alpha} Gamma(alpha+2) t^{-(alpha+1)}.
struct CMBoundReport {
    double alpha = 0.0;
    double C = 0.0;
    bool hypothesis_ok = false;  // false when the mixture cannot decay like t^{-alpha}
    bool bound_ok = false;
    double min_margin = 0.0;  // min over grid of bound - (-f')
};
CMBoundReport cm_bound_check(const CMFunction& f, std::span<const double> grid, double alpha);

/// Pointwise sign checks u >= 0, u' <= 0, u'' >= 0 within 3 sigma (exact
/// series pass zero-tolerance up to round-off).
struct CMSignatureInput {
    std::vector<double> t;
    std::vector<double> u, du, d2u;
    std::vector<double> sigma_u, sigma_du, sigma_d2u;  // optional, empty = exact
};
struct CMSignatureReport {
    bool pass = false;
    double worst_u = 0.0;    // most negative normalized violation of u >= 0
    double worst_du = 0.0;   // most positive of u' <= 0
    double worst_d2u = 0.0;  // most negative of u'' >= 0
};
CMSignatureReport cm_signature_check(const CMSignatureInput& input);

}  // namespace rcm
