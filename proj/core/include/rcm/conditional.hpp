#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "rcm/environment.hpp"

namespace rcm {

/// How conditional expectations over the d positive edges at a site are
/// evaluated. ExactEnumeration is available only for discrete laws;
/// Quadrature places fixed Gauss-Legendre nodes in quantile space per edge;
/// Resample falls back to Monte Carlo conditional resampling.
struct VerticalScheme {
    enum class Mode { ExactEnumeration, Quadrature, Resample };
    Mode mode = Mode::ExactEnumeration;
    int quad_order = 8;
    int n_resample = 1024;
    std::uint64_t resample_seed = 1;

    static VerticalScheme exact() { return {Mode::ExactEnumeration, 8, 0, 0}; }
    static VerticalScheme quadrature(int q = 8) { return {Mode::Quadrature, q, 0, 0}; }
    static VerticalScheme resample(int m, std::uint64_t seed) {
        return {Mode::Resample, 8, m, seed};
    }
};

/// (value, weight) nodes representing the single-edge law under a scheme.
std::vector<std::pair<double, double>> law_nodes(const ConductanceLaw& law,
                                                 const VerticalScheme& scheme);

using EnvFunctional = std::function<double(Environment&)>;

/// E^{(y)}[F]: average of F over the conditional law of the d edges owned by
/// y, everything else held fixed. Mutates env in place and restores it.
double conditional_mean(const EnvFunctional& F, Environment& env, Site y,
                        const VerticalScheme& scheme);

/// Vertical derivative at y: F(w) - E^{(y)}[F].
double vertical_derivative(const EnvFunctional& F, Environment& env, Site y,
                           const VerticalScheme& scheme);

/// Gauss-Legendre nodes and weights on (0, 1).
std::vector<std::pair<double, double>> gauss_legendre_unit(int order);

/// Iterates assignments of the edges at y drawn from the scheme nodes; calls
/// visit(weight) after installing each assignment, then restores the
/// original values. Shared driver for the identity checks.
void for_each_conditional_assignment(Environment& env, Site y, const VerticalScheme& scheme,
                                     const std::function<void(double)>& visit);

}  // namespace rcm
