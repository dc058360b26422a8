#pragma once

// Shared numeric oracles for the test suites. Everything here is independent
// of the library's semigroup path: Bessel series for the d=1 kernel, dense
// linear algebra built directly from edge weights, and small statistics
// helpers.

#include <cmath>
#include <cstdint>
#include <vector>

#include "rcm/environment.hpp"

namespace rcm_test {

/// e^{-x} I_0(x): direct product for moderate x, asymptotic series beyond.
inline double bessel_i0_scaled(double x) {
    if (x < 0.0) x = -x;
    if (x <= 100.0) return std::exp(-x) * std::cyl_bessel_i(0.0, x);
    // I_0(x) e^{-x} ~ (2 pi x)^{-1/2} sum_k prod_{j<=k} (2j-1)^2 / (k! (8x)^k)
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 8; ++k) {
        double odd = 2.0 * k - 1.0;
        term *= odd * odd / (double(k) * 8.0 * x);
        sum += term;
    }
    return sum / std::sqrt(2.0 * M_PI * x);
}

/// Return probability of the rate-1-per-edge walk on Z at time t.
inline double z1_return_probability(double t) { return bessel_i0_scaled(2.0 * t); }

/// Same on Z^d by coordinate independence.
inline double zd_return_probability(int d, double t) {
    return std::pow(z1_return_probability(t), double(d));
}

/// P_0(X_t = x) on Z for the rate-1 walk: e^{-2t} I_x(2t).
inline double z1_point_probability(long long x, double t) {
    if (x < 0) x = -x;
    return std::exp(-2.0 * t) * std::cyl_bessel_i(double(x), 2.0 * t);
}

/// Dense generator matrix assembled edge by edge, independently of the
/// library's incidence tables.
inline std::vector<double> dense_generator(const rcm::Environment& env) {
    const auto& spec = env.spec();
    const auto n = spec.n_sites();
    std::vector<double> L(std::size_t(n) * n, 0.0);
    for (rcm::Site x = 0; x < n; ++x) {
        for (int axis = 0; axis < spec.dim(); ++axis) {
            rcm::Site y = spec.neighbor(x, axis + 1);
            double w = env.edge(spec.edge_index(x, axis));
            L[x * n + y] += w;
            L[y * n + x] += w;
            L[x * n + x] -= w;
            L[y * n + y] -= w;
        }
    }
    return L;
}

/// Survival function of chi^2 with k dof at x, via the Wilson-Hilferty cube
/// root normal approximation: good to a few 1e-3 in the tail for k >= 10.
inline double chi2_survival_wh(double x, double k) {
    double z = (std::cbrt(x / k) - (1.0 - 2.0 / (9.0 * k))) / std::sqrt(2.0 / (9.0 * k));
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
    double s = 0.0;
    for (double v : xs) s += v;
    double m = s / double(xs.size());
    double ss = 0.0;
    for (double v : xs) ss += (v - m) * (v - m);
    return {m, std::sqrt(ss / double(xs.size() - 1) / double(xs.size()))};
}

}  // namespace rcm_test
