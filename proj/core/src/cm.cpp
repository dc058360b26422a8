#include "rcm/cm.hpp"

#include <cmath>
#include <stdexcept>

#include "rcm/rng.hpp"

namespace rcm {

double CMFunction::value(double t) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i)
        acc += weights[i] * std::exp(-rates[i] * t);
    return acc;
}

double CMFunction::derivative(double t) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i)
        acc -= weights[i] * rates[i] * std::exp(-rates[i] * t);
    return acc;
}

double CMFunction::alternating_derivative(int n, double t) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i)
        acc += weights[i] * std::pow(rates[i], double(n)) * std::exp(-rates[i] * t);
    return acc;
}

CMFunction random_mixture(int max_terms, std::uint64_t seed, double rate_lo, double rate_hi) {
    RngStream stream(seed, 0xc3full, 0);
    int terms = 1 + int(stream.next_unit() * max_terms);
    CMFunction f;
    double log_lo = std::log(rate_lo), log_hi = std::log(rate_hi);
    for (int i = 0; i < terms; ++i) {
        f.weights.push_back(0.05 + 1.95 * stream.next_unit());
        f.rates.push_back(std::exp(log_lo + (log_hi - log_lo) * stream.next_unit()));
    }
    return f;
}

CMBoundReport cm_bound_check(const CMFunction& f, std::span<const double> grid, double alpha) {
    if (f.weights.empty()) throw std::invalid_argument("cm_bound_check: empty mixture");
    if (f.weights.size() != f.rates.size())
        throw std::invalid_argument("cm_bound_check: weight/rate size mismatch");
    if (!(alpha > 0.0)) throw std::invalid_argument("cm_bound_check: alpha must be positive");
    if (grid.empty()) throw std::invalid_argument("cm_bound_check: empty grid");

    CMBoundReport report;
    report.alpha = alpha;
    // A zero-rate atom keeps f bounded away from zero, so sup t^alpha f(t)
    // is infinite and the decay hypothesis cannot hold.
    for (std::size_t i = 0; i < f.rates.size(); ++i) {
        if (f.rates[i] <= 0.0 && f.weights[i] > 0.0) {
            report.hypothesis_ok = false;
            return report;
        }
    }
    report.hypothesis_ok = true;
    for (double t : grid) report.C = std::max(report.C, std::pow(t, alpha) * f.value(t));

    const double constant = report.C * std::exp(alpha) * std::pow(alpha, -alpha) *
                            std::tgamma(alpha + 2.0);
    report.min_margin = std::numeric_limits<double>::infinity();
    for (double t : grid) {
        double bound = constant * std::pow(t, -(alpha + 1.0));
        double margin = bound - (-f.derivative(t));
        report.min_margin = std::min(report.min_margin, margin);
    }
    report.bound_ok = report.min_margin >= 0.0;
    return report;
}

CMSignatureReport cm_signature_check(const CMSignatureInput& input) {
    const std::size_t n = input.t.size();
    if (input.u.size() != n || input.du.size() != n || input.d2u.size() != n)
        throw std::invalid_argument("cm_signature_check: inconsistent series lengths");

    double scale = 0.0;
    for (double v : input.u) scale = std::max(scale, std::abs(v));
    const double exact_tol = 1e-12 * std::max(1.0, scale);
    auto tol = [&](const std::vector<double>& sigma, std::size_t k) {
        if (sigma.size() == n && sigma[k] > 0.0) return 3.0 * sigma[k];
        return exact_tol;
    };

    CMSignatureReport report;
    report.pass = true;
    for (std::size_t k = 0; k < n; ++k) {
        double viol_u = -input.u[k];
        double viol_du = input.du[k];
        double viol_d2u = -input.d2u[k];
        report.worst_u = std::max(report.worst_u, viol_u);
        report.worst_du = std::max(report.worst_du, viol_du);
        report.worst_d2u = std::max(report.worst_d2u, viol_d2u);
        if (viol_u > tol(input.sigma_u, k) || viol_du > tol(input.sigma_du, k) ||
            viol_d2u > tol(input.sigma_d2u, k))
            report.pass = false;
    }
    return report;
}

}  // namespace rcm
