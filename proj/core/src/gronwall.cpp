#include "rcm/gronwall.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rcm/rng.hpp"

namespace rcm {

namespace {

std::vector<double> coupling(const GronwallInstance& inst) {
    std::vector<double> b(inst.t.size());
    for (std::size_t j = 0; j < b.size(); ++j)
        b[j] = std::sqrt(std::max(0.0, -2.0 * inst.a_prime[j] * inst.a[j]));
    return b;
}

/// Trapezoid of int_{t[0]}^{t[j]} (t[j] - s + 1)^{-alpha} b(s) ds for every j,
/// optionally skipping every other interior node (grid-doubling estimate).
std::vector<double> convolution_integral(const std::vector<double>& t,
                                         const std::vector<double>& b, double alpha,
                                         int stride) {
    const std::size_t n = t.size();
    std::vector<double> out(n, 0.0);
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < n; ++j) {
        idx.clear();
        for (std::size_t i = 0; i < j; i += stride) idx.push_back(i);
        idx.push_back(j);
        double acc = 0.0;
        for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
            std::size_t i0 = idx[k], i1 = idx[k + 1];
            double f0 = std::pow(t[j] - t[i0] + 1.0, -alpha) * b[i0];
            double f1 = std::pow(t[j] - t[i1] + 1.0, -alpha) * b[i1];
            acc += 0.5 * (f0 + f1) * (t[i1] - t[i0]);
        }
        out[j] = acc;
    }
    return out;
}

}  // namespace

GronwallReport gronwall_verify(const GronwallInstance& inst) {
    const std::size_t n = inst.t.size();
    if (n < 3 || inst.a.size() != n || inst.a_prime.size() != n)
        throw std::invalid_argument("gronwall_verify: inconsistent grid");
    if (!(inst.alpha > 0.5))
        throw std::invalid_argument("gronwall_verify: alpha must exceed 1/2");
    double scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(inst.a[j]));
    for (std::size_t j = 0; j + 1 < n; ++j) {
        if (!(inst.t[j + 1] > inst.t[j]))
            throw std::invalid_argument("gronwall_verify: grid must be strictly increasing");
        if (inst.a[j + 1] > inst.a[j] + 1e-12 * std::max(1.0, scale))
            throw std::invalid_argument("gronwall_verify: a must be non-increasing");
    }

    std::vector<double> b = coupling(inst);
    std::vector<double> integral = convolution_integral(inst.t, b, inst.alpha, 1);
    std::vector<double> coarse = convolution_integral(inst.t, b, inst.alpha, 2);
    double quad_err = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        quad_err = std::max(quad_err, std::abs(integral[j] - coarse[j]) / 3.0);
    if (inst.strict_grid && quad_err > 1e-6)
        throw std::invalid_argument(
            "gronwall_verify: grid too coarse for the trapezoid tolerance (error ~" +
            std::to_string(quad_err) + ")");

    GronwallReport report;
    report.quadrature_error = quad_err;
    report.rhs.resize(n);
    for (std::size_t j = 0; j < n; ++j)
        report.rhs[j] = std::pow(inst.t[j] + 1.0, -inst.alpha) + integral[j];

    double c = inst.C;
    if (c <= 0.0) {
        for (std::size_t j = 0; j < n; ++j) c = std::max(c, inst.a[j] / report.rhs[j]);
    }
    report.C_used = c;

    report.hypothesis_margin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j)
        report.hypothesis_margin =
            std::min(report.hypothesis_margin, c * report.rhs[j] - inst.a[j]);
    report.hypothesis_pass =
        report.hypothesis_margin >= -(c * quad_err + 1e-12 * std::max(1.0, scale));

    double denom = std::max(c, inst.a[0]);
    report.K = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        report.K = std::max(report.K, std::pow(inst.t[j] + 1.0, inst.alpha) * inst.a[j] / denom);
    report.conclusion_finite = std::isfinite(report.K);
    return report;
}

namespace {

/// Fritsch-Carlson monotone cubic through non-increasing knot values.
struct MonotoneSpline {
    std::vector<double> x, y, m;

    MonotoneSpline(std::vector<double> xs, std::vector<double> ys)
        : x(std::move(xs)), y(std::move(ys)) {
        const std::size_t n = x.size();
        std::vector<double> d(n - 1);
        for (std::size_t k = 0; k + 1 < n; ++k) d[k] = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
        m.resize(n);
        m[0] = d[0];
        m[n - 1] = d[n - 2];
        for (std::size_t k = 1; k + 1 < n; ++k) m[k] = 0.5 * (d[k - 1] + d[k]);
        for (std::size_t k = 0; k + 1 < n; ++k) {
            if (d[k] == 0.0) {
                m[k] = m[k + 1] = 0.0;
                continue;
            }
            double alpha = m[k] / d[k], beta = m[k + 1] / d[k];
            double norm = alpha * alpha + beta * beta;
            if (norm > 9.0) {
                double tau = 3.0 / std::sqrt(norm);
                m[k] = tau * alpha * d[k];
                m[k + 1] = tau * beta * d[k];
            }
        }
    }

    std::pair<double, double> eval(double at) const {
        std::size_t k = std::upper_bound(x.begin(), x.end(), at) - x.begin();
        k = std::min(std::max<std::size_t>(k, 1), x.size() - 1) - 1;
        double h = x[k + 1] - x[k];
        double s = (at - x[k]) / h;
        double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
        double h10 = s * (1 - s) * (1 - s);
        double h01 = s * s * (3 - 2 * s);
        double h11 = s * s * (s - 1);
        double value = h00 * y[k] + h10 * h * m[k] + h01 * y[k + 1] + h11 * h * m[k + 1];
        double dh00 = 6 * s * s - 6 * s;
        double dh10 = 3 * s * s - 4 * s + 1;
        double dh01 = -dh00;
        double dh11 = 3 * s * s - 2 * s;
        double deriv =
            (dh00 * y[k] + dh01 * y[k + 1]) / h + dh10 * m[k] + dh11 * m[k + 1];
        return {value, deriv};
    }
};

}  // namespace

GronwallInstance random_admissible_instance(double alpha, std::uint64_t seed, int grid_points,
                                            double t_max) {
    RngStream stream(seed, 0x67b0ull, 0);
    int knots = 5 + int(stream.next_unit() * 6.0);
    std::vector<double> kx(knots), ky(knots);
    kx[0] = 0.0;
    kx[knots - 1] = t_max;
    for (int k = 1; k + 1 < knots; ++k) kx[k] = stream.next_unit() * t_max;
    std::sort(kx.begin(), kx.end());
    for (int k = 1; k < knots; ++k)
        if (kx[k] - kx[k - 1] < 1e-3) kx[k] = kx[k - 1] + 1e-3;
    ky[0] = 0.5 + 1.5 * stream.next_unit();
    for (int k = 1; k < knots; ++k) {
        double keep = 0.05 + 0.9 * stream.next_unit();
        ky[k] = ky[k - 1] * keep;
    }
    MonotoneSpline spline(kx, ky);

    GronwallInstance inst;
    inst.alpha = alpha;
    inst.t.resize(grid_points);
    inst.a.resize(grid_points);
    inst.a_prime.resize(grid_points);
    for (int j = 0; j < grid_points; ++j) {
        double t = t_max * double(j) / double(grid_points - 1);
        auto [value, deriv] = spline.eval(t);
        inst.t[j] = t;
        inst.a[j] = value;
        inst.a_prime[j] = std::min(deriv, 0.0);
    }
    // Calibrate the hypothesis constant from the instance, then pad it so
    // the margin is strictly positive.
    GronwallInstance probe = inst;
    probe.C = 0.0;
    inst.C = 1.05 * gronwall_verify(probe).C_used;
    return inst;
}

}  // namespace rcm
