#include "rcm/powerlaw.hpp"

#include <cmath>
#include <stdexcept>

namespace rcm {

PowerLawFit fit_power_law(std::span<const double> times, std::span<const double> values,
                          std::span<const double> std_errors, FitWindow window) {
    std::vector<double> x, y, w;
    bool uniform_weights = std_errors.empty();
    for (std::size_t k = 0; k < times.size(); ++k) {
        double t = times[k];
        if (t < window.t_min || t > window.t_max) continue;
        if (!(values[k] > 0.0))
            throw std::invalid_argument("fit_power_law: non-positive value inside window");
        x.push_back(std::log(t));
        y.push_back(std::log(values[k]));
        if (!uniform_weights) {
            double sigma_log = std_errors[k] / values[k];
            if (sigma_log <= 0.0) uniform_weights = true;
            w.push_back(sigma_log > 0.0 ? 1.0 / (sigma_log * sigma_log) : 1.0);
        }
    }
    if (x.size() < 4)
        throw std::invalid_argument("fit_power_law: need at least 4 points in the window");
    if (uniform_weights) w.assign(x.size(), 1.0);

    double sw = 0.0, sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        sx += w[i] * x[i];
        sy += w[i] * y[i];
    }
    double mx = sx / sw, my = sy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += w[i] * (x[i] - mx) * (x[i] - mx);
        sxy += w[i] * (x[i] - mx) * (y[i] - my);
    }
    double slope = sxy / sxx;
    double intercept = my - slope * mx;

    PowerLawFit fit;
    fit.exponent = slope;
    fit.amplitude = std::exp(intercept);
    fit.n_points = int(x.size());
    fit.window_min = std::exp(x.front());
    fit.window_max = std::exp(x.back());
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double r = y[i] - (intercept + slope * x[i]);
        fit.residuals.push_back(r);
        ss_res += w[i] * r * r;
        ss_tot += w[i] * (y[i] - my) * (y[i] - my);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

PowerLawFit fit_power_law(const DecaySeries& series, FitWindow window) {
    return fit_power_law(series.times, series.values, series.std_errors, window);
}

}  // namespace rcm
