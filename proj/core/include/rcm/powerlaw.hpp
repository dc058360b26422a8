#pragma once

#include <limits>
#include <span>
#include <vector>

#include "rcm/variance.hpp"

namespace rcm {

struct PowerLawFit {
    double exponent = 0.0;
    double amplitude = 0.0;
    double r_squared = 0.0;
    double window_min = 0.0;
    double window_max = 0.0;
    int n_points = 0;
    std::vector<double> residuals;  // log-space, per fitted point
};

struct FitWindow {
    double t_min = 4.0;  // default drops the pre-asymptotic transient
    double t_max = std::numeric_limits<double>::infinity();
};

/// Weighted least squares of log(value) on log(t); weights come from the
/// delta-method log-errors sigma/value. Series with any zero std error fall
/// back to an unweighted fit. Requires at least 4 positive points in the
/// window.
PowerLawFit fit_power_law(std::span<const double> times, std::span<const double> values,
                          std::span<const double> std_errors, FitWindow window = {});
PowerLawFit fit_power_law(const DecaySeries& series, FitWindow window = {});

}  // namespace rcm
