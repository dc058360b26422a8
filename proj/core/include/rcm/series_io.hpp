#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rcm/powerlaw.hpp"
#include "rcm/variance.hpp"

namespace rcm {

/// Geometric grid t_0 * 2^k up to t_max, appending t_max itself when the
/// doubling misses it.
std::vector<double> geometric_times(double t0, double t_max);

/// CSV persistence: "t,value,std_error" rows printed with %.17g so reruns
/// are byte-identical.
void write_series_csv(const std::filesystem::path& file, const DecaySeries& series);
DecaySeries read_series_csv(const std::filesystem::path& file);

/// JSON sidecar with the full run metadata.
void write_series_json(const std::filesystem::path& file, const DecaySeries& series);

void write_fit_json(const std::filesystem::path& file, const PowerLawFit& fit);

/// Extra named columns (same time grid) as CSV, e.g. dirichlet sums.
void write_columns_csv(const std::filesystem::path& file, const std::string& header,
                       const std::vector<std::vector<double>>& columns);

std::string format_double(double v);

}  // namespace rcm
