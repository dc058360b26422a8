#include "rcm/series_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rcm {

std::vector<double> geometric_times(double t0, double t_max) {
    if (!(t0 > 0.0) || !(t_max >= t0))
        throw std::invalid_argument("geometric_times: need 0 < t0 <= t_max");
    std::vector<double> times;
    for (double t = t0; t <= t_max * (1.0 + 1e-12); t *= 2.0) times.push_back(t);
    if (times.back() < t_max * (1.0 - 1e-12)) times.push_back(t_max);
    return times;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_series_csv(const std::filesystem::path& file, const DecaySeries& series) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot open " + file.string());
    out << "t,value,std_error\n";
    for (std::size_t k = 0; k < series.times.size(); ++k)
        out << format_double(series.times[k]) << ',' << format_double(series.values[k]) << ','
            << format_double(series.std_errors[k]) << '\n';
}

DecaySeries read_series_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    DecaySeries series;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::getline(row, cell, ',');
        series.times.push_back(std::stod(cell));
        std::getline(row, cell, ',');
        series.values.push_back(std::stod(cell));
        std::getline(row, cell, ',');
        series.std_errors.push_back(std::stod(cell));
    }
    return series;
}

void write_series_json(const std::filesystem::path& file, const DecaySeries& series) {
    nlohmann::json j;
    j["law"] = series.meta.law;
    j["observable"] = series.meta.observable;
    j["dim"] = series.meta.dim;
    j["side"] = series.meta.side;
    j["n_env"] = series.meta.n_env;
    j["master_seed"] = series.meta.master_seed;
    j["inner_mode"] = series.meta.inner_mode;
    j["guard_scale"] = series.meta.guard_scale;
    j["n_times"] = series.times.size();
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot open " + file.string());
    out << j.dump(2) << '\n';
}

void write_fit_json(const std::filesystem::path& file, const PowerLawFit& fit) {
    nlohmann::json j;
    j["exponent"] = fit.exponent;
    j["amplitude"] = fit.amplitude;
    j["r_squared"] = fit.r_squared;
    j["window"] = {{"t_min", fit.window_min}, {"t_max", fit.window_max}};
    j["n_points"] = fit.n_points;
    j["residuals"] = fit.residuals;
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot open " + file.string());
    out << j.dump(2) << '\n';
}

void write_columns_csv(const std::filesystem::path& file, const std::string& header,
                       const std::vector<std::vector<double>>& columns) {
    if (columns.empty()) throw std::invalid_argument("write_columns_csv: no columns");
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot open " + file.string());
    out << header << '\n';
    for (std::size_t row = 0; row < columns.front().size(); ++row) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) out << ',';
            out << format_double(columns[c][row]);
        }
        out << '\n';
    }
}

}  // namespace rcm
