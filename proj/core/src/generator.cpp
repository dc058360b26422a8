#include "rcm/generator.hpp"

#include <stdexcept>

namespace rcm {

void apply_generator(const Environment& env, std::span<const double> v, std::span<double> out) {
    const Topology& topo = env.topology();
    const Site n = env.spec().n_sites();
    if (std::int64_t(v.size()) != n || std::int64_t(out.size()) != n)
        throw std::invalid_argument("apply_generator: vector length must equal site count");
    const int fanout = topo.fanout();
    const double* w = env.conductances().data();
    for (Site x = 0; x < n; ++x) {
        const Site* nbr = topo.neighbor_row(x);
        const EdgeId* edge = topo.incident_row(x);
        const double vx = v[x];
        double acc = 0.0;
        for (int k = 0; k < fanout; ++k) acc += w[edge[k]] * (v[nbr[k]] - vx);
        out[x] = acc;
    }
}

std::vector<double> apply_generator(const Environment& env, const std::vector<double>& v) {
    std::vector<double> out(v.size());
    apply_generator(env, v, out);
    return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double total_mass(std::span<const double> v) {
    // Kahan compensation: conservation checks compare against 1e-12.
    double s = 0.0, c = 0.0;
    for (double x : v) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

}  // namespace rcm
