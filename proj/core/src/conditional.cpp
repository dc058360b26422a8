#include "rcm/conditional.hpp"

#include <cmath>
#include <stdexcept>

#include "rcm/rng.hpp"

namespace rcm {

std::vector<std::pair<double, double>> gauss_legendre_unit(int order) {
    if (order < 1 || order > 64) throw std::invalid_argument("quadrature order out of range");
    std::vector<std::pair<double, double>> nodes(order);
    // Newton iteration on P_n over [-1, 1], then map to (0, 1).
    for (int i = 0; i < order; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < order; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = order * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        nodes[i] = {0.5 * (x + 1.0), 0.5 * w};
    }
    return nodes;
}

std::vector<std::pair<double, double>> law_nodes(const ConductanceLaw& law,
                                                 const VerticalScheme& scheme) {
    switch (scheme.mode) {
        case VerticalScheme::Mode::ExactEnumeration: {
            if (law.kind() == LawKind::Dirac) return {{1.0, 1.0}};
            if (law.kind() == LawKind::TwoPoint)
                return {{1.0, 1.0 - law.prob_hi()}, {law.hi(), law.prob_hi()}};
            throw std::invalid_argument(
                "exact enumeration requires a Dirac or two-point conductance law");
        }
        case VerticalScheme::Mode::Quadrature: {
            if (law.is_discrete())
                return law_nodes(law, VerticalScheme::exact());
            // Nodes in quantile space handle any continuous law.
            auto gl = gauss_legendre_unit(scheme.quad_order);
            std::vector<std::pair<double, double>> nodes;
            nodes.reserve(gl.size());
            for (auto [u, w] : gl) nodes.emplace_back(law.quantile(u), w);
            return nodes;
        }
        case VerticalScheme::Mode::Resample: {
            RngStream stream(scheme.resample_seed, 0x5e5aull, 0);
            std::vector<std::pair<double, double>> nodes;
            nodes.reserve(scheme.n_resample);
            double w = 1.0 / scheme.n_resample;
            for (int k = 0; k < scheme.n_resample; ++k)
                nodes.emplace_back(law.quantile(stream.next_unit()), w);
            return nodes;
        }
    }
    throw std::logic_error("unreachable");
}

void for_each_conditional_assignment(Environment& env, Site y, const VerticalScheme& scheme,
                                     const std::function<void(double)>& visit) {
    const LatticeSpec& spec = env.spec();
    const int d = spec.dim();
    auto nodes = law_nodes(env.law(), scheme);
    const int m = int(nodes.size());

    std::vector<EdgeId> edges(d);
    std::vector<double> saved(d);
    for (int axis = 0; axis < d; ++axis) {
        edges[axis] = spec.edge_index(y, axis);
        saved[axis] = env.edge(edges[axis]);
    }

    std::vector<int> idx(d, 0);
    for (;;) {
        double weight = 1.0;
        for (int axis = 0; axis < d; ++axis) {
            env.set_edge(edges[axis], nodes[idx[axis]].first);
            weight *= nodes[idx[axis]].second;
        }
        visit(weight);
        int axis = 0;
        while (axis < d && ++idx[axis] == m) {
            idx[axis] = 0;
            ++axis;
        }
        if (axis == d) break;
    }
    for (int axis = 0; axis < d; ++axis) env.set_edge(edges[axis], saved[axis]);
}

double conditional_mean(const EnvFunctional& F, Environment& env, Site y,
                        const VerticalScheme& scheme) {
    double acc = 0.0;
    for_each_conditional_assignment(env, y, scheme, [&](double w) { acc += w * F(env); });
    return acc;
}

double vertical_derivative(const EnvFunctional& F, Environment& env, Site y,
                           const VerticalScheme& scheme) {
    double here = F(env);
    return here - conditional_mean(F, env, y, scheme);
}

}  // namespace rcm
