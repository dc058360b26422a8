#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rcm/environment.hpp"
#include "rcm/lattice.hpp"

namespace rcm {

/// Edge (z, z + e_{axis+1}) relative to the evaluation site.
struct EdgeOffset {
    Coord z{};
    int axis = 0;
    friend bool operator<(const EdgeOffset& a, const EdgeOffset& b) {
        if (a.z != b.z) return a.z < b.z;
        return a.axis < b.axis;
    }
    friend bool operator==(const EdgeOffset& a, const EdgeOffset& b) {
        return a.z == b.z && a.axis == b.axis;
    }
};

/// Translation-invariant local observable. The value at site y is, by
/// construction, the value at the origin of the environment re-centered at y:
/// f(y, w) = f(0, theta_y w). Evaluation reads only the conductances on the
/// declared support offsets; the stored mean is subtracted so that shipped
/// observables are exactly centered under their law.
class LocalFunction {
public:
    LocalFunction(std::string id, int dim, std::vector<EdgeOffset> support,
                  std::function<double(std::span<const double>)> raw, double mean,
                  bool centered = true);

    double operator()(const Environment& env, Site y) const;

    const std::string& id() const { return id_; }
    int dim() const { return dim_; }
    const std::vector<EdgeOffset>& support() const { return support_; }
    /// Number of distinct lattice sites touched by the support.
    int supp_size() const { return supp_size_; }
    double mean() const { return mean_; }
    bool centered() const { return centered_; }
    /// Largest coordinate extent of the support; evaluation requires the
    /// torus side to exceed this.
    int diameter() const { return diameter_; }

    double raw_value(std::span<const double> values) const { return raw_(values); }

private:
    std::string id_;
    int dim_;
    std::vector<EdgeOffset> support_;
    std::function<double(std::span<const double>)> raw_;
    double mean_;
    bool centered_;
    int supp_size_;
    int diameter_;
};

/// f(y, env); checks that the support fits on the torus.
double eval_local(const LocalFunction& f, const Environment& env, Site y);

/// (Lg)(0, w) = sum_{|z|=1} w_{0,z} (g(z, w) - g(0, w)) as a local function.
/// Exactly centered for any product law.
LocalFunction apply_generator_local(const LocalFunction& g);

/// (D_i g)(0, w) = g(e_i, w) - g(0, w); dir is signed.
LocalFunction difference_local(const LocalFunction& g, int dir);

LocalFunction scale_local(const LocalFunction& g, double c);

/// Canonical observables: F1 single centered edge, F2 centered star sum,
/// F3 = L F1, F4 = L^2 F1, FD = D_1 F1.
LocalFunction make_observable(const std::string& id, int dim, const ConductanceLaw& law);

}  // namespace rcm
