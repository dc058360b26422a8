#pragma once

#include <vector>

#include "rcm/environment.hpp"

namespace rcm {

/// Dense exp(tL) through a full eigendecomposition. Cross-check path only;
/// refuses tori above 216 sites.
class DenseExpm {
public:
    explicit DenseExpm(const Environment& env);

    std::vector<double> apply(double t, const std::vector<double>& v) const;
    /// Row x of exp(tL) as a distribution: p_t(x, .).
    std::vector<double> row(double t, Site x) const;
    const std::vector<double>& eigenvalues() const { return eigenvalues_; }

    static constexpr Site kMaxSites = 216;

private:
    Site n_;
    std::vector<double> eigenvalues_;       // ascending
    std::vector<double> eigenvectors_;      // column-major n x n
};

}  // namespace rcm
