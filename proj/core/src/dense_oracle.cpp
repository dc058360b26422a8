#include "rcm/dense_oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace rcm {

DenseExpm::DenseExpm(const Environment& env) : n_(env.spec().n_sites()) {
    if (n_ > kMaxSites)
        throw std::invalid_argument("dense oracle limited to " + std::to_string(kMaxSites) +
                                    " sites");
    const Topology& topo = env.topology();
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n_, n_);
    for (Site x = 0; x < n_; ++x) {
        for (int k = 0; k < topo.fanout(); ++k) {
            double w = env.edge(topo.incident(x, k));
            L(x, topo.neighbor(x, k)) += w;
            L(x, x) -= w;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(L);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("dense oracle: eigendecomposition failed");
    eigenvalues_.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n_);
    eigenvectors_.assign(solver.eigenvectors().data(), solver.eigenvectors().data() + n_ * n_);
}

std::vector<double> DenseExpm::apply(double t, const std::vector<double>& v) const {
    if (Site(v.size()) != n_) throw std::invalid_argument("dense oracle: length mismatch");
    Eigen::Map<const Eigen::MatrixXd> V(eigenvectors_.data(), n_, n_);
    Eigen::Map<const Eigen::VectorXd> x(v.data(), n_);
    Eigen::VectorXd coeffs = V.transpose() * x;
    for (Site i = 0; i < n_; ++i) coeffs[i] *= std::exp(t * eigenvalues_[i]);
    Eigen::VectorXd y = V * coeffs;
    return std::vector<double>(y.data(), y.data() + n_);
}

std::vector<double> DenseExpm::row(double t, Site x) const {
    std::vector<double> delta(n_, 0.0);
    delta[x] = 1.0;
    return apply(t, delta);  // symmetric, so row equals column
}

}  // namespace rcm
