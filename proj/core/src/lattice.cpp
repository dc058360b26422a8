#include "rcm/lattice.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace rcm {

LatticeSpec::LatticeSpec(int dim, int side) : d_(dim), side_(side) {
    if (dim < 1 || dim > kMaxDim)
        throw std::invalid_argument("lattice dimension must be in [1, " +
                                    std::to_string(kMaxDim) + "]");
    if (side < 3) throw std::invalid_argument("torus side must be >= 3");
    n_sites_ = 1;
    for (int i = 0; i < dim; ++i) {
        if (n_sites_ > (int64_t(1) << 40) / side)
            throw std::invalid_argument("torus too large");
        n_sites_ *= side;
    }
    n_edges_ = n_sites_ * dim;
}

Coord LatticeSpec::coords(Site s) const {
    Coord c{};
    for (int i = 0; i < d_; ++i) {
        c[i] = int(s % side_);
        s /= side_;
    }
    return c;
}

Site LatticeSpec::site_of(const Coord& c) const {
    Site s = 0;
    for (int i = d_ - 1; i >= 0; --i) {
        int x = c[i] % side_;
        if (x < 0) x += side_;
        s = s * side_ + x;
    }
    return s;
}

Site LatticeSpec::neighbor(Site s, int dir) const {
    int axis = dir > 0 ? dir - 1 : -dir - 1;
    int step = dir > 0 ? 1 : -1;
    Coord c = coords(s);
    c[axis] += step;
    return site_of(c);
}

Site LatticeSpec::translate_site(Site s, const Coord& z) const {
    Coord c = coords(s);
    for (int i = 0; i < d_; ++i) c[i] += z[i];
    return site_of(c);
}

EdgeId LatticeSpec::incident_edge(Site s, int dir) const {
    if (dir > 0) return edge_index(s, dir - 1);
    return edge_index(neighbor(s, dir), -dir - 1);
}

Coord unit_offset(int dir) {
    Coord z{};
    if (dir > 0)
        z[dir - 1] = 1;
    else
        z[-dir - 1] = -1;
    return z;
}

Topology::Topology(const LatticeSpec& spec) : spec_(spec), fanout_(2 * spec.dim()) {
    const auto n = spec.n_sites();
    nbr_.resize(n * fanout_);
    edge_.resize(n * fanout_);
    for (Site s = 0; s < n; ++s) {
        for (int slot = 0; slot < fanout_; ++slot) {
            int dir = slot_to_dir(slot, spec.dim());
            nbr_[s * fanout_ + slot] = spec.neighbor(s, dir);
            edge_[s * fanout_ + slot] = spec.incident_edge(s, dir);
        }
    }
}

std::shared_ptr<const Topology> topology_for(const LatticeSpec& spec) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::weak_ptr<const Topology>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(spec.dim(), spec.side());
    if (auto hit = cache[key].lock()) return hit;
    auto fresh = std::make_shared<const Topology>(spec);
    cache[key] = fresh;
    return fresh;
}

}  // namespace rcm
