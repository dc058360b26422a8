#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

namespace rcm {

/// Maximum spatial dimension the index math supports.
inline constexpr int kMaxDim = 4;

using Site = std::int64_t;
using EdgeId = std::int64_t;
using Coord = std::array<int, kMaxDim>;

/// Geometry of the discrete torus (Z/L)^d.
///
/// Sites are indexed little-endian in base L. Every site owns the d edges
/// leaving it in the positive coordinate directions, so edge indices are
/// site * d + axis and there are d * L^d edges in total. Directions are
/// signed: +1..+d for +e_1..+e_d, -1..-d for the opposites.
class LatticeSpec {
public:
    LatticeSpec(int dim, int side);

    int dim() const { return d_; }
    int side() const { return side_; }
    std::int64_t n_sites() const { return n_sites_; }
    std::int64_t n_edges() const { return n_edges_; }

    Coord coords(Site s) const;
    Site site_of(const Coord& c) const;  // coordinates wrap mod L
    Site neighbor(Site s, int dir) const;
    Site translate_site(Site s, const Coord& z) const;

    /// Edge (x, x + e_{axis+1}) owned by x; axis in [0, d).
    EdgeId edge_index(Site owner, int axis) const { return owner * d_ + axis; }
    /// Edge incident to s in signed direction dir (negative directions are
    /// owned by the neighbor).
    EdgeId incident_edge(Site s, int dir) const;

    friend bool operator==(const LatticeSpec& a, const LatticeSpec& b) {
        return a.d_ == b.d_ && a.side_ == b.side_;
    }

private:
    int d_;
    int side_;
    std::int64_t n_sites_;
    std::int64_t n_edges_;
};

/// Precomputed neighbor and incident-edge tables for one lattice shape.
/// Heavy (O(d L^d)); shared between environments of the same shape.
class Topology {
public:
    explicit Topology(const LatticeSpec& spec);

    const LatticeSpec& spec() const { return spec_; }
    int fanout() const { return 2 * spec_.dim(); }

    /// Neighbor of s in slot k; slots 0..d-1 are +e_1..+e_d, d..2d-1 the
    /// negatives.
    Site neighbor(Site s, int slot) const { return nbr_[s * fanout_ + slot]; }
    EdgeId incident(Site s, int slot) const { return edge_[s * fanout_ + slot]; }

    const Site* neighbor_row(Site s) const { return nbr_.data() + s * fanout_; }
    const EdgeId* incident_row(Site s) const { return edge_.data() + s * fanout_; }

private:
    LatticeSpec spec_;
    int fanout_;
    std::vector<Site> nbr_;
    std::vector<EdgeId> edge_;
};

/// Shared per-shape topology cache (thread-safe).
std::shared_ptr<const Topology> topology_for(const LatticeSpec& spec);

/// Signed direction for slot k: k < d -> k+1, else -(k-d+1).
inline int slot_to_dir(int slot, int dim) {
    return slot < dim ? slot + 1 : -(slot - dim + 1);
}
inline int dir_to_slot(int dir, int dim) {
    return dir > 0 ? dir - 1 : dim + (-dir) - 1;
}

/// Unit coordinate offset for a signed direction.
Coord unit_offset(int dir);

}  // namespace rcm
