#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <vector>

#include "rcm/lattice.hpp"
#include "rcm/law.hpp"

namespace rcm {

/// One assignment of conductances to the torus edges. Also serves as a fixed
/// walk scheme when the randomness lives elsewhere.
///
/// Environments are value types; the heavy per-shape topology tables are
/// shared. Conductance entries are >= 1 for every supported law.
class Environment {
public:
    Environment(const LatticeSpec& spec, std::vector<double> w,
                const ConductanceLaw& law, std::uint64_t seed);

    const LatticeSpec& spec() const { return topo_->spec(); }
    const Topology& topology() const { return *topo_; }
    const ConductanceLaw& law() const { return law_; }
    std::uint64_t seed() const { return seed_; }

    const std::vector<double>& conductances() const { return w_; }
    double edge(EdgeId e) const { return w_[e]; }
    void set_edge(EdgeId e, double v) { w_[e] = v; }

    /// Conductance on the edge incident to s in signed direction dir.
    double conductance(Site s, int dir) const {
        return w_[topo_->incident(s, dir_to_slot(dir, spec().dim()))];
    }
    /// Total exit rate W(x) = sum of incident conductances.
    double exit_rate(Site x) const;
    double max_exit_rate() const;

    void save_csv(const std::filesystem::path& file) const;
    void save_binary(const std::filesystem::path& file) const;
    static Environment load_csv(const std::filesystem::path& file, const LatticeSpec& spec,
                                const ConductanceLaw& law, std::uint64_t seed);
    static Environment load_binary(const std::filesystem::path& file, const LatticeSpec& spec,
                                   const ConductanceLaw& law, std::uint64_t seed);

private:
    std::shared_ptr<const Topology> topo_;
    std::vector<double> w_;
    ConductanceLaw law_;
    std::uint64_t seed_;
};

/// Draw an i.i.d. environment. Edge e of replica r reads the counter stream
/// (master_seed, r, e), so the result is independent of iteration order.
Environment sample_environment(const ConductanceLaw& law, const LatticeSpec& spec,
                               std::uint64_t master_seed, std::uint64_t replica = 0);

/// (theta_z w)_{x,y} = w_{x+z,y+z} with torus wraparound.
Environment translate(const Environment& env, const Coord& z);

}  // namespace rcm
