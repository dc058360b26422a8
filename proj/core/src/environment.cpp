#include "rcm/environment.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "rcm/rng.hpp"

namespace rcm {

Environment::Environment(const LatticeSpec& spec, std::vector<double> w,
                         const ConductanceLaw& law, std::uint64_t seed)
    : topo_(topology_for(spec)), w_(std::move(w)), law_(law), seed_(seed) {
    if (std::int64_t(w_.size()) != spec.n_edges())
        throw std::invalid_argument("environment: expected one conductance per edge");
}

double Environment::exit_rate(Site x) const {
    const EdgeId* row = topo_->incident_row(x);
    double total = 0.0;
    for (int k = 0; k < topo_->fanout(); ++k) total += w_[row[k]];
    return total;
}

double Environment::max_exit_rate() const {
    double best = 0.0;
    const Site n = spec().n_sites();
    for (Site x = 0; x < n; ++x) best = std::max(best, exit_rate(x));
    return best;
}

Environment sample_environment(const ConductanceLaw& law, const LatticeSpec& spec,
                               std::uint64_t master_seed, std::uint64_t replica) {
    std::vector<double> w(spec.n_edges());
    for (EdgeId e = 0; e < spec.n_edges(); ++e) {
        double u = u64_to_unit(counter_hash(master_seed, replica, std::uint64_t(e), 0));
        w[e] = law.quantile(u);
    }
    return Environment(spec, std::move(w), law, master_seed ^ mix64(replica));
}

Environment translate(const Environment& env, const Coord& z) {
    const LatticeSpec& spec = env.spec();
    std::vector<double> w(spec.n_edges());
    for (Site x = 0; x < spec.n_sites(); ++x) {
        Site shifted = spec.translate_site(x, z);
        for (int axis = 0; axis < spec.dim(); ++axis)
            w[spec.edge_index(x, axis)] = env.edge(spec.edge_index(shifted, axis));
    }
    return Environment(spec, std::move(w), env.law(), env.seed());
}

void Environment::save_csv(const std::filesystem::path& file) const {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot open " + file.string());
    out << "edge_index,value\n";
    char buf[64];
    for (std::size_t e = 0; e < w_.size(); ++e) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", e, w_[e]);
        out << buf;
    }
}

void Environment::save_binary(const std::filesystem::path& file) const {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + file.string());
    std::uint64_t n = w_.size();
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(w_.data()), std::streamsize(n * sizeof(double)));
}

Environment Environment::load_csv(const std::filesystem::path& file, const LatticeSpec& spec,
                                  const ConductanceLaw& law, std::uint64_t seed) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> w(spec.n_edges());
    while (std::getline(in, line)) {
        std::size_t comma = line.find(',');
        if (comma == std::string::npos) continue;
        std::size_t e = std::stoull(line.substr(0, comma));
        if (e >= w.size()) throw std::runtime_error("edge index out of range in " + file.string());
        w[e] = std::stod(line.substr(comma + 1));
    }
    return Environment(spec, std::move(w), law, seed);
}

Environment Environment::load_binary(const std::filesystem::path& file, const LatticeSpec& spec,
                                     const ConductanceLaw& law, std::uint64_t seed) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    if (std::int64_t(n) != spec.n_edges())
        throw std::runtime_error("edge count mismatch in " + file.string());
    std::vector<double> w(n);
    in.read(reinterpret_cast<char*>(w.data()), std::streamsize(n * sizeof(double)));
    return Environment(spec, std::move(w), law, seed);
}

}  // namespace rcm
