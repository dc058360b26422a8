#include "rcm/local_function.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace rcm {

namespace {

Coord add(const Coord& a, const Coord& b) {
    Coord c{};
    for (int i = 0; i < kMaxDim; ++i) c[i] = a[i] + b[i];
    return c;
}

}  // namespace

LocalFunction::LocalFunction(std::string id, int dim, std::vector<EdgeOffset> support,
                             std::function<double(std::span<const double>)> raw, double mean,
                             bool centered)
    : id_(std::move(id)),
      dim_(dim),
      support_(std::move(support)),
      raw_(std::move(raw)),
      mean_(mean),
      centered_(centered) {
    std::set<Coord> sites;
    int lo = 0, hi = 0;
    for (const auto& off : support_) {
        if (off.axis < 0 || off.axis >= dim_)
            throw std::invalid_argument("local function: support axis out of range");
        Coord other = off.z;
        other[off.axis] += 1;
        sites.insert(off.z);
        sites.insert(other);
        for (int i = 0; i < dim_; ++i) {
            lo = std::min({lo, off.z[i], other[i]});
            hi = std::max({hi, off.z[i], other[i]});
        }
    }
    supp_size_ = int(sites.size());
    diameter_ = hi - lo;
}

double LocalFunction::operator()(const Environment& env, Site y) const {
    return eval_local(*this, env, y);
}

double eval_local(const LocalFunction& f, const Environment& env, Site y) {
    const LatticeSpec& spec = env.spec();
    if (f.dim() != spec.dim())
        throw std::invalid_argument("local function dimension does not match lattice");
    if (f.diameter() >= spec.side())
        throw std::invalid_argument("local function support too large for torus side " +
                                    std::to_string(spec.side()));
    double buf[32];
    std::vector<double> heap;
    const auto& support = f.support();
    double* vals = buf;
    if (support.size() > 32) {
        heap.resize(support.size());
        vals = heap.data();
    }
    for (std::size_t k = 0; k < support.size(); ++k) {
        Site at = spec.translate_site(y, support[k].z);
        vals[k] = env.edge(spec.edge_index(at, support[k].axis));
    }
    return f.raw_value(std::span<const double>(vals, support.size())) - f.mean();
}

namespace {

/// Merge support lists and build gather maps so composites can evaluate the
/// inner function on shifted copies of one flat value buffer.
struct SupportMerge {
    std::vector<EdgeOffset> merged;
    std::map<EdgeOffset, int> slot;

    int intern(const EdgeOffset& off) {
        auto it = slot.find(off);
        if (it != slot.end()) return it->second;
        int s = int(merged.size());
        merged.push_back(off);
        slot.emplace(off, s);
        return s;
    }

    std::vector<int> shifted(const std::vector<EdgeOffset>& support, const Coord& shift) {
        std::vector<int> map;
        map.reserve(support.size());
        for (const auto& off : support) map.push_back(intern({add(off.z, shift), off.axis}));
        return map;
    }

private:
    static Coord add(const Coord& a, const Coord& b) {
        Coord c{};
        for (int i = 0; i < kMaxDim; ++i) c[i] = a[i] + b[i];
        return c;
    }
};

double gather_eval(const LocalFunction& g, std::span<const double> all,
                   const std::vector<int>& map, std::vector<double>& scratch) {
    scratch.resize(map.size());
    for (std::size_t k = 0; k < map.size(); ++k) scratch[k] = all[map[k]];
    return g.raw_value(scratch) - g.mean();
}

}  // namespace

LocalFunction apply_generator_local(const LocalFunction& g) {
    const int d = g.dim();
    SupportMerge merge;
    // Conductances on the 2d edges at the origin.
    std::vector<int> origin_edge(2 * d);
    for (int slot = 0; slot < 2 * d; ++slot) {
        int dir = slot_to_dir(slot, d);
        EdgeOffset off;
        if (dir > 0) {
            off = {Coord{}, dir - 1};
        } else {
            off = {unit_offset(dir), -dir - 1};
        }
        origin_edge[slot] = merge.intern(off);
    }
    auto base_map = merge.shifted(g.support(), Coord{});
    std::vector<std::vector<int>> shift_map(2 * d);
    for (int slot = 0; slot < 2 * d; ++slot)
        shift_map[slot] = merge.shifted(g.support(), unit_offset(slot_to_dir(slot, d)));

    auto inner = g;  // copy keeps the closure self-contained
    auto raw = [inner, d, origin_edge, base_map, shift_map](std::span<const double> vals) {
        std::vector<double> scratch;
        double at_origin = gather_eval(inner, vals, base_map, scratch);
        double total = 0.0;
        for (int slot = 0; slot < 2 * d; ++slot) {
            double w = vals[origin_edge[slot]];
            total += w * (gather_eval(inner, vals, shift_map[slot], scratch) - at_origin);
        }
        return total;
    };
    return LocalFunction("L(" + g.id() + ")", d, merge.merged, raw, 0.0, true);
}

LocalFunction difference_local(const LocalFunction& g, int dir) {
    const int d = g.dim();
    SupportMerge merge;
    auto base_map = merge.shifted(g.support(), Coord{});
    auto shift_map = merge.shifted(g.support(), unit_offset(dir));
    auto inner = g;
    auto raw = [inner, base_map, shift_map](std::span<const double> vals) {
        std::vector<double> scratch;
        return gather_eval(inner, vals, shift_map, scratch) -
               gather_eval(inner, vals, base_map, scratch);
    };
    return LocalFunction("D" + std::to_string(dir) + "(" + g.id() + ")", d, merge.merged, raw,
                         0.0, true);
}

LocalFunction scale_local(const LocalFunction& g, double c) {
    auto inner = g;
    auto raw = [inner, c](std::span<const double> vals) {
        return c * (inner.raw_value(vals) - inner.mean());
    };
    return LocalFunction(std::to_string(c) + "*" + g.id(), g.dim(), g.support(), raw, 0.0,
                         g.centered());
}

LocalFunction make_observable(const std::string& id, int dim, const ConductanceLaw& law) {
    if (id == "F1") {
        std::vector<EdgeOffset> support{{Coord{}, 0}};
        return LocalFunction("F1", dim, support,
                             [](std::span<const double> v) { return v[0]; }, law.mean());
    }
    if (id == "F2") {
        std::vector<EdgeOffset> support;
        for (int slot = 0; slot < 2 * dim; ++slot) {
            int dir = slot_to_dir(slot, dim);
            if (dir > 0)
                support.push_back({Coord{}, dir - 1});
            else
                support.push_back({unit_offset(dir), -dir - 1});
        }
        return LocalFunction("F2", dim, support,
                             [](std::span<const double> v) {
                                 double s = 0.0;
                                 for (double x : v) s += x;
                                 return s;
                             },
                             2.0 * dim * law.mean());
    }
    if (id == "F3") {
        auto f3 = apply_generator_local(make_observable("F1", dim, law));
        return LocalFunction("F3", dim, f3.support(),
                             [f3](std::span<const double> v) { return f3.raw_value(v); }, 0.0);
    }
    if (id == "F4") {
        auto f4 = apply_generator_local(make_observable("F3", dim, law));
        return LocalFunction("F4", dim, f4.support(),
                             [f4](std::span<const double> v) { return f4.raw_value(v); }, 0.0);
    }
    if (id == "FD") {
        auto fd = difference_local(make_observable("F1", dim, law), 1);
        return LocalFunction("FD", dim, fd.support(),
                             [fd](std::span<const double> v) { return fd.raw_value(v); }, 0.0);
    }
    throw std::invalid_argument("unknown observable '" + id + "' (expected F1|F2|F3|F4|FD)");
}

}  // namespace rcm
