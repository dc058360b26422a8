#pragma once

#include <span>
#include <vector>

#include "rcm/environment.hpp"

namespace rcm {

/// (Lv)(x) = sum_{|z|=1} w_{x,x+z} (v(x+z) - v(x)). Mass conserving and
/// self-adjoint for the counting measure.
void apply_generator(const Environment& env, std::span<const double> v, std::span<double> out);
std::vector<double> apply_generator(const Environment& env, const std::vector<double>& v);

/// <a, b> in l2 over sites.
double dot(std::span<const double> a, std::span<const double> b);

/// Compensated sum of all entries.
double total_mass(std::span<const double> v);

}  // namespace rcm
