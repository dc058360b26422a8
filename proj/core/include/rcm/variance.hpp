#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rcm/conditional.hpp"
#include "rcm/local_function.hpp"
#include "rcm/semigroup.hpp"

namespace rcm {

// ---------------------------------------------------------------------------
// Wraparound guard
// ---------------------------------------------------------------------------

/// The torus stands in for the infinite lattice only while the diffusive
/// spread stays well inside it: a time t is admissible when
/// 8 * scale * sqrt(2 d w_max t) <= L with w_max the law's 0.999-quantile.
double max_admissible_time(const LatticeSpec& spec, const ConductanceLaw& law,
                           double guard_scale = 1.0);
void check_wraparound(const LatticeSpec& spec, const ConductanceLaw& law, double t,
                      double guard_scale = 1.0);

// ---------------------------------------------------------------------------
// Decay series
// ---------------------------------------------------------------------------

struct SeriesMeta {
    std::string law;
    std::string observable;
    int dim = 0;
    int side = 0;
    int n_env = 0;
    std::uint64_t master_seed = 0;
    std::string inner_mode;  // "exact" | "mc" | "kernel"
    double guard_scale = 1.0;
};

struct DecaySeries {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> std_errors;
    SeriesMeta meta;
};

// ---------------------------------------------------------------------------
// f_t and the main decay experiment
// ---------------------------------------------------------------------------

/// f_t(0, w) = sum_y p_t(0, y) f(y, w), kernel by uniformization. Refuses
/// times beyond the wraparound guard.
double exact_ft(const Environment& env, const LocalFunction& f, double t,
                double guard_scale = 1.0);

/// Everything the decay estimators need from one environment, one semigroup
/// power chain for all times: the value at the origin, the local Dirichlet
/// sum sum_{i=-d..d} w_{0,e_i} (D_i f_t(0))^2, and the generator iterates at
/// the origin for exact time derivatives of f_t(0)^2.
struct FtProfile {
    std::vector<double> ft0;
    std::vector<double> dirichlet;
    std::vector<double> lf0;
    std::vector<double> l2f0;
};
FtProfile exact_ft_profile(const Environment& env, const LocalFunction& f,
                           std::span<const double> times);

struct VarianceDecayOptions {
    int n_env = 64;
    std::uint64_t master_seed = 0;
    enum class Inner { Exact, MonteCarlo } inner = Inner::Exact;
    /// MC inner only: walks per environment; the squared estimator uses the
    /// product of two independent half-ensembles to stay unbiased.
    std::int64_t n_walks = 2000;
    int workers = 1;
    double guard_scale = 1.0;
};

struct VarianceDecayResult {
    DecaySeries series;               // E[f_t^2]
    std::vector<double> du;           // d/dt of the estimated series, via 2 f_t L f_t
    std::vector<double> d2u;          // second derivative via the generator
    std::vector<double> d2u_se;
    std::vector<double> dirichlet;    // E[sum_i w (D_i f_t)^2] = -d/dt E[f_t^2]
    std::vector<double> dirichlet_se;
};

/// Theorem-1 experiment: mean over environment replicas of f_t(0, w)^2.
/// Rejects observables that are not exactly centered.
VarianceDecayResult estimate_variance_decay(const ConductanceLaw& law, const LocalFunction& f,
                                            const LatticeSpec& spec,
                                            std::span<const double> times,
                                            const VarianceDecayOptions& options);

// ---------------------------------------------------------------------------
// Environment ensembles (shared by the identity checks)
// ---------------------------------------------------------------------------

struct EnsembleSpec {
    enum class Mode { MonteCarlo, Enumerate } mode = Mode::MonteCarlo;
    int n_env = 64;
    std::uint64_t master_seed = 0;

    static EnsembleSpec mc(int n_env, std::uint64_t master_seed) {
        return {Mode::MonteCarlo, n_env, master_seed};
    }
    /// Exact expectation over all edge assignments; discrete laws on small
    /// tori only (at most 2^20 environments).
    static EnsembleSpec enumerate_all() { return {Mode::Enumerate, 0, 0}; }
};

/// Calls fn(env, weight) for every ensemble member; weights sum to 1.
void for_each_env(const ConductanceLaw& law, const LatticeSpec& spec,
                  const EnsembleSpec& ensemble,
                  const std::function<void(Environment&, double)>& fn);

// ---------------------------------------------------------------------------
// Proof identities
// ---------------------------------------------------------------------------

/// h_s(x,y,w) = E^{(y)}[L f_s(x,w)] - L E^{(y)}[f_s(x,w)] over all x, plus
/// g_s(y,y,w,i) = E^{(y)}[w_{y,y+e_i} D_i f_s(y,w)] - w_{y,y+e_i} E^{(y)}[D_i f_s(y,w)].
struct HGField {
    std::vector<double> h;  // indexed by x
    std::vector<double> g;  // axis 0..d-1
};
HGField compute_h_g_field(Environment& env, const LocalFunction& f, double s, Site y,
                          const VerticalScheme& scheme);

struct HGResult {
    double h;
    std::vector<double> g;
};
HGResult compute_h_g(Environment& env, const LocalFunction& f, double s, Site x, Site y,
                     const VerticalScheme& scheme);

/// max over x of |P_t h_s(x,y,w) + sum_i D_i P_x(X_t=y) g_s(y,y,w,i)|.
double intermediate_identity_residual(Environment& env, const LocalFunction& f, double s,
                                      double t, Site y, const VerticalScheme& scheme);

/// Duhamel commutation residual |d_y P_t f(0,w) - P_t d_y f(0,w) +
/// int_0^t P_{t-s} h_s(0,y,w) ds|, the sign fixed by h's case table; the
/// integral runs composite Simpson with panel doubling until the change
/// drops below quad_tol.
struct DuhamelReport {
    double residual = 0.0;
    double commutator = 0.0;  // d_y P_t f - P_t d_y f
    double integral = 0.0;
    int panels = 0;
};
DuhamelReport duhamel_residual(Environment& env, const LocalFunction& f, double t, Site y,
                               const VerticalScheme& scheme, double quad_tol = 1e-9,
                               int max_doublings = 12);

/// Key-lemma margins: both left-hand sides against -E[w^2] d_s E[f_s^2], the
/// derivative taken through the exact Dirichlet identity.
struct KeyLemmaReport {
    double lhs_conditional = 0.0;  // sum_i E[(E^{(0)}[w_{0,e_i} D_i f_s])^2]
    double lhs_weighted = 0.0;     // sum_i E[(w_{0,e_i} E^{(0)}[D_i f_s])^2]
    double rhs = 0.0;              // -E[w^2] d_s E[f_s^2]
    double margin_conditional = 0.0;
    double margin_weighted = 0.0;
    double se_conditional = 0.0;
    double se_weighted = 0.0;
    double se_rhs = 0.0;
};
KeyLemmaReport lemmeclef_check(const ConductanceLaw& law, const LocalFunction& f, double s,
                               const LatticeSpec& spec, const EnsembleSpec& ensemble,
                               const VerticalScheme& scheme);

/// -sum_{i=-d..d} E[w_{0,e_i} (D_i f_s(0,w))^2].
double dirichlet_derivative(const ConductanceLaw& law, const LocalFunction& f, double s,
                            const LatticeSpec& spec, const EnsembleSpec& ensemble);

/// Cross-check of the Dirichlet identity against a Richardson-extrapolated
/// centered difference of E[f_s^2].
struct DirichletDerivativeReport {
    double dirichlet = 0.0;  // -sum_i E[w (D_i f_s)^2]
    double fd = 0.0;         // finite-difference d/ds E[f_s^2]
    double se_paired = 0.0;  // std error of the per-environment difference
    double step = 0.0;
    double residual() const { return dirichlet > fd ? dirichlet - fd : fd - dirichlet; }
};
DirichletDerivativeReport dirichlet_derivative_check(const ConductanceLaw& law,
                                                     const LocalFunction& f, double s,
                                                     const LatticeSpec& spec,
                                                     const EnsembleSpec& ensemble,
                                                     double step = 0.25);

// ---------------------------------------------------------------------------
// Fixed walk scheme and iterated generator decays
// ---------------------------------------------------------------------------

/// E_w[(P_t^m (D_dir g)(0, w))^2] with the kernel computed once from the
/// fixed scheme m and only the observable's environment resampled.
DecaySeries fixed_scheme_divergence_decay(const Environment& scheme_env,
                                          const ConductanceLaw& law, const LocalFunction& g,
                                          int dir, std::span<const double> times, int n_env,
                                          std::uint64_t master_seed, double guard_scale = 1.0,
                                          int workers = 1);

/// Decay of f = L^n g. For a deterministic law every centered local
/// observable vanishes identically, so the run degenerates; the kernel-side
/// realization ||P_t L^n delta_0||^2 carries the same decay exponent and is
/// what this returns for deterministic laws (inner mode "kernel").
VarianceDecayResult iterated_generator_decay(const ConductanceLaw& law, const LocalFunction& g,
                                             int n, const LatticeSpec& spec,
                                             std::span<const double> times,
                                             const VarianceDecayOptions& options);

/// Exact E[f_t^2] series (and exact derivatives) by full enumeration of the
/// environment ensemble; discrete laws on small tori.
struct EnumeratedSeries {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> du;
    std::vector<double> d2u;
};
EnumeratedSeries exact_variance_series_enumerated(const ConductanceLaw& law,
                                                  const LocalFunction& f,
                                                  const LatticeSpec& spec,
                                                  std::span<const double> times);

}  // namespace rcm
