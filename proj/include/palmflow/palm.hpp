#pragma once

#include "palmflow/base_system.hpp"
#include "palmflow/point_measure.hpp"
#include "palmflow/stats.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace palmflow {

// One verified identity: both sides with uncertainties and a pinned verdict.
struct IdentityReport {
    std::string name;
    double lhs = 0.0;
    double lhs_se = 0.0;
    double rhs = 0.0;
    double rhs_se = 0.0;
    double discrepancy = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::size_t lhs_samples = 0;
    std::size_t rhs_samples = 0;
    std::size_t censored = 0;
    std::vector<std::string> warnings;
};

// Pass/fail thresholds are data, never baked into the comparison logic. When
// `abs` is zero the threshold is se_mult * combined stderr + bias.
struct Tolerance {
    double abs = 0.0;
    double se_mult = 3.0;
    double bias = 0.0;
    double threshold(double comb_se) const { return abs > 0.0 ? abs : se_mult * comb_se + bias; }
};

IdentityReport make_report(std::string name, SummaryStat lhs, SummaryStat rhs, Tolerance tol);

// A functional on point measures with a declared read radius: eval only looks
// at atoms in (-read_radius, read_radius]. Empty optional = censored (the
// quantity was not observable through the window).
struct PalmFunctional {
    std::string name;
    double read_radius = 0.0;
    std::function<std::optional<double>(const PointMeasure&)> eval;
};

PalmFunctional pf_one();
PalmFunctional pf_tau(int j, double read_radius);
PalmFunctional pf_min_tau1(double cap, double read_radius);
PalmFunctional pf_void(double t, double read_radius); // 1{count(0, t] = 0}

struct PalmEstimate {
    SummaryStat stat;
    std::size_t censored = 0;
    std::size_t anchors = 0;       // anchor count (definition route)
    std::int64_t attempts = 0;     // accept-reject cost (return route)
};

// ---------------------------------------------------------------------------
// ensembles

SummaryStat estimate_intensity(std::span<const PointMeasure> ensemble);

struct HitProbability {
    SummaryStat stat;
    bool lower_bound = true; // nondecreasing in n_max_steps towards mu(Z^1)
};
HitProbability estimate_hit_probability(const BaseSystem& sys, const TargetSet& target,
                                        std::size_t n_samples, std::int64_t n_max_steps,
                                        std::uint64_t seed, int jobs);
HitProbability estimate_infinite_hit_probability(const BaseSystem& sys, const TargetSet& target,
                                                 std::size_t n_samples, std::int64_t n_max_steps,
                                                 std::int64_t m_hits, std::uint64_t seed,
                                                 int jobs);

SummaryStat estimate_mean_roof(const BaseSystem& sys, std::size_t n_samples, std::uint64_t seed,
                               int jobs);
SummaryStat estimate_target_measure(const BaseSystem& sys, const TargetSet& target,
                                    std::size_t n_samples, std::uint64_t seed, int jobs);

// ---------------------------------------------------------------------------
// the two Palm estimators (kept independent; comparing them runs the
// section-return identity as a test)

// definition route: average f over anchor-shifted copies, anchors in B
PalmEstimate palm_from_definition(std::span<const PointMeasure> ensemble, const PalmFunctional& f,
                                  double b_lo, double b_hi, double intensity);

// return route: f on the return process of y drawn from mu conditioned on D
PalmEstimate palm_from_returns(const BaseSystem& sys, const TargetSet& target,
                               const PalmFunctional& f, std::size_t n_samples, double horizon,
                               std::uint64_t seed, int jobs);

// ---------------------------------------------------------------------------
// matched entry/Palm sampling, for suspensions and direct generators alike

struct ProcessSource {
    std::string name;
    double intensity = 0.0; // exact when declared by the system
    std::function<PointMeasure(Rng&, double horizon)> sample_entry;
    // iid Palm observations on positive times (return route); when absent,
    // Palm rows are extracted by anchoring inside fresh stationary windows
    std::function<PointMeasure(Rng&, double horizon)> sample_palm;
};

ProcessSource suspension_source(const BaseSystem& sys, const TargetSet& target);
ProcessSource poisson_source(double lambda);

struct EntrySample {
    bool nonzero = false;        // at least one atom within the horizon
    std::vector<double> taus;    // tau_1 .. tau_j while observable
};
std::vector<EntrySample> entry_tau_samples(const ProcessSource& src, int j_max,
                                           std::size_t n_samples, double horizon,
                                           std::uint64_t seed, int jobs);

// rows of (tau_1 .. tau_j) under the Palm distribution; rows may be shorter
// than j_max when the window censors late returns
std::vector<std::vector<double>> palm_tau_samples(const ProcessSource& src, int j_max,
                                                  std::size_t n_samples, double horizon,
                                                  std::uint64_t seed, int jobs);

// ---------------------------------------------------------------------------
// identity checkers

IdentityReport kac_check(const BaseSystem& sys, const TargetSet& target, std::size_t n_samples,
                         std::int64_t n_max_steps, double horizon, std::uint64_t seed, int jobs,
                         Tolerance tol = {});

// inversion identity; the first report is the f = 1 case, then one per R
std::vector<IdentityReport> inversion_check(const ProcessSource& src,
                                            std::span<const double> r_grid, std::size_t n_samples,
                                            double horizon, std::uint64_t seed, int jobs,
                                            Tolerance tol = {});

std::vector<IdentityReport> palm_khinchin_check(const ProcessSource& src,
                                                std::span<const double> r_grid,
                                                std::size_t n_samples, double horizon,
                                                std::uint64_t seed, int jobs, Tolerance tol = {});

std::vector<IdentityReport> higher_order_check(const ProcessSource& src, int j,
                                               std::span<const double> r_grid,
                                               std::size_t n_samples, double horizon,
                                               std::uint64_t seed, int jobs, Tolerance tol = {});

// Palm law of the Poisson process against the exponential oracle (DKW band),
// plus the unit mass at the origin and the mean gap
std::vector<IdentityReport> slivnyak_check(double lambda, std::size_t n_samples, double horizon,
                                           std::uint64_t seed, int jobs, double confidence_alpha = 1e-3);

// cross-estimator agreement for a family of positive-time functionals
std::vector<IdentityReport> palm_compare(const BaseSystem& sys, const TargetSet& target,
                                         std::span<const PalmFunctional> family,
                                         std::size_t n_samples, double horizon,
                                         std::uint64_t seed, int jobs, Tolerance tol = {});

} // namespace palmflow
