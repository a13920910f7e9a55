#pragma once

#include "palmflow/base_system.hpp"
#include "palmflow/point_measure.hpp"

namespace palmflow {

// roof evaluation with the declared lower bound enforced
double eval_roof(const BaseSystem& sys, const BaseState& y);

// S_n(y) = sum_{j<n} r(T^j y); S_0 = 0
double birkhoff_sum(const BaseSystem& sys, const BaseState& y, std::int64_t n);

// the suspension semi-flow phi^t, t >= 0
SuspensionState flow(const BaseSystem& sys, const SuspensionState& x, double t);

// draw x per the flow-invariant measure nu (rejection on the roof)
SuspensionState sample_nu(const BaseSystem& sys, Rng& rng);

// importance-weighted alternative when only mean_roof is declared; every
// consumer must carry the weight
struct WeightedState {
    SuspensionState x;
    double weight;
};
WeightedState sample_nu_weighted(const BaseSystem& sys, Rng& rng);

// Entry times of x to the section D x {0} up to the horizon: the simple
// measure on (0, R] with atoms S_n(y) - s for T^n y in D. Hits are read off
// the base orbit directly; no time discretization is involved.
PointMeasure entry_times(const BaseSystem& sys, const TargetSet& target, const SuspensionState& x,
                         double horizon);

// entry times started on the section itself: x = (y, 0), y in D
PointMeasure return_process(const BaseSystem& sys, const TargetSet& target, const BaseState& y,
                            double horizon);

// entry times with every atom multiplied by mu(D) / r-bar, so the resulting
// ensemble has unit intensity; the horizon is given in rescaled units
PointMeasure rescaled_entry(const BaseSystem& sys, const TargetSet& target,
                            const SuspensionState& x, double rescaled_horizon);

// The eps-strip occupation count (1/eps) int_0^R 1{phi^t x in D x [0,eps)} dt
// evaluated in closed form. Differs from the atom count by at most 1; kept as
// a cross-check of the extraction path, never used for it.
double strip_count(const BaseSystem& sys, const TargetSet& target, const SuspensionState& x,
                   double horizon, double eps);

// draw y per mu(D)^{-1} mu|_D, via the target's conditional sampler when
// present and accept-reject on sample_mu otherwise; `attempts` accumulates
// the rejection cost
BaseState sample_conditional(const BaseSystem& sys, const TargetSet& target, Rng& rng,
                             std::int64_t* attempts = nullptr);

} // namespace palmflow
