#include "palmflow/suspension.hpp"

#include <cmath>
#include <stdexcept>

namespace palmflow {

double eval_roof(const BaseSystem& sys, const BaseState& y) {
    double r = sys.roof(y);
    if (!(r > 0.0) || r < sys.inf_roof * (1.0 - 1e-12))
        throw std::logic_error("roof violation: r(y) below declared inf_roof");
    return r;
}

double birkhoff_sum(const BaseSystem& sys, const BaseState& y, std::int64_t n) {
    if (n < 0) throw std::invalid_argument("birkhoff_sum: n must be >= 0");
    double s = 0.0;
    BaseState cur = y;
    for (std::int64_t j = 0; j < n; ++j) {
        s += eval_roof(sys, cur);
        if (j + 1 < n) cur = sys.step(cur);
    }
    return s;
}

SuspensionState flow(const BaseSystem& sys, const SuspensionState& x, double t) {
    if (t < 0.0) throw std::invalid_argument("flow: t must be >= 0");
    BaseState y = x.y;
    double h = x.s + t;
    double r = eval_roof(sys, y);
    while (h >= r) {
        h -= r;
        y = sys.step(y);
        r = eval_roof(sys, y);
    }
    return {y, h};
}

SuspensionState sample_nu(const BaseSystem& sys, Rng& rng) {
    if (!sys.sup_roof) throw std::runtime_error("cannot sample nu: no sup_roof declared");
    double sup = *sys.sup_roof;
    for (;;) {
        BaseState y = sys.sample_mu(rng);
        double r = eval_roof(sys, y);
        if (rng.uniform() * sup < r) return {y, rng.uniform(0.0, r)};
    }
}

WeightedState sample_nu_weighted(const BaseSystem& sys, Rng& rng) {
    if (!sys.mean_roof) throw std::runtime_error("cannot sample nu: no mean_roof declared");
    BaseState y = sys.sample_mu(rng);
    double r = eval_roof(sys, y);
    return {{y, rng.uniform(0.0, r)}, r / *sys.mean_roof};
}

PointMeasure entry_times(const BaseSystem& sys, const TargetSet& target, const SuspensionState& x,
                         double horizon) {
    if (!(horizon > 0.0)) throw std::invalid_argument("entry_times: horizon must be > 0");
    std::vector<Atom> atoms;
    BaseState y = x.y;
    double sn = 0.0;
    for (;;) {
        sn += eval_roof(sys, y);
        y = sys.step(y);
        double t = sn - x.s;
        if (t > horizon) break;
        if (t > 0.0 && target.member(y)) atoms.push_back({t, 1});
    }
    return PointMeasure(0.0, horizon, std::move(atoms));
}

PointMeasure return_process(const BaseSystem& sys, const TargetSet& target, const BaseState& y,
                            double horizon) {
    if (!target.member(y)) throw std::invalid_argument("return_process: not in target");
    return entry_times(sys, target, {y, 0.0}, horizon);
}

PointMeasure rescaled_entry(const BaseSystem& sys, const TargetSet& target,
                            const SuspensionState& x, double rescaled_horizon) {
    if (!sys.mean_roof || !target.measure)
        throw std::invalid_argument("rescaled_entry: mean_roof and measure_d must be known");
    double scale = *target.measure / *sys.mean_roof;
    PointMeasure raw = entry_times(sys, target, x, rescaled_horizon / scale);
    std::vector<Atom> atoms;
    atoms.reserve(raw.atoms().size());
    for (const Atom& a : raw.atoms()) atoms.push_back({a.t * scale, a.k});
    return PointMeasure(0.0, rescaled_horizon, std::move(atoms));
}

double strip_count(const BaseSystem& sys, const TargetSet& target, const SuspensionState& x,
                   double horizon, double eps) {
    if (!(eps > 0.0) || eps >= sys.inf_roof)
        throw std::invalid_argument("strip_count: eps must lie in (0, inf_roof)");
    double occupied = 0.0;
    BaseState y = x.y;
    double sn = 0.0;
    for (;;) {
        double a = sn - x.s; // orbit sits at height < eps over base point y during [a, a+eps)
        if (a > horizon) break;
        if (target.member(y)) {
            double lo = std::max(a, 0.0);
            double hi = std::min(a + eps, horizon);
            if (hi > lo) occupied += hi - lo;
        }
        sn += eval_roof(sys, y);
        y = sys.step(y);
    }
    return occupied / eps;
}

BaseState sample_conditional(const BaseSystem& sys, const TargetSet& target, Rng& rng,
                             std::int64_t* attempts) {
    if (target.sample_conditional) {
        if (attempts) ++*attempts;
        BaseState y = target.sample_conditional(rng);
        if (!target.member(y))
            throw std::logic_error("conditional sampler produced a state outside the target");
        return y;
    }
    constexpr std::int64_t kMaxAttempts = 100'000'000;
    for (std::int64_t i = 0; i < kMaxAttempts; ++i) {
        if (attempts) ++*attempts;
        BaseState y = sys.sample_mu(rng);
        if (target.member(y)) return y;
    }
    throw std::runtime_error("sample_conditional: accept-reject failed to hit the target");
}

} // namespace palmflow
