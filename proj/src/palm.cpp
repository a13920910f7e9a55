#include "palmflow/palm.hpp"

#include "palmflow/empirical.hpp"
#include "palmflow/ensemble.hpp"
#include "palmflow/suspension.hpp"
#include "palmflow/systems_zoo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace palmflow {

IdentityReport make_report(std::string name, SummaryStat lhs, SummaryStat rhs, Tolerance tol) {
    IdentityReport r;
    r.name = std::move(name);
    r.lhs = lhs.mean;
    r.lhs_se = lhs.se;
    r.rhs = rhs.mean;
    r.rhs_se = rhs.se;
    r.discrepancy = std::abs(lhs.mean - rhs.mean);
    r.threshold = tol.threshold(combined_se(lhs.se, rhs.se));
    r.pass = r.discrepancy <= r.threshold;
    r.lhs_samples = lhs.n;
    r.rhs_samples = rhs.n;
    return r;
}

// ---------------------------------------------------------------------------
// functionals

PalmFunctional pf_one() {
    return {"1", 0.0, [](const PointMeasure&) -> std::optional<double> { return 1.0; }};
}

PalmFunctional pf_tau(int j, double read_radius) {
    if (j < 1) throw std::invalid_argument("pf_tau: j must be >= 1");
    return {"tau_" + std::to_string(j), read_radius,
            [j](const PointMeasure& z) { return z.tau(j); }};
}

PalmFunctional pf_min_tau1(double cap, double read_radius) {
    return {"min(tau_1," + std::to_string(cap) + ")", read_radius,
            [cap](const PointMeasure& z) -> std::optional<double> {
                if (auto t = z.tau(1)) return std::min(*t, cap);
                if (z.window_hi() >= cap) return cap; // tau_1 beyond the window, min is capped
                return std::nullopt;
            }};
}

PalmFunctional pf_void(double t, double read_radius) {
    if (!(t > 0.0)) throw std::invalid_argument("pf_void: t must be > 0");
    return {"void(0," + std::to_string(t) + "]", read_radius,
            [t](const PointMeasure& z) -> std::optional<double> {
                double hi = std::min(t, z.window_hi());
                if (z.count(0.0, hi) > 0) return 0.0;
                if (z.window_hi() >= t) return 1.0;
                return std::nullopt;
            }};
}

// ---------------------------------------------------------------------------
// ensemble estimators

SummaryStat estimate_intensity(std::span<const PointMeasure> ensemble) {
    if (ensemble.size() < 2)
        throw std::invalid_argument("estimate_intensity: need at least 2 samples");
    double lo = ensemble.front().window_lo();
    double hi = ensemble.front().window_hi();
    std::vector<double> values;
    values.reserve(ensemble.size());
    for (const PointMeasure& z : ensemble) {
        if (z.window_lo() != lo || z.window_hi() != hi)
            throw std::invalid_argument("estimate_intensity: mismatched windows");
        values.push_back(static_cast<double>(z.count(lo, hi)) / (hi - lo));
    }
    return summarize(values);
}

namespace {

HitProbability hit_probability_impl(const BaseSystem& sys, const TargetSet& target,
                                    std::size_t n_samples, std::int64_t n_max_steps,
                                    std::int64_t m_hits, std::uint64_t seed, int jobs,
                                    std::string_view tag) {
    if (n_max_steps < 1) throw std::invalid_argument("hit probability: n_max_steps must be >= 1");
    auto hits = parallel_map<char>(n_samples, jobs, seed, tag, [&](std::size_t, Rng& rng) -> char {
        BaseState y = sys.sample_mu(rng);
        std::int64_t found = 0;
        for (std::int64_t j = 0; j < n_max_steps; ++j) {
            y = sys.step(y);
            if (target.member(y) && ++found >= m_hits) return 1;
        }
        return 0;
    });
    std::size_t k = 0;
    for (char h : hits) k += static_cast<std::size_t>(h);
    return {proportion(k, n_samples), true};
}

} // namespace

HitProbability estimate_hit_probability(const BaseSystem& sys, const TargetSet& target,
                                        std::size_t n_samples, std::int64_t n_max_steps,
                                        std::uint64_t seed, int jobs) {
    return hit_probability_impl(sys, target, n_samples, n_max_steps, 1, seed, jobs, "hit_prob");
}

HitProbability estimate_infinite_hit_probability(const BaseSystem& sys, const TargetSet& target,
                                                 std::size_t n_samples, std::int64_t n_max_steps,
                                                 std::int64_t m_hits, std::uint64_t seed,
                                                 int jobs) {
    if (m_hits < 2)
        throw std::invalid_argument("estimate_infinite_hit_probability: m_hits must be >= 2");
    return hit_probability_impl(sys, target, n_samples, n_max_steps, m_hits, seed, jobs,
                                "hit_prob_inf");
}

SummaryStat estimate_mean_roof(const BaseSystem& sys, std::size_t n_samples, std::uint64_t seed,
                               int jobs) {
    auto values = parallel_map<double>(n_samples, jobs, seed, "mean_roof",
                                       [&](std::size_t, Rng& rng) {
                                           return eval_roof(sys, sys.sample_mu(rng));
                                       });
    return summarize(values);
}

SummaryStat estimate_target_measure(const BaseSystem& sys, const TargetSet& target,
                                    std::size_t n_samples, std::uint64_t seed, int jobs) {
    auto hits = parallel_map<char>(n_samples, jobs, seed, "target_measure",
                                   [&](std::size_t, Rng& rng) -> char {
                                       return target.member(sys.sample_mu(rng)) ? 1 : 0;
                                   });
    std::size_t k = 0;
    for (char h : hits) k += static_cast<std::size_t>(h);
    return proportion(k, n_samples);
}

// ---------------------------------------------------------------------------
// Palm estimators

PalmEstimate palm_from_definition(std::span<const PointMeasure> ensemble, const PalmFunctional& f,
                                  double b_lo, double b_hi, double intensity) {
    if (!(b_lo < b_hi)) throw std::invalid_argument("palm_from_definition: empty anchor set");
    if (!(intensity > 0.0)) throw std::invalid_argument("palm_from_definition: intensity must be > 0");
    if (ensemble.empty()) throw std::invalid_argument("palm_from_definition: empty ensemble");
    double lo = ensemble.front().window_lo();
    double hi = ensemble.front().window_hi();
    if (b_lo - f.read_radius < lo || b_hi + f.read_radius > hi)
        throw std::invalid_argument("palm_from_definition: read radius exceeds window");
    PalmEstimate est;
    std::vector<double> values;
    values.reserve(ensemble.size());
    double norm = intensity * (b_hi - b_lo);
    for (const PointMeasure& z : ensemble) {
        KahanSum inner;
        for (const Atom& a : z.atoms()) {
            if (!(a.t > b_lo && a.t <= b_hi)) continue;
            est.anchors += static_cast<std::size_t>(a.k);
            auto v = f.eval(z.shift(a.t));
            if (v)
                inner.add(static_cast<double>(a.k) * *v);
            else
                est.censored += static_cast<std::size_t>(a.k);
        }
        values.push_back(inner.value() / norm);
    }
    est.stat = summarize(values);
    return est;
}

PalmEstimate palm_from_returns(const BaseSystem& sys, const TargetSet& target,
                               const PalmFunctional& f, std::size_t n_samples, double horizon,
                               std::uint64_t seed, int jobs) {
    struct Draw {
        std::optional<double> value;
        std::int64_t attempts = 0;
    };
    auto draws = parallel_map<Draw>(
        n_samples, jobs, seed, "palm_returns", [&](std::size_t, Rng& rng) {
            Draw d;
            BaseState y = sample_conditional(sys, target, rng, &d.attempts);
            d.value = f.eval(return_process(sys, target, y, horizon));
            return d;
        });
    PalmEstimate est;
    std::vector<double> values;
    values.reserve(n_samples);
    for (const Draw& d : draws) {
        est.attempts += d.attempts;
        if (d.value)
            values.push_back(*d.value);
        else
            ++est.censored;
    }
    est.stat = summarize(values);
    return est;
}

// ---------------------------------------------------------------------------
// sources

ProcessSource suspension_source(const BaseSystem& sys, const TargetSet& target) {
    ProcessSource src;
    src.name = sys.name + "/" + target.name;
    if (sys.mean_roof && target.measure) src.intensity = *target.measure / *sys.mean_roof;
    src.sample_entry = [sys, target](Rng& rng, double horizon) {
        return entry_times(sys, target, sample_nu(sys, rng), horizon);
    };
    src.sample_palm = [sys, target](Rng& rng, double horizon) {
        return return_process(sys, target, sample_conditional(sys, target, rng), horizon);
    };
    return src;
}

ProcessSource poisson_source(double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("poisson_source: lambda must be > 0");
    ProcessSource src;
    src.name = "poisson(" + std::to_string(lambda) + ")";
    src.intensity = lambda;
    src.sample_entry = [lambda](Rng& rng, double horizon) {
        return make_poisson(lambda, rng, 0.0, horizon);
    };
    // no iid Palm sampler: Palm rows come from anchoring, so checks against
    // the Poisson process never assume the Slivnyak relation they verify
    return src;
}

std::vector<EntrySample> entry_tau_samples(const ProcessSource& src, int j_max,
                                           std::size_t n_samples, double horizon,
                                           std::uint64_t seed, int jobs) {
    return parallel_map<EntrySample>(
        n_samples, jobs, seed, "entry_tau", [&](std::size_t, Rng& rng) {
            PointMeasure pm = src.sample_entry(rng, horizon);
            EntrySample s;
            s.nonzero = !pm.empty();
            for (int j = 1; j <= j_max; ++j) {
                auto t = pm.tau(j);
                if (!t) break;
                s.taus.push_back(*t);
            }
            return s;
        });
}

std::vector<std::vector<double>> palm_tau_samples(const ProcessSource& src, int j_max,
                                                  std::size_t n_samples, double horizon,
                                                  std::uint64_t seed, int jobs) {
    if (src.sample_palm) {
        return parallel_map<std::vector<double>>(
            n_samples, jobs, seed, "palm_tau", [&](std::size_t, Rng& rng) {
                PointMeasure pm = src.sample_palm(rng, horizon);
                std::vector<double> row;
                for (int j = 1; j <= j_max; ++j) {
                    auto t = pm.tau(j);
                    if (!t) break;
                    row.push_back(*t);
                }
                return row;
            });
    }
    // anchor route: every point of a stationary window contributes one row of
    // forward gaps, each with weight one (the defining Palm average)
    if (!(src.intensity > 0.0))
        throw std::invalid_argument("palm_tau_samples: source intensity unknown");
    double span = 32.0 / src.intensity;
    double window = span + horizon;
    auto n_real = static_cast<std::size_t>(
        std::ceil(static_cast<double>(n_samples) / (src.intensity * span)));
    n_real = std::max<std::size_t>(n_real, 2);
    auto per_real = parallel_map<std::vector<std::vector<double>>>(
        n_real, jobs, seed, "palm_tau_anchor", [&](std::size_t, Rng& rng) {
            PointMeasure pm = src.sample_entry(rng, window);
            const auto& atoms = pm.atoms();
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < atoms.size(); ++i) {
                if (!(atoms[i].t <= span)) break;
                std::vector<double> row;
                for (std::size_t j = i + 1; j < atoms.size() && row.size() < static_cast<std::size_t>(j_max); ++j)
                    for (std::int64_t c = 0; c < atoms[j].k && row.size() < static_cast<std::size_t>(j_max); ++c)
                        row.push_back(atoms[j].t - atoms[i].t);
                for (std::int64_t c = 0; c < atoms[i].k; ++c) rows.push_back(row);
            }
            return rows;
        });
    std::vector<std::vector<double>> rows;
    for (auto& rs : per_real)
        for (auto& r : rs) rows.push_back(std::move(r));
    return rows;
}

// ---------------------------------------------------------------------------
// identity checkers

IdentityReport kac_check(const BaseSystem& sys, const TargetSet& target, std::size_t n_samples,
                         std::int64_t n_max_steps, double horizon, std::uint64_t seed, int jobs,
                         Tolerance tol) {
    SummaryStat mu_d = target.measure ? SummaryStat{*target.measure, 0.0, 0}
                                      : estimate_target_measure(sys, target, n_samples, seed, jobs);
    if (!(mu_d.mean > 0.0)) throw std::domain_error("kac_check: zero-measure target");

    PalmEstimate lhs = palm_from_returns(sys, target, pf_tau(1, horizon), n_samples, horizon,
                                         seed, jobs);

    // RHS = mu(r * 1_{Z^1_D}) / mu(D); the roof weight matters whenever r is
    // not constant (for r = c this reduces to c * mu(Z^1_D) / mu(D))
    struct WeightedHit {
        double at_n = 0.0;   // r(y) 1{orbit hits D within n_max_steps}
        double at_2n = 0.0;  // same with 2 n_max_steps
    };
    auto weighted = parallel_map<WeightedHit>(
        n_samples, jobs, seed + 1, "kac_hit_set", [&](std::size_t, Rng& rng) {
            BaseState y = sys.sample_mu(rng);
            double w = eval_roof(sys, y);
            WeightedHit h;
            BaseState z = y;
            for (std::int64_t j = 0; j < 2 * n_max_steps; ++j) {
                z = sys.step(z);
                if (target.member(z)) {
                    if (j < n_max_steps) h.at_n = w;
                    h.at_2n = w;
                    break;
                }
            }
            return h;
        });
    std::vector<double> w_n, w_2n;
    w_n.reserve(n_samples);
    w_2n.reserve(n_samples);
    for (const auto& h : weighted) {
        w_n.push_back(h.at_n);
        w_2n.push_back(h.at_2n);
    }
    SummaryStat z1 = summarize(w_n);
    SummaryStat z2 = summarize(w_2n);

    double rhs = z2.mean / mu_d.mean;
    double rel_z = z2.mean > 0.0 ? z2.se / z2.mean : 0.0;
    double rel_d = mu_d.se / mu_d.mean;
    double rhs_se = std::abs(rhs) * std::sqrt(rel_z * rel_z + rel_d * rel_d);

    IdentityReport rep = make_report("kac:" + sys.name + "/" + target.name, lhs.stat,
                                     {rhs, rhs_se, n_samples}, tol);
    rep.censored = lhs.censored;
    double censor_frac =
        static_cast<double>(lhs.censored) / static_cast<double>(std::max<std::size_t>(n_samples, 1));
    if (censor_frac > 0.01)
        rep.warnings.push_back("return-time censoring above 1%");
    double drift = std::abs(z2.mean - z1.mean);
    double allowed = std::max(1e-3 * std::max(z2.mean, 1e-12),
                              3.0 * combined_se(z1.se, z2.se));
    if (drift > allowed) {
        rep.warnings.push_back("hit-set probability not stabilized between n_max and 2*n_max");
        rep.pass = false;
    }
    return rep;
}

namespace {

EmpiricalDistribution tau_column(const std::vector<std::vector<double>>& rows, int j,
                                 double truncate_at, std::size_t* censored) {
    std::vector<double> vals;
    vals.reserve(rows.size());
    for (const auto& row : rows) {
        if (row.size() >= static_cast<std::size_t>(j)) {
            vals.push_back(row[static_cast<std::size_t>(j) - 1]);
        } else {
            vals.push_back(truncate_at); // tau_j beyond the window; mass recorded
            if (censored) ++*censored;
        }
    }
    return EmpiricalDistribution(std::move(vals));
}

SummaryStat mean_excess_stat(const EmpiricalDistribution& d, double r) {
    std::vector<double> ex;
    ex.reserve(d.size());
    for (double x : d.samples()) ex.push_back(std::max(x - r, 0.0));
    return summarize(ex);
}

} // namespace

std::vector<IdentityReport> inversion_check(const ProcessSource& src,
                                            std::span<const double> r_grid, std::size_t n_samples,
                                            double horizon, std::uint64_t seed, int jobs,
                                            Tolerance tol) {
    if (!(src.intensity > 0.0)) throw std::invalid_argument("inversion_check: intensity unknown");
    auto entries = entry_tau_samples(src, 1, n_samples, horizon, seed, jobs);
    auto rows = palm_tau_samples(src, 1, n_samples, horizon, seed + 1, jobs);

    std::size_t censored = 0;
    EmpiricalDistribution tau1_eta = tau_column(rows, 1, horizon, &censored);

    std::vector<IdentityReport> reports;
    { // f = 1: P(xi != 0) = I E tau_1(eta)
        std::size_t hits = 0;
        for (const auto& e : entries) hits += e.nonzero ? 1 : 0;
        SummaryStat lhs = proportion(hits, entries.size());
        SummaryStat m = summarize(tau1_eta.samples());
        SummaryStat rhs{src.intensity * m.mean, src.intensity * m.se, m.n};
        auto rep = make_report("inversion:f=1:" + src.name, lhs, rhs, tol);
        rep.censored = censored;
        reports.push_back(std::move(rep));
    }
    for (double r : r_grid) { // f = 1{tau_1 > R}
        std::size_t hits = 0;
        for (const auto& e : entries) hits += (!e.taus.empty() && e.taus[0] > r) ? 1 : 0;
        SummaryStat lhs = proportion(hits, entries.size());
        SummaryStat ex = mean_excess_stat(tau1_eta, r);
        SummaryStat rhs{src.intensity * ex.mean, src.intensity * ex.se, ex.n};
        auto rep = make_report("inversion:R=" + std::to_string(r) + ":" + src.name, lhs, rhs, tol);
        rep.censored = censored;
        reports.push_back(std::move(rep));
    }
    return reports;
}

std::vector<IdentityReport> palm_khinchin_check(const ProcessSource& src,
                                                std::span<const double> r_grid,
                                                std::size_t n_samples, double horizon,
                                                std::uint64_t seed, int jobs, Tolerance tol) {
    auto entries = entry_tau_samples(src, 1, n_samples, horizon, seed, jobs);
    auto rows = palm_tau_samples(src, 1, n_samples, horizon, seed + 1, jobs);
    std::size_t censored = 0;
    EmpiricalDistribution tau1_eta = tau_column(rows, 1, horizon, &censored);
    SummaryStat mean_eta = summarize(tau1_eta.samples());
    if (!(mean_eta.mean > 0.0)) throw std::domain_error("palm_khinchin_check: E tau_1(eta) <= 0");

    std::size_t nonzero = 0;
    for (const auto& e : entries) nonzero += e.nonzero ? 1 : 0;

    std::vector<IdentityReport> reports;
    for (double r : r_grid) {
        std::size_t hits = 0;
        for (const auto& e : entries) hits += (!e.taus.empty() && e.taus[0] > r) ? 1 : 0;
        SummaryStat lhs = proportion(hits, nonzero);
        SummaryStat ex = mean_excess_stat(tau1_eta, r);
        double rhs = ex.mean / mean_eta.mean;
        double rhs_se = combined_se(ex.se / mean_eta.mean,
                                    rhs * mean_eta.se / mean_eta.mean);
        auto rep = make_report("palm_khinchin:R=" + std::to_string(r) + ":" + src.name, lhs,
                               {rhs, rhs_se, ex.n}, tol);
        rep.censored = censored;
        reports.push_back(std::move(rep));
    }
    return reports;
}

std::vector<IdentityReport> higher_order_check(const ProcessSource& src, int j,
                                               std::span<const double> r_grid,
                                               std::size_t n_samples, double horizon,
                                               std::uint64_t seed, int jobs, Tolerance tol) {
    if (j < 2) throw std::invalid_argument("higher_order_check: j must be >= 2");
    auto entries = entry_tau_samples(src, j, n_samples, horizon, seed, jobs);
    auto rows = palm_tau_samples(src, j, n_samples, horizon, seed + 1, jobs);

    std::size_t censored = 0;
    EmpiricalDistribution tauj_eta = tau_column(rows, j, horizon, &censored);
    EmpiricalDistribution taujm1_eta = tau_column(rows, j - 1, horizon, nullptr);
    SummaryStat mean_eta = summarize(tau_column(rows, 1, horizon, nullptr).samples());
    if (!(mean_eta.mean > 0.0)) throw std::domain_error("higher_order_check: E tau_1(eta) <= 0");

    std::size_t nonzero = 0;
    for (const auto& e : entries) nonzero += e.nonzero ? 1 : 0;

    std::vector<IdentityReport> reports;
    bool warned = censored > rows.size() / 100;
    for (double r : r_grid) {
        std::size_t hits = 0;
        for (const auto& e : entries) {
            if (!e.nonzero) continue;
            // tau_j not visible within the horizon means tau_j > horizon >= R
            bool above = e.taus.size() < static_cast<std::size_t>(j) ||
                         e.taus[static_cast<std::size_t>(j) - 1] > r;
            hits += above ? 1 : 0;
        }
        SummaryStat lhs = proportion(hits, nonzero);
        SummaryStat ex_j = mean_excess_stat(tauj_eta, r);
        SummaryStat ex_jm1 = mean_excess_stat(taujm1_eta, r);
        double rhs = (ex_j.mean - ex_jm1.mean) / mean_eta.mean;
        double rhs_se = combined_se(combined_se(ex_j.se, ex_jm1.se) / mean_eta.mean,
                                    std::abs(rhs) * mean_eta.se / mean_eta.mean);
        auto rep = make_report("higher_order:j=" + std::to_string(j) + ":R=" + std::to_string(r) +
                                   ":" + src.name,
                               lhs, {rhs, rhs_se, ex_j.n}, tol);
        rep.censored = censored;
        if (warned) rep.warnings.push_back("tau_j censoring above 1%");
        reports.push_back(std::move(rep));
    }
    return reports;
}

std::vector<IdentityReport> slivnyak_check(double lambda, std::size_t n_samples, double horizon,
                                           std::uint64_t seed, int jobs,
                                           double confidence_alpha) {
    ProcessSource src = poisson_source(lambda);
    auto rows = palm_tau_samples(src, 1, n_samples, horizon, seed, jobs);

    std::vector<double> gaps;
    std::size_t censored = 0;
    for (const auto& row : rows) {
        if (row.empty())
            ++censored;
        else
            gaps.push_back(row[0]);
    }
    if (gaps.size() < 2) throw std::runtime_error("slivnyak_check: no gaps observed");
    EmpiricalDistribution gap_dist(std::move(gaps));

    std::vector<IdentityReport> reports;
    {
        double d = gap_dist.sup_distance(
            [lambda](double u) { return u <= 0.0 ? 0.0 : 1.0 - std::exp(-lambda * u); });
        IdentityReport rep;
        rep.name = "slivnyak:gap_cdf_vs_exponential";
        rep.lhs = d;
        rep.rhs = 0.0;
        rep.discrepancy = d;
        rep.threshold = dkw_band(gap_dist.size(), confidence_alpha);
        rep.pass = d <= rep.threshold;
        rep.lhs_samples = gap_dist.size();
        rep.censored = censored;
        reports.push_back(std::move(rep));
    }
    {
        // every anchored copy carries exactly one point at the origin
        SummaryStat lhs{1.0, 0.0, rows.size()};
        reports.push_back(make_report("slivnyak:eta{0}=1", lhs, {1.0, 0.0, rows.size()},
                                      Tolerance{0.0, 0.0, 0.0}));
        reports.back().pass = true; // anchoring pins the atom at 0 by construction
    }
    reports.push_back(make_report("slivnyak:mean_gap", summarize(gap_dist.samples()),
                                  {1.0 / lambda, 0.0, 0}, {}));
    return reports;
}

std::vector<IdentityReport> palm_compare(const BaseSystem& sys, const TargetSet& target,
                                         std::span<const PalmFunctional> family,
                                         std::size_t n_samples, double horizon,
                                         std::uint64_t seed, int jobs, Tolerance tol) {
    if (!sys.mean_roof || !target.measure)
        throw std::invalid_argument("palm_compare: mean_roof and measure_d must be declared");
    double intensity = *target.measure / *sys.mean_roof;

    double guard = 0.0;
    for (const auto& f : family) guard = std::max(guard, f.read_radius);
    double window = horizon + 2.0 * guard;

    auto ensemble = parallel_map<PointMeasure>(
        n_samples, jobs, seed, "palm_compare_entries",
        [&](std::size_t, Rng& rng) {
            return entry_times(sys, target, sample_nu(sys, rng), window);
        },
        PointMeasure(0.0, window, {}));

    std::vector<IdentityReport> reports;
    for (const auto& f : family) {
        PalmEstimate def = palm_from_definition(ensemble, f, guard, window - guard, intensity);
        PalmEstimate ret =
            palm_from_returns(sys, target, f, n_samples, horizon, seed + 1, jobs);
        auto rep = make_report("palm_compare:" + f.name + ":" + sys.name + "/" + target.name,
                               def.stat, ret.stat, tol);
        rep.censored = def.censored + ret.censored;
        reports.push_back(std::move(rep));
    }
    return reports;
}

} // namespace palmflow
