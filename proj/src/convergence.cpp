#include "palmflow/convergence.hpp"

#include "palmflow/ensemble.hpp"
#include "palmflow/suspension.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace palmflow {

namespace {

constexpr double kSideWindow = 6.0; // two-sided observations reach back this far

std::optional<double> first_positive(const PointMeasure& pm) { return pm.tau(1); }

} // namespace

// ---------------------------------------------------------------------------
// families

namespace {

class LatticeClusterFamily final : public ProcessFamily {
public:
    explicit LatticeClusterFamily(std::function<double(int)> a_of_n)
        : a_of_n_(a_of_n ? std::move(a_of_n)
                         : [](int n) { return 1.0 / (n + 1.0); }) {}

    std::string name() const override { return "lattice_cluster"; }

    PointMeasure sample_entry(int n, double lo, double hi, Rng& rng) const override {
        return make_lattice_cluster({n, a_of_n_(n)}, rng, lo, hi);
    }

    PointMeasure sample_palm(int n, double lo, double hi, Rng& rng) const override {
        return lattice_cluster_palm({n, a_of_n_(n)}, rng, lo, hi);
    }

    std::string palm_source() const override { return "analytic"; }
    bool two_sided() const override { return true; }
    double min_horizon(int n) const override { return 2.0 * (2.0 * n + 1.0) + 2.0; }

    std::optional<double> exact_mean_tau1(int n) const override {
        return lattice_cluster_oracle({n, a_of_n_(n)}).mean_tau1;
    }

    std::optional<double> palm_central_mass_bound(int n) const override {
        double a = a_of_n_(n);
        return std::min(std::floor(1.0 / a), static_cast<double>(n));
    }

private:
    std::function<double(int)> a_of_n_;
};

class PoissonFamily final : public ProcessFamily {
public:
    explicit PoissonFamily(double lambda) : lambda_(lambda) {
        if (!(lambda > 0.0)) throw std::invalid_argument("poisson_family: lambda must be > 0");
    }

    std::string name() const override { return "poisson"; }

    PointMeasure sample_entry(int, double lo, double hi, Rng& rng) const override {
        return make_poisson(lambda_, rng, lo, hi);
    }

    PointMeasure sample_palm(int, double lo, double hi, Rng& rng) const override {
        // re-anchor a stationary realization at its first point after the
        // origin; for the memoryless process this realizes the Palm law
        double g = 25.0 / lambda_;
        for (;;) {
            PointMeasure z = make_poisson(lambda_, rng, lo - g, hi + g);
            auto anchor = z.tau(1);
            if (anchor && *anchor <= g) return z.shift(*anchor);
        }
    }

    std::string palm_source() const override { return "anchored"; }
    bool two_sided() const override { return true; }
    std::optional<double> exact_mean_tau1(int) const override { return 1.0 / lambda_; }

private:
    double lambda_;
};

class SuspensionFamily final : public ProcessFamily {
public:
    SuspensionFamily(std::string name,
                     std::function<std::pair<BaseSystem, TargetSet>(int)> builder, bool rescale)
        : name_(std::move(name)), builder_(std::move(builder)), rescale_(rescale) {}

    std::string name() const override { return name_; }

    PointMeasure sample_entry(int n, double, double hi, Rng& rng) const override {
        auto [sys, target] = builder_(n);
        SuspensionState x = sample_nu(sys, rng);
        return rescale_ ? rescaled_entry(sys, target, x, hi)
                        : entry_times(sys, target, x, hi);
    }

    PointMeasure sample_palm(int n, double, double hi, Rng& rng) const override {
        auto [sys, target] = builder_(n);
        BaseState y = sample_conditional(sys, target, rng);
        if (!rescale_) return return_process(sys, target, y, hi);
        double scale = *target.measure / *sys.mean_roof;
        PointMeasure raw = return_process(sys, target, y, hi / scale);
        std::vector<Atom> atoms;
        atoms.reserve(raw.atoms().size());
        for (const Atom& a : raw.atoms()) atoms.push_back({a.t * scale, a.k});
        return PointMeasure(0.0, hi, std::move(atoms));
    }

    std::string palm_source() const override { return "returns"; }
    bool two_sided() const override { return false; }

private:
    std::string name_;
    std::function<std::pair<BaseSystem, TargetSet>(int)> builder_;
    bool rescale_;
};

} // namespace

std::unique_ptr<ProcessFamily> lattice_cluster_family(std::function<double(int)> a_of_n) {
    return std::make_unique<LatticeClusterFamily>(std::move(a_of_n));
}

std::unique_ptr<ProcessFamily> poisson_family(double lambda) {
    return std::make_unique<PoissonFamily>(lambda);
}

std::unique_ptr<ProcessFamily> suspension_family(
    std::string name, std::function<std::pair<BaseSystem, TargetSet>(int)> builder,
    bool rescale) {
    return std::make_unique<SuspensionFamily>(std::move(name), std::move(builder), rescale);
}

const std::vector<std::pair<double, double>>& proxy_windows() {
    static const std::vector<std::pair<double, double>> w = {
        {-1.0, 0.0}, {0.0, 1.0}, {0.0, 5.0}, {-5.0, 5.0}};
    return w;
}

// ---------------------------------------------------------------------------
// runner

FamilyResult run_family(const ProcessFamily& family, std::span<const int> n_list,
                        std::size_t samples, double horizon, std::uint64_t seed, int jobs) {
    if (samples < 2) throw std::invalid_argument("run_family: need at least 2 samples");
    const auto& windows = proxy_windows();

    FamilyResult fr;
    fr.family = family.name();
    for (int n : n_list) {
        FamilyIndexResult r;
        r.n = n;
        r.samples = samples;
        r.palm_source = family.palm_source();
        double hi = std::max({horizon, family.min_horizon(n), kSideWindow});
        double lo = family.two_sided() ? -kSideWindow : 0.0;

        struct EntryStats {
            char nonzero = 0;
            char has_tau1 = 0;
            double tau1 = 0.0;
            double rate = 0.0;
            std::array<std::int64_t, 8> counts{}; // -1 = window not observed
        };
        std::string tag = family.name() + ":entry:n=" + std::to_string(n);
        auto entry = parallel_map<EntryStats>(
            samples, jobs, seed, tag, [&](std::size_t, Rng& rng) {
                PointMeasure pm = family.sample_entry(n, lo, hi, rng);
                EntryStats s;
                s.nonzero = pm.empty() ? 0 : 1;
                if (auto t = first_positive(pm)) {
                    s.has_tau1 = 1;
                    s.tau1 = *t;
                }
                s.rate = static_cast<double>(pm.total()) / pm.window_length();
                for (std::size_t w = 0; w < windows.size(); ++w) {
                    auto [a, b] = windows[w];
                    s.counts[w] = (a >= pm.window_lo() && b <= pm.window_hi())
                                      ? pm.count(a, b)
                                      : -1;
                }
                return s;
            });

        struct PalmStats {
            char has_tau1 = 0;
            double tau1 = 0.0;
            double central = -1.0; // count in [-1, 1], -1 = unobserved
            std::array<std::int64_t, 8> counts{};
        };
        tag = family.name() + ":palm:n=" + std::to_string(n);
        auto palm = parallel_map<PalmStats>(
            samples, jobs, seed + 1, tag, [&](std::size_t, Rng& rng) {
                PointMeasure pm = family.sample_palm(n, lo, hi, rng);
                PalmStats s;
                if (auto t = first_positive(pm)) {
                    s.has_tau1 = 1;
                    s.tau1 = *t;
                }
                if (pm.window_lo() <= -1.0 && pm.window_hi() >= 1.0)
                    s.central = static_cast<double>(pm.count(-1.0, 1.0));
                for (std::size_t w = 0; w < windows.size(); ++w) {
                    auto [a, b] = windows[w];
                    s.counts[w] = (a >= pm.window_lo() && b <= pm.window_hi())
                                      ? pm.count(a, b)
                                      : -1;
                }
                return s;
            });

        std::vector<double> rates, tau1_xi, tau1_eta, central;
        std::size_t nonzero = 0;
        for (const auto& s : entry) {
            rates.push_back(s.rate);
            nonzero += s.nonzero ? 1 : 0;
            if (s.has_tau1) tau1_xi.push_back(s.tau1);
        }
        for (const auto& s : palm) {
            if (s.has_tau1)
                tau1_eta.push_back(s.tau1);
            else
                ++r.censored;
            if (s.central >= 0.0) central.push_back(s.central);
        }
        r.intensity = summarize(rates);
        r.p_nonzero = proportion(nonzero, samples);
        r.tau1_xi = EmpiricalDistribution(std::move(tau1_xi));
        r.tau1_eta = EmpiricalDistribution(std::move(tau1_eta));
        if (auto exact = family.exact_mean_tau1(n)) {
            r.mean_tau1_eta = {*exact, 0.0, samples};
            r.mean_tau1_eta_exact = true;
        } else {
            r.mean_tau1_eta = summarize(r.tau1_eta.samples());
        }
        if (!central.empty()) {
            r.eta_central_mass = summarize(central);
            r.eta_central_mass_min = *std::min_element(central.begin(), central.end());
        }
        r.eta_central_mass_bound = family.palm_central_mass_bound(n);

        for (std::size_t w = 0; w < windows.size(); ++w) {
            CountLaw cx{windows[w].first, windows[w].second, {}, 0};
            CountLaw ce = cx;
            for (const auto& s : entry)
                if (s.counts[w] >= 0) {
                    ++cx.freq[s.counts[w]];
                    ++cx.total;
                }
            for (const auto& s : palm)
                if (s.counts[w] >= 0) {
                    ++ce.freq[s.counts[w]];
                    ++ce.total;
                }
            r.xi_counts.push_back(std::move(cx));
            r.eta_counts.push_back(std::move(ce));
        }
        fr.per_n.push_back(std::move(r));
    }
    return fr;
}

// ---------------------------------------------------------------------------
// limit laws and equivalence

LimitLaw limit_delta0() {
    return {"delta_0", [](double) { return 0.0; }, [](double) { return 0.0; }};
}

LimitLaw limit_exponential(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("limit_exponential: rate must be > 0");
    return {"exp(" + std::to_string(rate) + ")",
            [rate](double r) { return std::exp(-rate * r); },
            [rate](double r) { return (1.0 - std::exp(-rate * r)) / rate; }};
}

EquivalenceReport check_equivalence(const FamilyResult& fr, const LimitLaw& rho,
                                    std::span<const double> r_grid, Tolerance tol) {
    if (rho.survival(0.0) > 1.0 + 1e-12 || rho.survival(0.0) < -1e-12)
        throw std::invalid_argument("check_equivalence: rho is not a probability law");
    double prev = rho.survival(0.0);
    for (double r : r_grid) {
        double f = rho.survival(r);
        if (f > prev + 1e-12 || f < -1e-12)
            throw std::invalid_argument("check_equivalence: rho is not a probability law");
        prev = f;
    }

    EquivalenceReport out;
    out.side_i_trending = true;
    out.side_ii_trending = true;
    for (double r : r_grid) {
        double target = rho.survival_integral(r);
        double prev_i = -1.0, prev_i_se = 0.0, prev_ii = -1.0, prev_ii_se = 0.0;
        for (const auto& ir : fr.per_n) {
            std::string suffix = ":n=" + std::to_string(ir.n) + ":R=" + std::to_string(r);
            { // side (i): E tau_1(eta_n) P(tau_1(xi_n) <= R | xi_n != 0)
                double cdf = ir.tau1_xi.size() ? ir.tau1_xi.cdf(r) : 0.0;
                double cdf_se = ir.tau1_xi.size()
                                    ? std::sqrt(cdf * (1.0 - cdf) /
                                                static_cast<double>(ir.tau1_xi.size()))
                                    : 0.0;
                double lhs = ir.mean_tau1_eta.mean * cdf;
                double lhs_se = combined_se(ir.mean_tau1_eta.mean * cdf_se,
                                            cdf * ir.mean_tau1_eta.se);
                auto rep = make_report("equiv:i" + suffix, {lhs, lhs_se, ir.tau1_xi.size()},
                                       {target, 0.0, 0}, tol);
                if (prev_i >= 0.0 &&
                    rep.discrepancy > prev_i + 3.0 * combined_se(rep.lhs_se, prev_i_se))
                    out.side_i_trending = false;
                prev_i = rep.discrepancy;
                prev_i_se = rep.lhs_se;
                out.reports.push_back(std::move(rep));
            }
            { // side (ii): E min(tau_1(eta_n), R)
                std::vector<double> g;
                g.reserve(ir.tau1_eta.size());
                for (double x : ir.tau1_eta.samples()) g.push_back(std::min(x, r));
                SummaryStat lhs = summarize(g);
                auto rep = make_report("equiv:ii" + suffix, lhs, {target, 0.0, 0}, tol);
                if (prev_ii >= 0.0 &&
                    rep.discrepancy > prev_ii + 3.0 * combined_se(rep.lhs_se, prev_ii_se))
                    out.side_ii_trending = false;
                prev_ii = rep.discrepancy;
                prev_ii_se = rep.lhs_se;
                out.reports.push_back(std::move(rep));
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// two-of-three

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "holds";
        case Verdict::Fails: return "fails";
        default: return "unknown";
    }
}

LimitProcessLaw limit_zero_process() {
    return {"zero", 0.0,
            [](double, std::int64_t k) { return k == 0 ? 1.0 : 0.0; }};
}

LimitProcessLaw limit_poisson_process(double lambda) {
    return {"poisson(" + std::to_string(lambda) + ")", lambda,
            [lambda](double len, std::int64_t k) {
                double m = lambda * len;
                double logp = -m + static_cast<double>(k) * std::log(m) -
                              std::lgamma(static_cast<double>(k) + 1.0);
                return std::exp(logp);
            }};
}

LimitProcessLaw limit_undeclared() { return {"undeclared", std::nullopt, {}}; }

namespace {

double tv_distance(const CountLaw& law, const LimitProcessLaw& limit) {
    double len = law.hi - law.lo;
    double sum = 0.0;
    double covered = 0.0;
    for (const auto& [k, cnt] : law.freq) {
        double p = limit.count_pmf(len, k);
        sum += std::abs(static_cast<double>(cnt) / static_cast<double>(law.total) - p);
        covered += p;
    }
    sum += std::max(0.0, 1.0 - covered); // limit mass on unobserved counts
    return 0.5 * sum;
}

Verdict law_verdict(const std::vector<double>& tv_by_n, double threshold) {
    if (tv_by_n.empty()) return Verdict::Unknown;
    double last = tv_by_n.back();
    if (last <= threshold) return Verdict::Holds;
    bool improving = tv_by_n.front() > last + threshold;
    return improving ? Verdict::Unknown : Verdict::Fails;
}

} // namespace

TwoOfThreeReport two_of_three_report(const FamilyResult& fr, const LimitProcessLaw& xi_limit,
                                     const LimitProcessLaw& eta_limit) {
    TwoOfThreeReport out;
    out.caveat =
        "count-law agreement on finitely many windows is a necessary proxy for "
        "convergence in distribution, not a proof";
    if (fr.per_n.empty()) return out;

    double n_samp = static_cast<double>(fr.per_n.front().samples);
    double threshold = 0.02 + 3.0 / std::sqrt(std::max(n_samp, 1.0));

    for (const auto& ir : fr.per_n) {
        out.intensity_by_n.push_back(ir.intensity.mean);
        if (xi_limit.count_pmf) {
            double tv = 0.0;
            for (const auto& law : ir.xi_counts)
                if (law.total > 0) tv = std::max(tv, tv_distance(law, xi_limit));
            out.xi_tv_by_n.push_back(tv);
        }
        if (eta_limit.count_pmf) {
            double tv = 0.0;
            for (const auto& law : ir.eta_counts)
                if (law.total > 0) tv = std::max(tv, tv_distance(law, eta_limit));
            out.eta_tv_by_n.push_back(tv);
        }
        out.eta_central_mass_by_n.push_back(ir.eta_central_mass.n ? ir.eta_central_mass.mean
                                                                  : 0.0);
        if (ir.eta_central_mass_bound && ir.eta_central_mass.n &&
            ir.eta_central_mass_min < *ir.eta_central_mass_bound - 1e-9)
            out.mass_bound_satisfied = false;
    }

    // (i): convergence of intensities to the declared limit
    if (xi_limit.intensity) {
        const auto& last = fr.per_n.back();
        double diff = std::abs(last.intensity.mean - *xi_limit.intensity);
        double slack = std::max(3.0 * last.intensity.se, 1e-3);
        if (diff <= slack) {
            out.intensity_conv = Verdict::Holds;
        } else {
            double first = std::abs(fr.per_n.front().intensity.mean - *xi_limit.intensity);
            out.intensity_conv =
                diff <= 0.5 * first ? Verdict::Unknown : Verdict::Fails;
        }
    }

    // (ii)/(iii): count-law proxy against the declared limit processes
    out.xi_conv = xi_limit.count_pmf ? law_verdict(out.xi_tv_by_n, threshold) : Verdict::Unknown;
    if (eta_limit.count_pmf) {
        out.eta_conv = law_verdict(out.eta_tv_by_n, threshold);
    } else if (out.eta_central_mass_by_n.size() >= 2) {
        // no limit declared; growing mass in a fixed window rules one out
        double first = out.eta_central_mass_by_n.front();
        double last = out.eta_central_mass_by_n.back();
        double se = combined_se(fr.per_n.front().eta_central_mass.se,
                                fr.per_n.back().eta_central_mass.se);
        out.eta_conv = last > first + 3.0 * se ? Verdict::Fails : Verdict::Unknown;
    }
    return out;
}

// ---------------------------------------------------------------------------
// tightness

std::vector<TightnessRow> tightness_diagnostic(const FamilyResult& fr,
                                               std::span<const double> k_grid) {
    std::vector<TightnessRow> rows;
    if (fr.per_n.empty()) return rows;
    double sup_intensity = 0.0;
    for (const auto& ir : fr.per_n) sup_intensity = std::max(sup_intensity, ir.intensity.mean);

    for (std::size_t w = 0; w < fr.per_n.front().xi_counts.size(); ++w) {
        const CountLaw& probe = fr.per_n.front().xi_counts[w];
        double len = probe.hi - probe.lo;
        for (double k : k_grid) {
            TightnessRow row;
            row.window_lo = probe.lo;
            row.window_hi = probe.hi;
            row.k = k;
            row.markov_bound = sup_intensity * len / k;
            for (const auto& ir : fr.per_n) {
                const CountLaw& law = ir.xi_counts[w];
                if (law.total == 0) continue;
                std::size_t tail = 0;
                for (const auto& [c, cnt] : law.freq)
                    if (static_cast<double>(c) >= k) tail += cnt;
                SummaryStat p = proportion(tail, law.total);
                if (p.mean >= row.empirical_sup) {
                    row.empirical_sup = p.mean;
                    row.se = p.se;
                }
            }
            row.violation = row.empirical_sup > row.markov_bound + 3.0 * row.se;
            rows.push_back(row);
        }
    }
    return rows;
}

// ---------------------------------------------------------------------------
// multiplicity

MultiplicityReport multiplicity_stats(std::span<const PointMeasure> ensemble, double eps,
                                      std::span<const double> r_grid, Tolerance tol) {
    if (eps < 0.0) throw std::invalid_argument("multiplicity_stats: eps must be >= 0");
    MultiplicityReport out;
    out.intensity = estimate_intensity(ensemble);

    std::vector<PointMeasure> stars;
    stars.reserve(ensemble.size());
    for (const PointMeasure& z : ensemble) stars.push_back(z.simplify(eps));
    out.star_intensity = estimate_intensity(stars);
    if (!(out.star_intensity.mean > 0.0))
        throw std::domain_error("multiplicity_stats: star intensity is zero");

    out.m_est = out.intensity.mean / out.star_intensity.mean;
    double rel_a = out.intensity.mean > 0.0 ? out.intensity.se / out.intensity.mean : 0.0;
    double rel_b = out.star_intensity.se / out.star_intensity.mean;
    out.m_se = out.m_est * std::sqrt(rel_a * rel_a + rel_b * rel_b);

    // Palm gaps by anchoring at every point (multiplicities expanded); the
    // last stretch of the window is excluded so forward gaps stay observable
    std::vector<double> gaps;
    std::size_t zero_gaps = 0;
    for (const PointMeasure& z : ensemble) {
        double cutoff = z.window_lo() + 0.8 * z.window_length();
        const auto& atoms = z.atoms();
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if (atoms[i].t > cutoff) break;
            // copies within one atom anchor zero-length gaps
            for (std::int64_t c = 1; c < atoms[i].k; ++c) {
                gaps.push_back(0.0);
                ++zero_gaps;
            }
            if (i + 1 < atoms.size()) {
                double g = atoms[i + 1].t - atoms[i].t;
                gaps.push_back(g);
                if (g <= eps) ++zero_gaps;
            }
        }
    }
    if (gaps.size() < 2) throw std::domain_error("multiplicity_stats: too few gaps observed");

    SummaryStat zero_frac = proportion(zero_gaps, gaps.size());
    double m_target = (out.m_est - 1.0) / out.m_est;
    double m_target_se = out.m_se / (out.m_est * out.m_est);
    out.zero_gap_vs_m =
        make_report("multiplicity:gap_atom_at_0", zero_frac, {m_target, m_target_se, 0}, tol);

    EmpiricalDistribution gap_dist(gaps);
    SummaryStat mean_gap = summarize(gap_dist.samples());

    // survival identity with the multiplicity correction
    std::size_t nonzero = 0, above = 0;
    std::vector<std::optional<double>> tau1s;
    tau1s.reserve(ensemble.size());
    for (const PointMeasure& z : ensemble) tau1s.push_back(z.tau(1));
    for (double r : r_grid) {
        nonzero = above = 0;
        for (const auto& t : tau1s) {
            if (!t) continue;
            ++nonzero;
            if (*t > r) ++above;
        }
        SummaryStat lhs = proportion(above, nonzero);
        std::vector<double> ex;
        ex.reserve(gap_dist.size());
        for (double x : gap_dist.samples()) ex.push_back(std::max(x - r, 0.0));
        SummaryStat num = summarize(ex);
        double denom = out.m_est * mean_gap.mean;
        double rhs = num.mean / denom;
        double rhs_se = combined_se(num.se / denom, rhs * out.m_se / out.m_est);
        out.star_khinchin.push_back(
            make_report("multiplicity:star_khinchin:R=" + std::to_string(r), lhs,
                        {rhs, rhs_se, num.n}, tol));
    }
    return out;
}

} // namespace palmflow
