#pragma once

#include "palmflow/base_system.hpp"
#include "palmflow/empirical.hpp"
#include "palmflow/palm.hpp"
#include "palmflow/point_measure.hpp"
#include "palmflow/systems_zoo.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace palmflow {

// count distribution snapshot over one fixed interval
struct CountLaw {
    double lo = 0.0;
    double hi = 0.0;
    std::map<std::int64_t, std::size_t> freq;
    std::size_t total = 0;

    double prob(std::int64_t k) const {
        auto it = freq.find(k);
        return total == 0 || it == freq.end()
                   ? 0.0
                   : static_cast<double>(it->second) / static_cast<double>(total);
    }
};

struct FamilyIndexResult {
    int n = 0;
    SummaryStat intensity;
    SummaryStat p_nonzero;
    EmpiricalDistribution tau1_xi; // conditional on xi != 0
    EmpiricalDistribution tau1_eta;
    SummaryStat mean_tau1_eta;
    bool mean_tau1_eta_exact = false;
    std::vector<CountLaw> xi_counts;
    std::vector<CountLaw> eta_counts;
    SummaryStat eta_central_mass;                 // eta mass in [-1, 1]
    double eta_central_mass_min = 0.0;            // min over samples
    std::optional<double> eta_central_mass_bound; // declared lower bound, when any
    std::size_t samples = 0;
    std::size_t censored = 0;
    std::string palm_source;
};

struct FamilyResult {
    std::string family;
    std::vector<FamilyIndexResult> per_n;
};

// A sequence of processes indexed by n, sampled both under the stationary law
// and under its Palm distribution.
class ProcessFamily {
public:
    virtual ~ProcessFamily() = default;
    virtual std::string name() const = 0;
    virtual PointMeasure sample_entry(int n, double window_lo, double window_hi, Rng& rng) const = 0;
    virtual PointMeasure sample_palm(int n, double window_lo, double window_hi, Rng& rng) const = 0;
    virtual std::string palm_source() const = 0;
    // entry observations may be one-sided (suspensions observe (0, hi] only)
    virtual bool two_sided() const = 0;
    // minimal usable horizon at index n (e.g. one lattice period plus slack)
    virtual double min_horizon(int n) const { return 0.0; }
    virtual std::optional<double> exact_mean_tau1(int n) const { return std::nullopt; }
    virtual std::optional<double> palm_central_mass_bound(int n) const { return std::nullopt; }
};

std::unique_ptr<ProcessFamily> lattice_cluster_family(std::function<double(int)> a_of_n = {});
std::unique_ptr<ProcessFamily> poisson_family(double lambda);
// suspension family: n -> (system, target); entries rescaled to unit intensity
std::unique_ptr<ProcessFamily> suspension_family(
    std::string name, std::function<std::pair<BaseSystem, TargetSet>(int)> builder,
    bool rescale);

// fixed window family used as the convergence-in-distribution proxy
const std::vector<std::pair<double, double>>& proxy_windows();

FamilyResult run_family(const ProcessFamily& family, std::span<const int> n_list,
                        std::size_t samples, double horizon, std::uint64_t seed, int jobs);

// candidate limit law rho on [0, inf), supplied analytically by the caller
struct LimitLaw {
    std::string name;
    std::function<double(double)> survival;   // F(R) = rho(R, inf)
    std::function<double(double)> survival_integral; // int_0^R F(u) du
};
LimitLaw limit_delta0();
LimitLaw limit_exponential(double rate);

struct EquivalenceReport {
    // two reports per (n, R): side (i) entry-time based, side (ii) return-time based
    std::vector<IdentityReport> reports;
    bool side_i_trending = false;  // discrepancy non-increasing along n at every R
    bool side_ii_trending = false;
};
EquivalenceReport check_equivalence(const FamilyResult& fr, const LimitLaw& rho,
                                    std::span<const double> r_grid, Tolerance tol = {});

enum class Verdict { Holds, Fails, Unknown };
const char* to_string(Verdict v);

// declared limit for the count-law proxy; an empty pmf means "no limit
// declared" (e.g. the sequence is expected to lose local finiteness)
struct LimitProcessLaw {
    std::string name;
    std::optional<double> intensity;
    std::function<double(double window_len, std::int64_t k)> count_pmf;
};
LimitProcessLaw limit_zero_process();
LimitProcessLaw limit_poisson_process(double lambda);
LimitProcessLaw limit_undeclared();

struct TwoOfThreeReport {
    Verdict intensity_conv = Verdict::Unknown; // (i)
    Verdict xi_conv = Verdict::Unknown;        // (ii), count-law proxy
    Verdict eta_conv = Verdict::Unknown;       // (iii), count-law proxy
    std::vector<double> intensity_by_n;
    std::vector<double> xi_tv_by_n;  // max TV distance to the declared count laws
    std::vector<double> eta_tv_by_n;
    std::vector<double> eta_central_mass_by_n;
    bool mass_bound_satisfied = true; // declared eta-mass lower bounds hold samplewise
    std::string caveat;
};
TwoOfThreeReport two_of_three_report(const FamilyResult& fr, const LimitProcessLaw& xi_limit,
                                     const LimitProcessLaw& eta_limit);

struct TightnessRow {
    double window_lo = 0.0;
    double window_hi = 0.0;
    double k = 0.0;
    double markov_bound = 0.0;
    double empirical_sup = 0.0; // sup over n of P(xi_n B >= K)
    double se = 0.0;
    bool violation = false;
};
std::vector<TightnessRow> tightness_diagnostic(const FamilyResult& fr,
                                               std::span<const double> k_grid);

struct MultiplicityReport {
    double m_est = 0.0;
    double m_se = 0.0;
    SummaryStat intensity;
    SummaryStat star_intensity;
    IdentityReport zero_gap_vs_m;              // Palm gap mass at 0 against (m-1)/m
    std::vector<IdentityReport> star_khinchin; // multiplicity-corrected survival identity
};
MultiplicityReport multiplicity_stats(std::span<const PointMeasure> ensemble, double eps,
                                      std::span<const double> r_grid, Tolerance tol = {});

} // namespace palmflow
