// Acceptance suite: one line per criterion, every tolerance pinned here.
// Exit status 0 iff every criterion passes.

#include "palmflow/convergence.hpp"
#include "palmflow/empirical.hpp"
#include "palmflow/ensemble.hpp"
#include "palmflow/experiments.hpp"
#include "palmflow/palm.hpp"
#include "palmflow/suspension.hpp"
#include "palmflow/systems_zoo.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace palmflow;

namespace {

const TwoCircleParams kAB{0.5, 1.0, 2.0};
constexpr std::uint64_t kSeed = 20260824;
const int kJobs = []() {
    const char* env = std::getenv("PALMFLOW_JOBS");
    return env ? std::max(1, std::atoi(env)) : 4;
}();

struct Checker {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << (detail.str().empty() ? "" : "; ") << what;
        }
    }
    void within(double got, double want, double tol, const std::string& what) {
        expect(std::abs(got - want) <= tol,
               what + ": got " + std::to_string(got) + ", want " + std::to_string(want) +
                   " +- " + std::to_string(tol));
    }
};

std::vector<PointMeasure> entries(const ProcessSource& src, std::size_t n, double horizon,
                                  std::uint64_t seed) {
    return parallel_map<PointMeasure>(
        n, kJobs, seed, "acceptance_entry",
        [&](std::size_t, Rng& rng) { return src.sample_entry(rng, horizon); },
        PointMeasure(0.0, horizon, {}));
}

// --- criterion 1: two-circle exact suite -----------------------------------
bool criterion_two_circle(Checker& c) {
    const std::size_t n = 100000;
    OracleReport one = two_circle_oracle(kAB, TwoCircleTarget::One);
    OracleReport all = two_circle_oracle(kAB, TwoCircleTarget::All);
    c.within(one.p1, 2.0 / 3.0, 1e-12, "p1");
    c.within(one.intensity, 1.0 / 3.0, 1e-12, "I (D={1})");
    c.within(one.mean_return, 2.0, 1e-12, "E tau1(eta) (D={1})");
    c.within(all.intensity, 2.0 / 3.0, 1e-12, "I (D=Y)");
    c.within(all.mean_return, 1.5, 1e-12, "E tau1(eta) (D=Y)");

    BaseSystem sys = make_two_circle(kAB);
    TargetSet d_one = two_circle_target_one(kAB);
    TargetSet d_all = two_circle_target_all();

    // deterministic return lattice, exact
    PointMeasure ret = return_process(sys, d_one, BaseState{1}, 9.0);
    c.expect(ret.atoms().size() == 4 && std::abs(ret.atoms()[0].t - 2.0) < 1e-12 &&
                 std::abs(ret.atoms()[3].t - 8.0) < 1e-12,
             "return lattice 2Z");

    // sampled probabilities within 3 binomial stderr
    Rng rng = Rng::stream(kSeed, "acc1", 0);
    std::size_t hits1 = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (std::get<int>(sample_nu(sys, rng).y) == 1) ++hits1;
    SummaryStat p1 = proportion(hits1, n);
    c.within(p1.mean, 2.0 / 3.0, 3.0 * p1.se, "sampled p1");

    ProcessSource src = suspension_source(sys, d_one);
    auto ens = entries(src, n, 30.0, kSeed + 1);
    SummaryStat inten = estimate_intensity(ens);
    c.within(inten.mean, 1.0 / 3.0, 3.0 * inten.se, "sampled I (D={1})");
    std::size_t nonzero = 0;
    for (const auto& z : ens)
        if (!z.empty()) ++nonzero;
    SummaryStat pnz = proportion(nonzero, n);
    c.within(pnz.mean, 2.0 / 3.0, 3.0 * pnz.se, "P(xi != 0)");
    // Kac identity: E tau1(eta) * I = P(xi != 0), with the exact lattice mean
    c.within(2.0 * inten.mean, pnz.mean, 3.0 * combined_se(2.0 * inten.se, pnz.se),
             "Kac identity");

    ProcessSource src_all = suspension_source(sys, d_all);
    SummaryStat inten_all = estimate_intensity(entries(src_all, n, 30.0, kSeed + 2));
    c.within(inten_all.mean, 2.0 / 3.0, 3.0 * inten_all.se, "sampled I (D=Y)");

    std::size_t short_ret = 0;
    Rng rng2 = Rng::stream(kSeed, "acc1b", 0);
    for (std::size_t i = 0; i < n; ++i) {
        BaseState y = sample_conditional(sys, d_all, rng2);
        PointMeasure r = return_process(sys, d_all, y, 5.0);
        double t1 = *r.tau(1);
        c.expect(std::abs(t1 - 1.0) < 1e-12 || std::abs(t1 - 2.0) < 1e-12,
                 "return support {1,2}");
        if (std::abs(t1 - 1.0) < 1e-12) ++short_ret;
    }
    SummaryStat phalf = proportion(short_ret, n);
    c.within(phalf.mean, 0.5, 3.0 * phalf.se, "P(tau1(eta) = 1)");
    return c.ok;
}

// --- criterion 2: lattice-cluster exact suite ------------------------------
bool criterion_lattice(Checker& c) {
    const std::size_t n = 100000;
    LatticeClusterParams p{5, 1.0 / 6.0};
    LatticeClusterOracle o = lattice_cluster_oracle(p);
    c.within(o.mean_tau1, 1.0, 1e-12, "E tau1(eta_5) exact");
    c.within(o.p_small, 10.0 / 11.0, 1e-12, "oracle p_small");
    c.within(o.p_large, 1.0 / 11.0, 1e-12, "oracle p_large");
    c.within(o.gap_large, 28.0 / 3.0, 1e-12, "oracle large gap");

    Rng rng = Rng::stream(kSeed, "acc2", 0);
    std::size_t small = 0, other = 0;
    for (std::size_t i = 0; i < n; ++i) {
        PointMeasure eta = lattice_cluster_palm(p, rng, -12.0, 12.0);
        double t1 = *eta.tau(1);
        if (std::abs(t1 - o.gap_small) < 1e-9)
            ++small;
        else if (std::abs(t1 - o.gap_large) < 1e-9)
            ;
        else
            ++other;
    }
    c.expect(other == 0, "tau1 support is the two oracle atoms");
    SummaryStat ps = proportion(small, n);
    c.within(ps.mean, 10.0 / 11.0, 3.0 * ps.se, "P(tau1 = 1/6)");
    c.within(1.0 - ps.mean, 1.0 / 11.0, 3.0 * ps.se, "P(tau1 = 28/3)");

    for (int i = 0; i < 100; ++i) {
        PointMeasure xi = make_lattice_cluster(p, rng, 0.0, 33.0);
        c.expect(xi.count(0.0, 11.0) == 11 && xi.count(11.0, 22.0) == 11,
                 "11 atoms per period");
    }
    return c.ok;
}

// --- criterion 3: Kac on Bernoulli cylinders -------------------------------
bool criterion_kac_bernoulli(Checker& c) {
    const std::size_t n = 100000;
    BaseSystem sys = make_bernoulli_shift();
    for (int k : {2, 3, 4, 6, 8}) {
        TargetSet cyl = bernoulli_cylinder_target(k);
        double horizon = 40.0 * std::pow(2.0, k);
        PalmEstimate est =
            palm_from_returns(sys, cyl, pf_tau(1, horizon), n, horizon, kSeed + k, kJobs);
        double want = std::pow(2.0, k);
        c.within(est.stat.mean, want, 3.0 * est.stat.se,
                 "mean return, depth " + std::to_string(k));
        c.expect(est.censored * 100 < n, "censoring under 1%, depth " + std::to_string(k));
    }
    return c.ok;
}

// --- criteria 4/5: Palm-Khinchin and the higher-order identity -------------
std::vector<double> grid20(double step) {
    std::vector<double> g;
    for (int i = 1; i <= 20; ++i) g.push_back(step * i);
    return g;
}

bool criterion_khinchin(Checker& c) {
    const std::size_t n = 100000;
    const Tolerance tol{.abs = 0.02};

    BaseSystem rot = make_rotation(0.41421356237309515);
    ProcessSource rot_src = suspension_source(rot, rotation_interval_target(0.0, 0.05));
    for (const auto& r : palm_khinchin_check(rot_src, grid20(2.0), n, 250.0, kSeed + 40, kJobs,
                                             tol))
        c.expect(r.pass, r.name + " |LHS-RHS| <= 0.02");

    ProcessSource poi = poisson_source(1.0);
    for (const auto& r : palm_khinchin_check(poi, grid20(0.25), n, 30.0, kSeed + 41, kJobs, tol))
        c.expect(r.pass, r.name + " |LHS-RHS| <= 0.02");
    return c.ok;
}

bool criterion_higher_order(Checker& c) {
    const std::size_t n = 100000;
    const Tolerance tol{.abs = 0.03};

    BaseSystem rot = make_rotation(0.41421356237309515);
    ProcessSource rot_src = suspension_source(rot, rotation_interval_target(0.0, 0.05));
    ProcessSource poi = poisson_source(1.0);
    for (int j : {2, 3}) {
        for (const auto& r :
             higher_order_check(rot_src, j, grid20(2.0), n, 400.0, kSeed + 50 + j, kJobs, tol))
            c.expect(r.pass, r.name + " |LHS-RHS| <= 0.03");
        for (const auto& r :
             higher_order_check(poi, j, grid20(0.25), n, 40.0, kSeed + 55 + j, kJobs, tol))
            c.expect(r.pass, r.name + " |LHS-RHS| <= 0.03");
    }
    return c.ok;
}

// --- criterion 6: inversion formula ----------------------------------------
bool criterion_inversion(Checker& c) {
    const std::size_t n = 100000;
    std::vector<double> grid = {0.5, 1.0, 2.0};

    BaseSystem tc = make_two_circle(kAB);
    for (const auto& r : inversion_check(suspension_source(tc, two_circle_target_one(kAB)), grid,
                                         n, 30.0, kSeed + 60, kJobs))
        c.expect(r.pass, "two_circle " + r.name);

    BaseSystem shear = make_torus_shear();
    for (const auto& r : inversion_check(suspension_source(shear, shear_hstrip_target(0.5)), grid,
                                         n, 20.0, kSeed + 61, kJobs))
        c.expect(r.pass, "shear " + r.name);

    for (const auto& r : inversion_check(poisson_source(1.0), grid, n, 30.0, kSeed + 62, kJobs))
        c.expect(r.pass, "poisson " + r.name);
    return c.ok;
}

// --- criterion 7: cross-estimator agreement on every suspension system ------
bool criterion_palm_compare(Checker& c) {
    struct Case {
        std::string label;
        BaseSystem sys;
        TargetSet target;
        double read_radius;
        double horizon;
        std::size_t samples;
        double void_len; // kept off the lattice of exact return times so the
                         // void indicator is not evaluated on an atom boundary
    };
    std::vector<Case> cases;
    cases.push_back({"rotation", make_rotation(0.41421356237309515),
                     rotation_interval_target(0.0, 0.05), 70.0, 160.0, 30000, 1.0});
    cases.push_back({"bernoulli", make_bernoulli_shift(), bernoulli_cylinder_target(3), 90.0,
                     150.0, 30000, 1.5});
    cases.push_back({"shear", make_torus_shear(), shear_hstrip_target(0.5), 4.0, 12.0, 30000,
                     0.5});
    cases.push_back({"two_circle", make_two_circle(kAB), two_circle_target_one(kAB), 5.0, 16.0,
                     30000, 1.0});
    int tag = 70;
    for (auto& k : cases) {
        std::vector<PalmFunctional> family = {pf_tau(1, k.read_radius),
                                              pf_min_tau1(10.0, k.read_radius),
                                              pf_void(k.void_len, k.read_radius)};
        for (const auto& r : palm_compare(k.sys, k.target, family, k.samples, k.horizon,
                                          kSeed + tag, kJobs))
            c.expect(r.pass, k.label + " " + r.name);
        ++tag;
    }
    return c.ok;
}

// --- criterion 8: Slivnyak / DKW -------------------------------------------
bool criterion_slivnyak(Checker& c) {
    auto reports = slivnyak_check(1.0, 100000, 30.0, kSeed + 80, kJobs, 1e-3);
    for (const auto& r : reports) c.expect(r.pass, r.name);
    return c.ok;
}

// --- criterion 9: lattice convergence suite --------------------------------
bool criterion_converge(Checker& c) {
    auto family = lattice_cluster_family(); // a_n = 1/(n+1)
    std::vector<int> ns = {10, 100, 1000};
    FamilyResult fr = run_family(*family, ns, 2000, 10.0, kSeed + 90, kJobs);

    std::vector<double> grid = {0.5, 1.0, 2.0};
    EquivalenceReport eq = check_equivalence(fr, limit_delta0(), grid, {});
    c.expect(eq.side_i_trending, "side (i) discrepancy decreases along n");
    c.expect(eq.side_ii_trending, "side (ii) discrepancy decreases along n");
    for (const auto& r : eq.reports)
        if (r.name.find(":n=1000:") != std::string::npos)
            c.expect(r.discrepancy < 0.05, r.name + " discrepancy < 0.05");

    TwoOfThreeReport t3 = two_of_three_report(fr, limit_zero_process(), limit_undeclared());
    c.expect(t3.xi_conv == Verdict::Holds, "(ii) holds: xi_n count laws -> 0");
    c.expect(t3.intensity_conv == Verdict::Fails, "(i) fails: I stays at 1");
    c.expect(t3.eta_conv == Verdict::Fails, "(iii) fails: eta_n mass accumulates");
    c.expect(t3.mass_bound_satisfied, "eta_n[-1,1] >= min(floor(1/a_n), n)");
    return c.ok;
}

// --- criterion 10: non-ergodic shear sanity --------------------------------
bool criterion_shear(Checker& c) {
    BaseSystem shear = make_torus_shear();
    TargetSet strip = shear_hstrip_target(0.5);
    HitProbability z1 = estimate_hit_probability(shear, strip, 100000, 50, kSeed + 100, kJobs);
    c.within(z1.stat.mean, 0.5, 3.0 * z1.stat.se, "mu(Z^1) for the invariant strip");
    HitProbability zi =
        estimate_infinite_hit_probability(shear, strip, 100000, 50, 10, kSeed + 101, kJobs);
    c.within(zi.stat.mean, 0.5, 3.0 * zi.stat.se, "mu(Z^inf) for the invariant strip");

    Rng rng = Rng::stream(kSeed, "acc10", 0);
    for (int i = 0; i < 1000; ++i) {
        BaseState y = sample_conditional(shear, strip, rng);
        PointMeasure r = return_process(shear, strip, y, 3.0);
        c.expect(std::abs(*r.tau(1) - 1.0) < 1e-12, "mean return exactly 1");
    }

    TargetSet vstrip = shear_vstrip_target(0.1);
    HitProbability zv = estimate_hit_probability(shear, vstrip, 20000, 10000, kSeed + 102, kJobs);
    c.expect(zv.stat.mean >= 0.99,
             "mu(Z^1) >= 0.99 for the vertical strip, got " + std::to_string(zv.stat.mean));
    return c.ok;
}

// --- criterion 11: determinism across worker counts ------------------------
bool criterion_determinism(Checker& c) {
#ifndef PALMFLOW_CLI_PATH
    c.expect(false, "CLI path not compiled in");
    return c.ok;
#else
    namespace fs = std::filesystem;
    fs::path base = fs::temp_directory_path() / "palmflow_acceptance_det";
    fs::remove_all(base);
    fs::create_directories(base);
    fs::path cfg = base / "exp.cfg";
    std::ofstream(cfg) << "kind = khinchin\nsystem = two_circle\ntarget = one\n"
                       << "samples = 5000\nhorizon = 25\nr_grid = 0.5,1,2\nseed = 99\n";
    auto run = [&](int jobs, const std::string& sub) {
        std::string cmd = std::string("\"") + PALMFLOW_CLI_PATH + "\" run \"" + cfg.string() +
                          "\" --jobs " + std::to_string(jobs) + " --out \"" +
                          (base / sub).string() + "\"";
        return std::system(cmd.c_str());
    };
    int rc1 = run(1, "j1");
    int rc4 = run(4, "j4");
    c.expect(rc1 == 0 && rc4 == 0, "CLI runs exit 0");
    auto load = [&](const std::string& sub) {
        std::ifstream in(base / sub / "report.json");
        nlohmann::json j = nlohmann::json::parse(in);
        j.erase("generated");
        return j.dump();
    };
    if (rc1 == 0 && rc4 == 0)
        c.expect(load("j1") == load("j4"), "report.json identical modulo timestamp");
    fs::remove_all(base);
    return c.ok;
#endif
}

} // namespace

int main() {
    struct Criterion {
        std::string name;
        std::function<bool(Checker&)> fn;
    };
    std::vector<Criterion> criteria = {
        {"1 two-circle exact suite", criterion_two_circle},
        {"2 lattice-cluster exact suite", criterion_lattice},
        {"3 Kac formula on Bernoulli cylinders", criterion_kac_bernoulli},
        {"4 Palm-Khinchin equations", criterion_khinchin},
        {"5 higher-order identity (j = 2, 3)", criterion_higher_order},
        {"6 inversion formula", criterion_inversion},
        {"7 cross-estimator Palm agreement", criterion_palm_compare},
        {"8 Slivnyak / DKW band", criterion_slivnyak},
        {"9 lattice convergence suite", criterion_converge},
        {"10 non-ergodic shear sanity", criterion_shear},
        {"11 determinism across worker counts", criterion_determinism},
    };

    int failures = 0;
    for (auto& cr : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Checker c;
        bool ok = false;
        try {
            ok = cr.fn(c);
        } catch (const std::exception& e) {
            c.detail << "exception: " << e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << "criterion " << cr.name << ": " << (ok ? "PASS" : "FAIL") << "  ("
                  << secs << " s)";
        if (!ok) {
            std::cout << "  [" << c.detail.str() << "]";
            ++failures;
        }
        std::cout << std::endl;
    }
    if (failures) std::cout << failures << " criterion(s) failed" << std::endl;
    return failures == 0 ? 0 : 1;
}
