#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "palmflow/convergence.hpp"
#include "palmflow/ensemble.hpp"

#include <cmath>
#include <stdexcept>

using namespace palmflow;

TEST_CASE("lattice family: exact means, unit intensity, Kac relation") {
    auto family = lattice_cluster_family();
    std::vector<int> ns = {3, 8};
    FamilyResult fr = run_family(*family, ns, 3000, 10.0, 201, 2);
    REQUIRE(fr.per_n.size() == 2);
    for (const auto& ir : fr.per_n) {
        CHECK(ir.mean_tau1_eta_exact);
        CHECK(ir.mean_tau1_eta.mean == doctest::Approx(1.0));
        CHECK(std::abs(ir.intensity.mean - 1.0) < 3.0 * ir.intensity.se + 1e-9);
        CHECK(ir.p_nonzero.mean == doctest::Approx(1.0)); // periodic: never empty
        // unit intensity: P(xi != 0) = I * E tau_1(eta)
        CHECK(std::abs(ir.p_nonzero.mean - ir.intensity.mean * ir.mean_tau1_eta.mean) <
              3.0 * ir.intensity.se + 1e-9);
        CHECK(ir.palm_source == "analytic");
        CHECK(ir.eta_central_mass.n > 0);
    }
    // Palm mass near the origin grows with n
    CHECK(fr.per_n[1].eta_central_mass.mean > fr.per_n[0].eta_central_mass.mean);
}

TEST_CASE("equivalence discrepancies shrink toward delta_0 for the lattice family") {
    auto family = lattice_cluster_family();
    std::vector<int> ns = {5, 20, 60};
    FamilyResult fr = run_family(*family, ns, 2000, 10.0, 202, 2);
    std::vector<double> grid = {0.5, 1.0};
    EquivalenceReport eq = check_equivalence(fr, limit_delta0(), grid, {});
    CHECK(eq.side_i_trending);
    CHECK(eq.side_ii_trending);
    REQUIRE(eq.reports.size() == grid.size() * ns.size() * 2);

    // invalid candidate law is rejected
    LimitLaw bad{"bad", [](double) { return 2.0; }, [](double r) { return 2.0 * r; }};
    CHECK_THROWS_AS(check_equivalence(fr, bad, grid, {}), std::invalid_argument);
}

TEST_CASE("constant poisson family matches its exponential limit") {
    auto family = poisson_family(1.0);
    std::vector<int> ns = {1, 2};
    FamilyResult fr = run_family(*family, ns, 4000, 12.0, 203, 2);
    for (const auto& ir : fr.per_n) {
        CHECK(std::abs(ir.intensity.mean - 1.0) < 3.0 * ir.intensity.se);
        CHECK(ir.mean_tau1_eta.mean == doctest::Approx(1.0)); // exact 1/lambda
        CHECK(ir.palm_source == "anchored");
    }
    std::vector<double> grid = {0.5, 1.0, 2.0};
    EquivalenceReport eq = check_equivalence(fr, limit_exponential(1.0), grid, {});
    for (const auto& r : eq.reports) CHECK(r.pass);

    TwoOfThreeReport t3 = two_of_three_report(fr, limit_poisson_process(1.0),
                                              limit_poisson_process(1.0));
    CHECK(t3.intensity_conv == Verdict::Holds);
    CHECK(t3.xi_conv == Verdict::Holds);
    // eta on a window through 0 is Poisson plus the anchor atom; compare only
    // the trend machinery here, the verdict pattern test lives on the lattice
    CHECK(t3.mass_bound_satisfied);
    CHECK_FALSE(t3.caveat.empty());
}

TEST_CASE("two-of-three verdict pattern for the lattice family") {
    auto family = lattice_cluster_family();
    std::vector<int> ns = {5, 40, 400};
    FamilyResult fr = run_family(*family, ns, 2000, 10.0, 204, 2);
    TwoOfThreeReport t3 = two_of_three_report(fr, limit_zero_process(), limit_undeclared());
    CHECK(t3.intensity_conv == Verdict::Fails); // I = 1 does not converge to 0
    CHECK(t3.xi_conv == Verdict::Holds);        // counts on fixed windows vanish
    CHECK(t3.eta_conv == Verdict::Fails);       // mass accumulates near the origin
    CHECK(t3.mass_bound_satisfied);             // eta[-1,1] >= min(floor(1/a_n), n) samplewise
}

TEST_CASE("tightness diagnostic never flags the Markov bound") {
    auto family = poisson_family(1.0);
    std::vector<int> ns = {1};
    FamilyResult fr = run_family(*family, ns, 3000, 12.0, 205, 2);
    std::vector<double> ks = {5.0, 20.0};
    auto rows = tightness_diagnostic(fr, ks);
    REQUIRE_FALSE(rows.empty());
    for (const auto& row : rows) {
        CHECK_FALSE(row.violation);
        CHECK(row.empirical_sup <= 1.0);
        if (row.k == 20.0 && row.window_hi - row.window_lo <= 2.0)
            CHECK(row.markov_bound <= 0.1 + 1e-12);
    }
}

TEST_CASE("multiplicity statistics") {
    Rng seeder(206);
    SUBCASE("poisson ensembles are simple") {
        std::vector<PointMeasure> ensemble;
        for (int i = 0; i < 2000; ++i)
            ensemble.push_back(make_poisson(1.0, seeder, 0.0, 20.0));
        std::vector<double> grid = {0.5, 1.0};
        MultiplicityReport mr = multiplicity_stats(ensemble, 1e-9, grid, {});
        CHECK(mr.m_est == doctest::Approx(1.0).epsilon(0.01));
        CHECK(mr.m_est >= 1.0 - mr.m_se);
        CHECK(mr.zero_gap_vs_m.pass);
        for (const auto& r : mr.star_khinchin) CHECK(r.pass);
    }
    SUBCASE("collapsed lattice clusters have mean multiplicity 2n+1") {
        LatticeClusterParams p{5, 1e-6};
        std::vector<PointMeasure> ensemble;
        for (int i = 0; i < 400; ++i)
            ensemble.push_back(make_lattice_cluster(p, seeder, 0.0, 44.0));
        std::vector<double> grid = {1.0};
        MultiplicityReport mr = multiplicity_stats(ensemble, 1e-4, grid, {});
        CHECK(mr.m_est == doctest::Approx(11.0).epsilon(0.02));
        CHECK(mr.zero_gap_vs_m.pass);
        // with eps = 0 the atoms are distinct and nothing collapses
        MultiplicityReport simple = multiplicity_stats(ensemble, 0.0, grid, {});
        CHECK(simple.m_est == doctest::Approx(1.0));
    }
    SUBCASE("empty star process is an error") {
        std::vector<PointMeasure> empties(5, PointMeasure(0.0, 5.0, {}));
        std::vector<double> grid = {1.0};
        CHECK_THROWS_AS(multiplicity_stats(empties, 1e-9, grid, {}), std::domain_error);
    }
}

TEST_CASE("suspension family runs through the rescaled path") {
    auto family = suspension_family(
        "rotation_shrinking",
        [](int n) {
            return std::make_pair(make_rotation(0.41421356),
                                  rotation_interval_target(0.0, 0.5 / n));
        },
        true);
    std::vector<int> ns = {2, 4};
    FamilyResult fr = run_family(*family, ns, 2000, 8.0, 207, 2);
    for (const auto& ir : fr.per_n) {
        CHECK(std::abs(ir.intensity.mean - 1.0) < 3.0 * ir.intensity.se); // rescaling contract
        CHECK(ir.palm_source == "returns");
        CHECK(ir.eta_central_mass.n == 0); // one-sided observations
    }
}
