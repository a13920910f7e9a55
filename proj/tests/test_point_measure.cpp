#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "palmflow/point_measure.hpp"
#include "palmflow/rng.hpp"

#include <stdexcept>

using namespace palmflow;

TEST_CASE("construction validates the invariants") {
    CHECK_NOTHROW(PointMeasure(0.0, 10.0, {{1.0, 1}, {2.0, 3}}));
    CHECK_THROWS_AS(PointMeasure(5.0, 5.0, {}), std::invalid_argument);   // empty window
    CHECK_THROWS_AS(PointMeasure(0.0, 10.0, {{2.0, 1}, {1.0, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(PointMeasure(0.0, 10.0, {{1.0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(PointMeasure(0.0, 10.0, {{0.0, 1}}), std::invalid_argument);  // t <= lo
    CHECK_THROWS_AS(PointMeasure(0.0, 10.0, {{11.0, 1}}), std::invalid_argument); // t > hi
    CHECK_NOTHROW(PointMeasure(0.0, 10.0, {{10.0, 1}})); // hi itself is included
}

TEST_CASE("count sums multiplicities over half-open intervals") {
    PointMeasure z(0.0, 10.0, {{1.0, 1}, {2.0, 3}});
    CHECK(z.count(0.0, 1.5) == 1);
    CHECK(z.count(1.5, 10.0) == 3);
    CHECK(z.count(1.0, 2.0) == 3); // (1, 2] excludes the atom at 1
    CHECK(z.total() == 4);
    PointMeasure empty(0.0, 10.0, {});
    CHECK(empty.count(0.0, 10.0) == 0);
    CHECK_THROWS_WITH_AS(z.count(-1.0, 5.0), doctest::Contains("window exceeded"),
                         std::out_of_range);
    CHECK_THROWS_AS(z.count(0.0, 11.0), std::out_of_range);
}

TEST_CASE("count is additive over adjacent intervals") {
    PointMeasure z(0.0, 10.0, {{0.5, 2}, {3.0, 1}, {7.5, 4}});
    for (double b : {0.5, 1.0, 3.0, 6.9, 10.0})
        CHECK(z.count(0.0, b) + z.count(b, 10.0) == z.count(0.0, 10.0));
}

TEST_CASE("tau follows the tau_0 <= 0 < tau_1 convention") {
    PointMeasure z(-5.0, 5.0, {{-1.0, 1}, {0.5, 1}, {2.0, 1}});
    CHECK(z.tau(0) == -1.0);
    CHECK(z.tau(1) == 0.5);
    CHECK(z.tau(2) == 2.0);
    CHECK_FALSE(z.tau(3).has_value());
    CHECK_FALSE(z.tau(-1).has_value());

    PointMeasure m(-1.0, 5.0, {{0.5, 2}});
    CHECK(m.tau(1) == 0.5);
    CHECK(m.tau(2) == 0.5); // multiplicity occupies consecutive indices
    CHECK_FALSE(m.tau(3).has_value());
    CHECK_FALSE(m.tau(0).has_value());

    PointMeasure s(-1.0, 5.0, {{0.5, 1}});
    CHECK_FALSE(s.tau(2).has_value()); // censored by the window

    // an atom exactly at 0 is non-positive, hence tau_0
    PointMeasure at0(-1.0, 5.0, {{-0.5, 1}, {0.0, 1}, {1.0, 1}});
    CHECK(at0.tau(0) == 0.0);
    CHECK(at0.tau(-1) == -0.5);
    CHECK(at0.tau(1) == 1.0);
}

TEST_CASE("tau is weakly increasing wherever defined") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Atom> atoms;
        double t = -10.0;
        for (int i = 0; i < 12; ++i) {
            t += rng.uniform(0.01, 2.0);
            atoms.push_back({t, static_cast<std::int64_t>(1 + rng.below(3))});
        }
        PointMeasure z(-10.0, t + 1.0, atoms);
        std::optional<double> prev;
        for (int j = -5; j <= 8; ++j) {
            auto v = z.tau(j);
            if (v && prev) CHECK(*v >= *prev);
            if (v) prev = v;
        }
        auto t0 = z.tau(0);
        auto t1 = z.tau(1);
        if (t0 && t1) {
            CHECK(*t0 <= 0.0);
            CHECK(*t1 > 0.0);
        }
    }
}

TEST_CASE("shift translates atoms and window") {
    PointMeasure z(0.0, 10.0, {{3.0, 1}});
    PointMeasure s = z.shift(1.0);
    CHECK(s.window_lo() == -1.0);
    CHECK(s.window_hi() == 9.0);
    REQUIRE(s.atoms().size() == 1);
    CHECK(s.atoms()[0].t == 2.0);

    CHECK(z.shift(0.0) == z);
    PointMeasure two_step = z.shift(0.7).shift(-0.2); // group law, up to rounding
    PointMeasure one_step = z.shift(0.5);
    CHECK(two_step.atoms()[0].t == doctest::Approx(one_step.atoms()[0].t).epsilon(1e-12));
    CHECK(two_step.window_lo() == doctest::Approx(one_step.window_lo()).epsilon(1e-12));
}

TEST_CASE("shift group law holds atom-for-atom on random measures") {
    Rng rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Atom> atoms;
        double t = 0.0;
        for (int i = 0; i < 6; ++i) {
            t += rng.uniform(0.1, 1.0);
            atoms.push_back({t, 1});
        }
        PointMeasure z(0.0, 10.0, atoms);
        double u = rng.uniform(-3.0, 3.0), v = rng.uniform(-3.0, 3.0);
        PointMeasure a = z.shift(u).shift(v);
        PointMeasure b = z.shift(u + v);
        REQUIRE(a.atoms().size() == b.atoms().size());
        for (std::size_t i = 0; i < a.atoms().size(); ++i)
            CHECK(a.atoms()[i].t == doctest::Approx(b.atoms()[i].t).epsilon(1e-12));
    }
}

TEST_CASE("restrict_positive drops non-positive atoms") {
    PointMeasure z(-5.0, 10.0, {{-1.0, 1}, {2.0, 1}});
    PointMeasure r = z.restrict_positive();
    CHECK(r.window_lo() == 0.0);
    CHECK(r.window_hi() == 10.0);
    REQUIRE(r.atoms().size() == 1);
    CHECK(r.atoms()[0].t == 2.0);

    PointMeasure pos(0.0, 10.0, {{2.0, 1}, {3.0, 2}});
    CHECK(pos.restrict_positive() == pos);

    PointMeasure neg(-2.0, -0.5, {{-1.0, 1}});
    CHECK_THROWS_WITH_AS(neg.restrict_positive(), doctest::Contains("empty window"),
                         std::domain_error);
}

TEST_CASE("simplify collapses multiplicities and near-coincident clusters") {
    PointMeasure m(0.0, 10.0, {{1.0, 3}});
    PointMeasure s = m.simplify(0.0);
    REQUIRE(s.atoms().size() == 1);
    CHECK(s.atoms()[0] == Atom{1.0, 1});

    PointMeasure cluster(0.0, 10.0, {{1.0, 1}, {1.0 + 1e-9, 1}, {5.0, 1}});
    PointMeasure c = cluster.simplify(1e-6);
    REQUIRE(c.atoms().size() == 2);
    CHECK(c.atoms()[0] == Atom{1.0, 1}); // representative = smallest time in the run
    CHECK(c.atoms()[1] == Atom{5.0, 1});

    PointMeasure wide(0.0, 10.0, {{1.0, 1}, {4.0, 1}, {9.0, 1}});
    CHECK(wide.simplify(0.5) == wide); // min gap > eps: no-op
}

TEST_CASE("simplify is idempotent, count-decreasing, and yields a simple measure") {
    Rng rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Atom> atoms;
        double t = 0.0;
        for (int i = 0; i < 10; ++i) {
            t += rng.bernoulli(0.5) ? 1e-8 : rng.uniform(0.1, 1.0);
            atoms.push_back({t, static_cast<std::int64_t>(1 + rng.below(3))});
        }
        PointMeasure z(0.0, t + 1.0, atoms);
        double eps = 1e-6;
        PointMeasure s = z.simplify(eps);
        CHECK(s.is_simple());
        CHECK(s.total() <= z.total());
        CHECK(s.simplify(eps) == s);
    }
}
