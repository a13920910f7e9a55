#pragma once

#include "palmflow/base_system.hpp"
#include "palmflow/point_measure.hpp"

#include <string>
#include <utility>
#include <vector>

namespace palmflow {

// roof r(y) = level + amp * cos(2 pi y); must stay positive
struct RoofSpec {
    double level = 1.0;
    double amp = 0.0;
};

// circle rotation y -> y + alpha mod 1, mu uniform
BaseSystem make_rotation(double alpha, RoofSpec roof = {});
TargetSet rotation_interval_target(double a, double b); // D = [a, b) in [0,1)

// left shift on fair coin sequences, r = 1 (the doubling map, kept exact)
BaseSystem make_bernoulli_shift();
TargetSet bernoulli_cylinder_target(int depth); // first `depth` symbols equal 0

// the non-ergodic shear (x1, x2) -> (x1 + x2, x2) on the 2-torus, r = 1
BaseSystem make_torus_shear();
TargetSet shear_hstrip_target(double height);  // T x [0, h), T-invariant
TargetSet shear_vstrip_target(double width);   // [0, w) x T
TargetSet shear_box_target(double width, double height);

// two disjoint circles of lengths ell0, ell1; T = identity, mu{i} = q_i
struct TwoCircleParams {
    double q1;
    double ell0;
    double ell1;
};
BaseSystem make_two_circle(const TwoCircleParams& p);
TargetSet two_circle_target_one(const TwoCircleParams& p); // D = {1}
TargetSet two_circle_target_all();                         // D = Y

enum class TwoCircleTarget { One, All };

// exact quantities for the two-circle system
struct OracleReport {
    double p1;               // nu-mass of the second circle
    double intensity;        // I_xi
    double mean_return;      // E tau_1(eta)
    double p_nonzero;        // P(xi != 0)
    std::vector<std::pair<double, double>> return_law; // (value of tau_1(eta), prob)
};
OracleReport two_circle_oracle(const TwoCircleParams& p, TwoCircleTarget target);

// periodic cluster processes: clusters of 2n+1 points at spacing a_n,
// cluster centers on a randomly shifted lattice of period 2n+1
struct LatticeClusterParams {
    int n;
    double a; // in (0, 1)
};
PointMeasure make_lattice_cluster(const LatticeClusterParams& p, Rng& rng, double window_lo,
                                  double window_hi);
PointMeasure lattice_cluster_palm(const LatticeClusterParams& p, Rng& rng, double window_lo,
                                  double window_hi);

// exact two-atom law of tau_1 under the cluster Palm distribution
struct LatticeClusterOracle {
    double p_small;   // P(tau_1 = a)
    double p_large;   // P(tau_1 = 2n+1 - 2na)
    double gap_small; // a
    double gap_large; // 2n+1 - 2na
    double mean_tau1; // equals 1 for any admissible (n, a)
};
LatticeClusterOracle lattice_cluster_oracle(const LatticeClusterParams& p);

// homogeneous Poisson realization on (lo, hi] via exponential gaps
PointMeasure make_poisson(double lambda, Rng& rng, double window_lo, double window_hi);

struct ZooCatalogEntry {
    std::string id;
    std::string summary;
    std::vector<std::pair<std::string, std::string>> params; // name -> description
};
std::vector<ZooCatalogEntry> zoo_catalog();

} // namespace palmflow
