#include "palmflow/systems_zoo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace palmflow {

namespace {

double frac(double x) {
    double f = x - std::floor(x);
    return f < 1.0 ? f : 0.0;
}

} // namespace

BaseSystem make_rotation(double alpha, RoofSpec roof) {
    double inf = roof.level - std::abs(roof.amp);
    if (!(inf > 0.0)) throw std::invalid_argument("make_rotation: roof not positive");
    BaseSystem sys;
    sys.name = "rotation";
    sys.step = [alpha](const BaseState& y) -> BaseState { return frac(std::get<double>(y) + alpha); };
    sys.sample_mu = [](Rng& rng) -> BaseState { return rng.uniform(); };
    sys.roof = [roof](const BaseState& y) {
        return roof.level + roof.amp * std::cos(2.0 * std::numbers::pi * std::get<double>(y));
    };
    sys.inf_roof = inf;
    sys.mean_roof = roof.level; // the cosine integrates to zero over the circle
    sys.sup_roof = roof.level + std::abs(roof.amp);
    return sys;
}

TargetSet rotation_interval_target(double a, double b) {
    if (!(0.0 <= a && a < b && b <= 1.0))
        throw std::invalid_argument("rotation_interval_target: need 0 <= a < b <= 1");
    TargetSet d;
    d.name = "interval[" + std::to_string(a) + "," + std::to_string(b) + ")";
    d.member = [a, b](const BaseState& y) {
        double v = std::get<double>(y);
        return a <= v && v < b;
    };
    d.measure = b - a;
    d.sample_conditional = [a, b](Rng& rng) -> BaseState { return rng.uniform(a, b); };
    return d;
}

BaseSystem make_bernoulli_shift() {
    BaseSystem sys;
    sys.name = "bernoulli";
    sys.step = [](const BaseState& y) -> BaseState { return std::get<BitStream>(y).shifted(); };
    sys.sample_mu = [](Rng& rng) -> BaseState { return BitStream(Rng(rng.next())); };
    sys.roof = [](const BaseState&) { return 1.0; };
    sys.inf_roof = 1.0;
    sys.mean_roof = 1.0;
    sys.sup_roof = 1.0;
    return sys;
}

TargetSet bernoulli_cylinder_target(int depth) {
    if (depth < 1) throw std::invalid_argument("bernoulli_cylinder_target: depth must be >= 1");
    TargetSet d;
    d.name = "cylinder0^" + std::to_string(depth);
    d.member = [depth](const BaseState& y) {
        const auto& bits = std::get<BitStream>(y);
        for (int i = 0; i < depth; ++i)
            if (bits.bit(static_cast<std::size_t>(i)) != 0) return false;
        return true;
    };
    d.measure = std::pow(0.5, depth);
    d.sample_conditional = [depth](Rng& rng) -> BaseState {
        return BitStream(Rng(rng.next()), std::vector<std::uint8_t>(static_cast<std::size_t>(depth), 0));
    };
    return d;
}

BaseSystem make_torus_shear() {
    BaseSystem sys;
    sys.name = "shear";
    sys.step = [](const BaseState& y) -> BaseState {
        auto v = std::get<std::array<double, 2>>(y);
        return std::array<double, 2>{frac(v[0] + v[1]), v[1]};
    };
    sys.sample_mu = [](Rng& rng) -> BaseState {
        return std::array<double, 2>{rng.uniform(), rng.uniform()};
    };
    sys.roof = [](const BaseState&) { return 1.0; };
    sys.inf_roof = 1.0;
    sys.mean_roof = 1.0;
    sys.sup_roof = 1.0;
    return sys;
}

TargetSet shear_box_target(double width, double height) {
    if (!(width > 0.0 && width <= 1.0 && height > 0.0 && height <= 1.0))
        throw std::invalid_argument("shear_box_target: sides must lie in (0, 1]");
    TargetSet d;
    d.name = "box[" + std::to_string(width) + "x" + std::to_string(height) + "]";
    d.member = [width, height](const BaseState& y) {
        auto v = std::get<std::array<double, 2>>(y);
        return v[0] < width && v[1] < height;
    };
    d.measure = width * height;
    d.sample_conditional = [width, height](Rng& rng) -> BaseState {
        return std::array<double, 2>{rng.uniform(0.0, width), rng.uniform(0.0, height)};
    };
    return d;
}

TargetSet shear_hstrip_target(double height) { return shear_box_target(1.0, height); }

TargetSet shear_vstrip_target(double width) { return shear_box_target(width, 1.0); }

BaseSystem make_two_circle(const TwoCircleParams& p) {
    if (!(p.q1 >= 0.0 && p.q1 <= 1.0 && p.ell0 > 0.0 && p.ell1 > 0.0))
        throw std::invalid_argument("make_two_circle: invalid parameters");
    BaseSystem sys;
    sys.name = "two_circle";
    sys.step = [](const BaseState& y) -> BaseState { return y; }; // T = identity
    sys.sample_mu = [q1 = p.q1](Rng& rng) -> BaseState { return rng.bernoulli(q1) ? 1 : 0; };
    sys.roof = [p](const BaseState& y) { return std::get<int>(y) == 0 ? p.ell0 : p.ell1; };
    sys.inf_roof = std::min(p.ell0, p.ell1);
    sys.mean_roof = (1.0 - p.q1) * p.ell0 + p.q1 * p.ell1;
    sys.sup_roof = std::max(p.ell0, p.ell1);
    return sys;
}

TargetSet two_circle_target_one(const TwoCircleParams& p) {
    TargetSet d;
    d.name = "{1}";
    d.member = [](const BaseState& y) { return std::get<int>(y) == 1; };
    d.measure = p.q1;
    if (p.q1 > 0.0)
        d.sample_conditional = [](Rng&) -> BaseState { return 1; };
    return d;
}

TargetSet two_circle_target_all() {
    TargetSet d;
    d.name = "Y";
    d.member = [](const BaseState&) { return true; };
    d.measure = 1.0;
    return d;
}

OracleReport two_circle_oracle(const TwoCircleParams& p, TwoCircleTarget target) {
    double q0 = 1.0 - p.q1;
    double rbar = q0 * p.ell0 + p.q1 * p.ell1;
    double p1 = p.q1 * p.ell1 / rbar;
    double p0 = 1.0 - p1;
    OracleReport r;
    r.p1 = p1;
    if (target == TwoCircleTarget::One) {
        if (p.q1 == 0.0) throw std::domain_error("two_circle_oracle: zero-measure target");
        r.intensity = p.q1 / rbar;
        r.mean_return = p.ell1;
        r.p_nonzero = p1;
        r.return_law = {{p.ell1, 1.0}};
    } else {
        r.intensity = 1.0 / rbar;
        r.mean_return = rbar;
        r.p_nonzero = 1.0;
        // P(tau_1(eta) = ell_i) = (1 / I_xi) (p_i / ell_i)
        r.return_law.clear();
        if (p0 > 0.0) r.return_law.push_back({p.ell0, rbar * p0 / p.ell0});
        if (p1 > 0.0) r.return_law.push_back({p.ell1, rbar * p1 / p.ell1});
    }
    return r;
}

namespace {

PointMeasure lattice_points(double period, double center_offset, int n, double a, double lo,
                            double hi) {
    if (!(hi - lo >= period))
        throw std::invalid_argument("lattice cluster: window shorter than one period");
    double halfwidth = static_cast<double>(n) * a;
    auto m_lo = static_cast<std::int64_t>(std::floor((lo - center_offset - halfwidth) / period)) - 1;
    auto m_hi = static_cast<std::int64_t>(std::ceil((hi - center_offset + halfwidth) / period)) + 1;
    std::vector<Atom> atoms;
    for (std::int64_t m = m_lo; m <= m_hi; ++m) {
        double center = period * static_cast<double>(m) + center_offset;
        for (int k = -n; k <= n; ++k) {
            double t = center + a * static_cast<double>(k);
            if (t > lo && t <= hi) atoms.push_back({t, 1});
        }
    }
    std::sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) { return x.t < y.t; });
    return PointMeasure(lo, hi, std::move(atoms));
}

void check_cluster_params(const LatticeClusterParams& p) {
    if (p.n < 1 || !(p.a > 0.0 && p.a < 1.0))
        throw std::invalid_argument("lattice cluster: need n >= 1 and 0 < a < 1");
}

} // namespace

PointMeasure make_lattice_cluster(const LatticeClusterParams& p, Rng& rng, double window_lo,
                                  double window_hi) {
    check_cluster_params(p);
    double period = 2.0 * p.n + 1.0;
    double s = rng.uniform();
    return lattice_points(period, period * s, p.n, p.a, window_lo, window_hi);
}

PointMeasure lattice_cluster_palm(const LatticeClusterParams& p, Rng& rng, double window_lo,
                                  double window_hi) {
    check_cluster_params(p);
    double period = 2.0 * p.n + 1.0;
    auto l = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(2 * p.n + 1))) - p.n;
    return lattice_points(period, -p.a * static_cast<double>(l), p.n, p.a, window_lo, window_hi);
}

LatticeClusterOracle lattice_cluster_oracle(const LatticeClusterParams& p) {
    check_cluster_params(p);
    LatticeClusterOracle o;
    double m = 2.0 * p.n + 1.0;
    o.p_small = 2.0 * p.n / m;
    o.p_large = 1.0 / m;
    o.gap_small = p.a;
    o.gap_large = m - 2.0 * p.n * p.a;
    o.mean_tau1 = o.p_small * o.gap_small + o.p_large * o.gap_large;
    return o;
}

PointMeasure make_poisson(double lambda, Rng& rng, double window_lo, double window_hi) {
    if (!(lambda > 0.0)) throw std::invalid_argument("make_poisson: lambda must be > 0");
    if (!(window_lo < window_hi)) throw std::invalid_argument("make_poisson: empty window");
    std::vector<Atom> atoms;
    double t = window_lo;
    for (;;) {
        t += rng.exponential(lambda);
        if (t > window_hi) break;
        atoms.push_back({t, 1});
    }
    return PointMeasure(window_lo, window_hi, std::move(atoms));
}

std::vector<ZooCatalogEntry> zoo_catalog() {
    return {
        {"rotation",
         "circle rotation y -> y + alpha mod 1, uniform mu, roof level + amp*cos(2 pi y)",
         {{"alpha", "rotation angle (default sqrt(2) - 1)"},
          {"roof.level", "constant part of the roof (default 1)"},
          {"roof.amp", "cosine amplitude, |amp| < level (default 0)"},
          {"target.a", "left end of the target interval [a, b)"},
          {"target.b", "right end of the target interval [a, b)"}}},
        {"bernoulli",
         "full shift on fair coin sequences, roof 1; targets are cylinders of zeros",
         {{"target.depth", "cylinder depth k, mu(D) = 2^-k"}}},
        {"shear",
         "non-ergodic torus shear (x1, x2) -> (x1 + x2, x2), roof 1",
         {{"target.width", "horizontal side of the box target, in (0, 1]"},
          {"target.height", "vertical side of the box target, in (0, 1]"}}},
        {"two_circle",
         "two disjoint circles of lengths ell0, ell1; identity base map",
         {{"q1", "mu-mass of the second circle"},
          {"ell0", "length of circle 0"},
          {"ell1", "length of circle 1"},
          {"target", "\"one\" for D = {1}, \"all\" for D = Y"}}},
        {"lattice_cluster",
         "periodic clusters of 2n+1 points at spacing a on a shifted lattice of period 2n+1",
         {{"n", "cluster half-count"}, {"a", "intra-cluster spacing, in (0, 1); default 1/(n+1)"}}},
        {"poisson",
         "homogeneous Poisson process via exponential gaps",
         {{"lambda", "intensity, > 0"}}},
    };
}

} // namespace palmflow
