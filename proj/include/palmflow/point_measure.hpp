#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace palmflow {

// One atom of an integer-valued measure: time and multiplicity.
struct Atom {
    double t;
    std::int64_t k;
    friend bool operator==(const Atom&, const Atom&) = default;
};

// A locally finite integer-valued measure observed through a finite window
// (lo, hi]. Immutable after construction; all operations return new values.
class PointMeasure {
public:
    PointMeasure(double window_lo, double window_hi, std::vector<Atom> atoms);

    double window_lo() const { return lo_; }
    double window_hi() const { return hi_; }
    double window_length() const { return hi_ - lo_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    bool empty() const { return atoms_.empty(); }

    // total multiplicity over the whole window
    std::int64_t total() const;

    bool is_simple() const;

    // sum of multiplicities over (a, b]; the interval must sit inside the window
    std::int64_t count(double a, double b) const;

    // j-th point with the convention tau_0 <= 0 < tau_1; an atom of
    // multiplicity k occupies k consecutive indices. Empty optional means the
    // index falls outside what the window shows (censoring, not an error).
    std::optional<double> tau(std::int64_t j) const;

    // theta^u: atom times and window both translated by -u
    PointMeasure shift(double u) const;

    // drop non-positive atoms, clip the window to positive times
    PointMeasure restrict_positive() const;

    // star process: collapse each maximal run of atoms with successive gaps
    // <= eps into a single simple atom at the run's smallest time
    PointMeasure simplify(double eps) const;

    friend bool operator==(const PointMeasure&, const PointMeasure&) = default;

private:
    double lo_;
    double hi_;
    std::vector<Atom> atoms_;
};

} // namespace palmflow
