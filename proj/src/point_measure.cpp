#include "palmflow/point_measure.hpp"

#include <algorithm>
#include <stdexcept>

namespace palmflow {

PointMeasure::PointMeasure(double window_lo, double window_hi, std::vector<Atom> atoms)
    : lo_(window_lo), hi_(window_hi), atoms_(std::move(atoms)) {
    if (!(lo_ < hi_)) throw std::invalid_argument("PointMeasure: window_lo must be < window_hi");
    double prev = lo_;
    bool first = true;
    for (const Atom& a : atoms_) {
        if (a.k < 1) throw std::invalid_argument("PointMeasure: multiplicity must be >= 1");
        if (!(a.t > lo_ && a.t <= hi_))
            throw std::invalid_argument("PointMeasure: atom time outside window");
        if (!first && !(a.t > prev))
            throw std::invalid_argument("PointMeasure: atom times must be strictly increasing");
        prev = a.t;
        first = false;
    }
}

std::int64_t PointMeasure::total() const {
    std::int64_t n = 0;
    for (const Atom& a : atoms_) n += a.k;
    return n;
}

bool PointMeasure::is_simple() const {
    return std::all_of(atoms_.begin(), atoms_.end(), [](const Atom& a) { return a.k == 1; });
}

std::int64_t PointMeasure::count(double a, double b) const {
    if (!(lo_ <= a && a <= b && b <= hi_))
        throw std::out_of_range("PointMeasure::count: window exceeded");
    auto first = std::upper_bound(atoms_.begin(), atoms_.end(), a,
                                  [](double v, const Atom& at) { return v < at.t; });
    std::int64_t n = 0;
    for (auto it = first; it != atoms_.end() && it->t <= b; ++it) n += it->k;
    return n;
}

std::optional<double> PointMeasure::tau(std::int64_t j) const {
    auto split = std::upper_bound(atoms_.begin(), atoms_.end(), 0.0,
                                  [](double v, const Atom& at) { return v < at.t; });
    if (j >= 1) {
        std::int64_t idx = 0;
        for (auto it = split; it != atoms_.end(); ++it) {
            idx += it->k;
            if (j <= idx) return it->t;
        }
        return std::nullopt;
    }
    // j <= 0: walk the non-positive atoms from the largest time downwards
    std::int64_t idx = 1;
    for (auto it = std::make_reverse_iterator(split); it != atoms_.rend(); ++it) {
        idx -= it->k;
        if (j >= idx) return it->t;
    }
    return std::nullopt;
}

PointMeasure PointMeasure::shift(double u) const {
    std::vector<Atom> shifted;
    shifted.reserve(atoms_.size());
    for (const Atom& a : atoms_) shifted.push_back({a.t - u, a.k});
    return PointMeasure(lo_ - u, hi_ - u, std::move(shifted));
}

PointMeasure PointMeasure::restrict_positive() const {
    if (!(hi_ > 0.0)) throw std::domain_error("PointMeasure::restrict_positive: empty window");
    std::vector<Atom> kept;
    for (const Atom& a : atoms_)
        if (a.t > 0.0) kept.push_back(a);
    return PointMeasure(std::max(lo_, 0.0), hi_, std::move(kept));
}

PointMeasure PointMeasure::simplify(double eps) const {
    if (eps < 0.0) throw std::invalid_argument("PointMeasure::simplify: eps must be >= 0");
    std::vector<Atom> out;
    std::size_t i = 0;
    while (i < atoms_.size()) {
        std::size_t j = i;
        while (j + 1 < atoms_.size() && atoms_[j + 1].t - atoms_[j].t <= eps) ++j;
        out.push_back({atoms_[i].t, 1});
        i = j + 1;
    }
    return PointMeasure(lo_, hi_, std::move(out));
}

} // namespace palmflow
