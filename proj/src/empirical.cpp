#include "palmflow/empirical.hpp"

#include "palmflow/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace palmflow {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : samples_(std::move(samples)) {
    std::sort(samples_.begin(), samples_.end());
}

double EmpiricalDistribution::cdf(double x) const {
    if (samples_.empty()) throw std::domain_error("EmpiricalDistribution: no samples");
    auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
    return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double EmpiricalDistribution::mean() const {
    if (samples_.empty()) throw std::domain_error("EmpiricalDistribution: no samples");
    KahanSum s;
    for (double x : samples_) s.add(x);
    return s.value() / static_cast<double>(samples_.size());
}

double EmpiricalDistribution::max() const {
    if (samples_.empty()) throw std::domain_error("EmpiricalDistribution: no samples");
    return samples_.back();
}

double EmpiricalDistribution::mean_excess(double r) const {
    if (samples_.empty()) throw std::domain_error("EmpiricalDistribution: no samples");
    KahanSum s;
    for (auto it = std::upper_bound(samples_.begin(), samples_.end(), r); it != samples_.end();
         ++it)
        s.add(*it - r);
    return s.value() / static_cast<double>(samples_.size());
}

double EmpiricalDistribution::sup_distance(const std::function<double(double)>& cdf) const {
    if (samples_.empty()) throw std::domain_error("EmpiricalDistribution: no samples");
    double n = static_cast<double>(samples_.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        double f = cdf(samples_[i]);
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
        d = std::max(d, std::abs(static_cast<double>(i) / n - f));
    }
    return d;
}

double EmpiricalDistribution::sup_distance(const EmpiricalDistribution& other) const {
    if (samples_.empty() || other.samples_.empty())
        throw std::domain_error("EmpiricalDistribution: no samples");
    double d = 0.0;
    std::size_t i = 0, j = 0;
    double na = static_cast<double>(samples_.size());
    double nb = static_cast<double>(other.samples_.size());
    while (i < samples_.size() && j < other.samples_.size()) {
        double a = samples_[i], b = other.samples_[j];
        if (a <= b) ++i;
        if (b <= a) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

} // namespace palmflow
