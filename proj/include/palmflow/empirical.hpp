#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace palmflow {

// Sorted sample set with exact step-function CDF/survival evaluation. The
// survival integral int_R^inf P(X > u) du is computed in closed form as the
// sample mean of max(X - R, 0); no quadrature grid is ever involved.
class EmpiricalDistribution {
public:
    EmpiricalDistribution() = default;
    explicit EmpiricalDistribution(std::vector<double> samples);

    std::size_t size() const { return samples_.size(); }
    const std::vector<double>& samples() const { return samples_; }

    double cdf(double x) const;
    double survival(double x) const { return 1.0 - cdf(x); }
    double mean() const;
    double max() const;

    // mean of max(X - r, 0); equals the truncated survival integral
    double mean_excess(double r) const;

    // sup_x |F_hat(x) - F(x)| against a reference CDF
    double sup_distance(const std::function<double(double)>& cdf) const;

    // two-sample Kolmogorov-Smirnov statistic
    double sup_distance(const EmpiricalDistribution& other) const;

private:
    std::vector<double> samples_; // sorted ascending
};

} // namespace palmflow
