#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace palmflow {

// Kahan-compensated accumulator. Aggregation across replicas must not depend
// on worker count, so every estimator sums through this in replica order.
class KahanSum {
public:
    void add(double x) {
        double y = x - comp_;
        double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct SummaryStat {
    double mean = 0.0;
    double se = 0.0;
    std::size_t n = 0;
};

inline SummaryStat summarize(std::span<const double> xs) {
    SummaryStat s;
    s.n = xs.size();
    if (s.n == 0) return s;
    KahanSum sum;
    for (double x : xs) sum.add(x);
    s.mean = sum.value() / static_cast<double>(s.n);
    if (s.n >= 2) {
        KahanSum sq;
        for (double x : xs) sq.add((x - s.mean) * (x - s.mean));
        double var = sq.value() / static_cast<double>(s.n - 1);
        s.se = std::sqrt(var / static_cast<double>(s.n));
    }
    return s;
}

// binomial proportion with its standard error
inline SummaryStat proportion(std::size_t hits, std::size_t n) {
    SummaryStat s;
    s.n = n;
    if (n == 0) return s;
    double p = static_cast<double>(hits) / static_cast<double>(n);
    s.mean = p;
    s.se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    return s;
}

inline double combined_se(double a, double b) { return std::sqrt(a * a + b * b); }

// half-width of the Dvoretzky-Kiefer-Wolfowitz band at confidence 1 - alpha
inline double dkw_band(std::size_t n, double alpha) {
    return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

} // namespace palmflow
