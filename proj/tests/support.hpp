#pragma once

#include <Eigen/Core>
#include <cmath>
#include <vector>

namespace testsupport {

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

struct Moments {
    double mean = 0.0, var = 0.0, se = 0.0;
};

inline Moments moments(const std::vector<double>& x) {
    Moments m;
    for (double v : x) m.mean += v;
    m.mean /= double(x.size());
    for (double v : x) m.var += (v - m.mean) * (v - m.mean);
    m.var /= double(x.size() - 1);
    m.se = std::sqrt(m.var / double(x.size()));
    return m;
}

// Standard error of the sample variance for a Gaussian sample.
inline double variance_se(double var, std::size_t n) { return var * std::sqrt(2.0 / double(n - 1)); }

}  // namespace testsupport
