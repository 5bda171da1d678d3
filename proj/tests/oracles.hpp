#pragma once

// Independent reference computations used only by tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace coinknn::oracle {

/// Literal np-set evaluation of the signed coincidence index in long double.
inline double coincidence(const std::vector<double>& u, const std::vector<double>& v, double d, double e) {
    struct Masses {
        long double pos;
        long double neg;  // absolute value of the negative part
    };
    const auto split = [](double x) {
        return Masses{x > 0 ? static_cast<long double>(x) : 0.0L, x < 0 ? -static_cast<long double>(x) : 0.0L};
    };
    long double inter = 0, uni = 0, total_u = 0, total_v = 0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const Masses a = split(u[k]);
        const Masses b = split(v[k]);
        inter += (a.pos < b.pos ? a.pos : b.pos) + (a.neg < b.neg ? a.neg : b.neg);
        uni += (a.pos > b.pos ? a.pos : b.pos) + (a.neg > b.neg ? a.neg : b.neg);
        total_u += a.pos + a.neg;
        total_v += b.pos + b.neg;
    }
    if (inter == 0) {
        return 0.0;
    }
    const long double smaller = total_u < total_v ? total_u : total_v;
    return static_cast<double>(std::pow(inter / uni, static_cast<long double>(d)) *
                               std::pow(inter / smaller, static_cast<long double>(e)));
}

/// sup |F_n - F| for a sample against an analytic CDF.
inline double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

/// sup |F_a - F_b| between two empirical CDFs.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
    }
    return d;
}

// Asymptotic Kolmogorov critical values c(alpha); the one-sample threshold is c / sqrt(n),
// the two-sample one c * sqrt((n + m) / (n m)).
inline constexpr double kKsCritical1Percent = 1.6276;
inline constexpr double kKsCritical5Percent = 1.3581;

}  // namespace coinknn::oracle
