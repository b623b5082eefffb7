#include "radcompat/core/error.hpp"
#include "radcompat/features/features.hpp"

#include <algorithm>
#include <cmath>

namespace radcompat::features {

std::array<double, 5> histogram_features(std::span<const double> x) {
    if (x.size() < 2) {
        throw DomainError("histogram features need at least 2 voxels");
    }
    const auto n = static_cast<double>(x.size());
    double sum = 0.0;
    for (double v : x) {
        sum += v;
    }
    const double mean = sum / n;
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    if (*lo == *hi) {
        return {mean, 0.0, 0.0, 0.0, 0.0};
    }
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (double v : x) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    const double sampleVar = m2 / (n - 1.0);
    return {mean, std::sqrt(m2 / n), std::sqrt(sampleVar), (m3 / n) / std::pow(sampleVar, 1.5),
            (m4 / n) / (sampleVar * sampleVar)};
}

} // namespace radcompat::features
