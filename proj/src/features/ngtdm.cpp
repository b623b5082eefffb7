#include "radcompat/core/error.hpp"
#include "radcompat/features/features.hpp"

#include <algorithm>
#include <cmath>

namespace radcompat::features {

ToneDifference build_ngtdm(const QuantizedRoi& q, std::span<const Offset> neighborhood) {
    const auto& d = q.dims;
    const auto ng = static_cast<std::size_t>(q.ng);
    ToneDifference t{q.ng, std::vector<double>(ng, 0.0), std::vector<double>(ng, 0.0), 0};
    std::vector<std::size_t> counts(ng, 0);
    for (std::size_t z = 0; z < d.nz; ++z) {
        for (std::size_t y = 0; y < d.ny; ++y) {
            for (std::size_t x = 0; x < d.nx; ++x) {
                const int level = q.levels[d.index(x, y, z)];
                if (level == 0) {
                    continue;
                }
                double sum = 0.0;
                std::size_t n = 0;
                for (const auto& o : neighborhood) {
                    const int nb = q.level_at(static_cast<std::ptrdiff_t>(x) + o.dx,
                                              static_cast<std::ptrdiff_t>(y) + o.dy,
                                              static_cast<std::ptrdiff_t>(z) + o.dz);
                    if (nb != 0) {
                        sum += nb;
                        ++n;
                    }
                }
                if (n == 0) {
                    continue;
                }
                const auto idx = static_cast<std::size_t>(level - 1);
                t.differenceSum[idx] += std::fabs(level - sum / static_cast<double>(n));
                ++counts[idx];
                ++t.contributing;
            }
        }
    }
    if (t.contributing == 0) {
        throw DegenerateError("NGTDM: no ROI voxel has an ROI neighbor");
    }
    for (std::size_t i = 0; i < ng; ++i) {
        t.probability[i] = static_cast<double>(counts[i]) / static_cast<double>(t.contributing);
    }
    return t;
}

std::array<double, 3> ngtdm_features(const ToneDifference& t) {
    const auto ng = static_cast<std::size_t>(t.ng);
    const double n = static_cast<double>(t.contributing);
    double weighted = 0.0;
    double sTotal = 0.0;
    for (std::size_t i = 0; i < ng; ++i) {
        weighted += t.probability[i] * t.differenceSum[i];
        sTotal += t.differenceSum[i];
    }
    const double coarseness = std::min(kCoarsenessCap, 1.0 / (kNgtdmEpsilon + weighted));

    double complexity = 0.0;
    double strengthNumerator = 0.0;
    for (std::size_t i = 0; i < ng; ++i) {
        const double pi = t.probability[i];
        if (pi == 0.0) {
            continue;
        }
        for (std::size_t j = 0; j < ng; ++j) {
            const double pj = t.probability[j];
            if (pj == 0.0) {
                continue;
            }
            const double diff = static_cast<double>(i) - static_cast<double>(j);
            complexity += std::fabs(diff) / (n * n * (pi + pj)) *
                          (pi * t.differenceSum[i] + pj * t.differenceSum[j]);
            strengthNumerator += (pi + pj) * diff * diff;
        }
    }
    return {coarseness, complexity, strengthNumerator / (kNgtdmEpsilon + sTotal)};
}

} // namespace radcompat::features
