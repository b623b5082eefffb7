#include "radcompat/core/error.hpp"
#include "radcompat/features/features.hpp"

#include <algorithm>

namespace radcompat::features {

RunLengthMatrix build_rlm(const QuantizedRoi& q, std::span<const Offset> directions) {
    const auto& d = q.dims;
    const std::size_t maxRun = std::max({d.nx, d.ny, d.nz});
    RunLengthMatrix r{q.ng, maxRun, directions.size(),
                      std::vector<double>(static_cast<std::size_t>(q.ng) * maxRun, 0.0)};
    for (const auto& o : directions) {
        for (std::size_t z = 0; z < d.nz; ++z) {
            for (std::size_t y = 0; y < d.ny; ++y) {
                for (std::size_t x = 0; x < d.nx; ++x) {
                    const int level = q.levels[d.index(x, y, z)];
                    if (level == 0) {
                        continue;
                    }
                    auto px = static_cast<std::ptrdiff_t>(x);
                    auto py = static_cast<std::ptrdiff_t>(y);
                    auto pz = static_cast<std::ptrdiff_t>(z);
                    // Only maximal runs: start where the predecessor breaks the run.
                    if (q.level_at(px - o.dx, py - o.dy, pz - o.dz) == level) {
                        continue;
                    }
                    std::size_t length = 0;
                    while (q.level_at(px, py, pz) == level) {
                        ++length;
                        px += o.dx;
                        py += o.dy;
                        pz += o.dz;
                    }
                    r.counts[static_cast<std::size_t>(level - 1) * maxRun + (length - 1)] += 1.0;
                }
            }
        }
    }
    return r;
}

std::array<double, 5> rlm_features(const RunLengthMatrix& r, std::size_t roiVoxelCount) {
    const auto ng = static_cast<std::size_t>(r.ng);
    double total = 0.0;
    double sre = 0.0;
    double lre = 0.0;
    std::vector<double> perLevel(ng, 0.0);
    std::vector<double> perLength(r.maxRun, 0.0);
    for (std::size_t i = 0; i < ng; ++i) {
        for (std::size_t j = 0; j < r.maxRun; ++j) {
            const double c = r.counts[i * r.maxRun + j];
            if (c == 0.0) {
                continue;
            }
            const double len = static_cast<double>(j + 1);
            total += c;
            sre += c / (len * len);
            lre += c * len * len;
            perLevel[i] += c;
            perLength[j] += c;
        }
    }
    if (total == 0.0) {
        throw DomainError("run-length matrix has no runs");
    }
    if (roiVoxelCount == 0 || r.directionCount == 0) {
        throw DomainError("run percentage needs a nonempty ROI and direction set");
    }
    double gln = 0.0;
    for (double v : perLevel) {
        gln += v * v;
    }
    double rln = 0.0;
    for (double v : perLength) {
        rln += v * v;
    }
    const double rp = total / (static_cast<double>(roiVoxelCount) * static_cast<double>(r.directionCount));
    return {sre / total, lre / total, gln / total, rln / total, rp};
}

} // namespace radcompat::features
