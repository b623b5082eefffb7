#include "radcompat/core/error.hpp"
#include "radcompat/features/features.hpp"

#include <cstdlib>

namespace radcompat::features {

DependenceMatrix build_ngldm(const QuantizedRoi& q, std::span<const Offset> neighborhood, int tolerance) {
    const auto& d = q.dims;
    const std::size_t maxS = neighborhood.size();
    DependenceMatrix m{q.ng, maxS, std::vector<double>(static_cast<std::size_t>(q.ng) * (maxS + 1), 0.0)};
    for (std::size_t z = 0; z < d.nz; ++z) {
        for (std::size_t y = 0; y < d.ny; ++y) {
            for (std::size_t x = 0; x < d.nx; ++x) {
                const int k = q.levels[d.index(x, y, z)];
                if (k == 0) {
                    continue;
                }
                std::size_t s = 0;
                for (const auto& o : neighborhood) {
                    const int n = q.level_at(static_cast<std::ptrdiff_t>(x) + o.dx,
                                             static_cast<std::ptrdiff_t>(y) + o.dy,
                                             static_cast<std::ptrdiff_t>(z) + o.dz);
                    if (n != 0 && std::abs(n - k) <= tolerance) {
                        ++s;
                    }
                }
                m.counts[static_cast<std::size_t>(k - 1) * (maxS + 1) + s] += 1.0;
            }
        }
    }
    return m;
}

std::array<double, 2> ngldm_features(const DependenceMatrix& d) {
    double total = 0.0;
    double sne = 0.0;
    double lne = 0.0;
    const auto ng = static_cast<std::size_t>(d.ng);
    for (std::size_t k = 0; k < ng; ++k) {
        for (std::size_t s = 0; s <= d.maxDependence; ++s) {
            const double q = d.counts[k * (d.maxDependence + 1) + s];
            if (q == 0.0) {
                continue;
            }
            // s + 1 keeps isolated voxels (s = 0) finite.
            const double w = static_cast<double>(s + 1) * static_cast<double>(s + 1);
            total += q;
            sne += q / w;
            lne += q * w;
        }
    }
    if (total == 0.0) {
        throw DomainError("dependence matrix is empty");
    }
    return {sne / total, lne / total};
}

} // namespace radcompat::features
