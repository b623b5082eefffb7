#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace oracle {

/// Dense grid with a 0/1 membership map, x fastest.
struct Roi {
    int nx = 0;
    int ny = 0;
    int nz = 0;
    std::vector<double> intensity;
    std::vector<std::uint8_t> inside;

    [[nodiscard]] bool in(int x, int y, int z) const {
        return x >= 0 && y >= 0 && z >= 0 && x < nx && y < ny && z < nz && inside[idx(x, y, z)] != 0;
    }
    [[nodiscard]] std::size_t idx(int x, int y, int z) const {
        return (static_cast<std::size_t>(z) * ny + y) * nx + x;
    }
};

/// All 28 features by direct enumeration: every voxel, every neighbor offset, every run.
/// threeD selects the 26-neighborhood; otherwise the in-plane 8-neighborhood.
[[nodiscard]] std::array<double, 28> naive_features(const Roi& roi, int ng, bool threeD);

/// Levels 1..ng per voxel (0 outside the ROI).
[[nodiscard]] std::vector<int> naive_levels(const Roi& roi, int ng);

} // namespace oracle
