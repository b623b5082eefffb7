#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace radcompat {

/// Grid extent in voxels, x fastest.
struct Dims {
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::size_t nz = 0;

    [[nodiscard]] constexpr std::size_t count() const { return nx * ny * nz; }
    [[nodiscard]] constexpr std::size_t slice_size() const { return nx * ny; }
    [[nodiscard]] constexpr std::size_t index(std::size_t x, std::size_t y, std::size_t z) const {
        return (z * ny + y) * nx + x;
    }
    bool operator==(const Dims&) const = default;
};

/// Voxel spacing in millimeters.
struct Spacing {
    double sx = 1.0;
    double sy = 1.0;
    double sz = 1.0;

    [[nodiscard]] double voxel_volume() const { return sx * sy * sz; }
    bool operator==(const Spacing&) const = default;
};

/// Immutable 3-D scalar image. Intensities are HU-like and always finite.
class ScalarVolume {
public:
    /// Throws ValidationError when the voxel count, spacing or intensities break the invariants.
    ScalarVolume(Dims dims, Spacing spacing, std::vector<float> voxels);

    static ScalarVolume filled(Dims dims, Spacing spacing, float value);

    [[nodiscard]] const Dims& dims() const { return dims_; }
    [[nodiscard]] const Spacing& spacing() const { return spacing_; }
    [[nodiscard]] std::span<const float> voxels() const { return voxels_; }
    [[nodiscard]] std::span<const float> slice(std::size_t z) const;
    [[nodiscard]] float at(std::size_t x, std::size_t y, std::size_t z) const {
        return voxels_[dims_.index(x, y, z)];
    }

    bool operator==(const ScalarVolume&) const = default;

private:
    Dims dims_;
    Spacing spacing_;
    std::vector<float> voxels_;
};

/// Binary ROI congruent with a companion volume. Stored as 0/1 bytes.
class RoiMask {
public:
    RoiMask() = default;
    /// Any nonzero byte counts as set; stored bits are normalized to 1.
    RoiMask(Dims dims, std::vector<std::uint8_t> bits);

    [[nodiscard]] const Dims& dims() const { return dims_; }
    [[nodiscard]] std::span<const std::uint8_t> bits() const { return bits_; }
    [[nodiscard]] bool test(std::size_t x, std::size_t y, std::size_t z) const {
        return bits_[dims_.index(x, y, z)] != 0;
    }
    [[nodiscard]] std::size_t count() const;
    [[nodiscard]] std::size_t slice_count(std::size_t z) const;

    bool operator==(const RoiMask&) const = default;

private:
    Dims dims_;
    std::vector<std::uint8_t> bits_;
};

/// Throws ValidationError unless the mask grid matches the volume grid.
void check_congruent(const ScalarVolume& volume, const RoiMask& mask);

} // namespace radcompat
