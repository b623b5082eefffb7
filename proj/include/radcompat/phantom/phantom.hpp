#pragma once

#include "radcompat/core/case_record.hpp"
#include "radcompat/core/volume.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace radcompat::phantom {

enum class Shape { Sphere, Ellipsoid };

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    bool operator==(const Vec3&) const = default;
};

struct UniformTexture {
    bool operator==(const UniformTexture&) const = default;
};

/// Smoothed white noise rescaled to amplitudeHU standard deviation.
struct GaussianFieldTexture {
    double correlationLengthMm = 1.0;
    double amplitudeHU = 20.0;
    bool operator==(const GaussianFieldTexture&) const = default;
};

using TextureModel = std::variant<UniformTexture, GaussianFieldTexture>;

struct PhantomSpec {
    Shape shape = Shape::Sphere;
    Vec3 radiiMm{7.0, 7.0, 7.0};
    /// Millimeters from the grid corner; grid center when unset.
    std::optional<Vec3> centerMm;
    double backgroundHU = -800.0;
    double nodulePeakHU = 40.0;
    TextureModel texture = UniformTexture{};
    Spacing baseSpacing{0.6, 0.6, 0.3};
    Dims dims{40, 40, 100};
    std::uint64_t seed = 1;

    [[nodiscard]] Vec3 center() const;
    /// Throws ValidationError when the nodule does not fit with a 2-voxel margin.
    void validate() const;
};

struct PhantomImage {
    ScalarVolume volume;
    RoiMask mask;
};

/// Voxel-center inside test against the analytic shape.
[[nodiscard]] bool inside(const PhantomSpec& spec, std::size_t x, std::size_t y, std::size_t z);

[[nodiscard]] PhantomImage generate_phantom(const PhantomSpec& spec);

/// Symmetric relative/absolute variation ranges applied per case.
struct CohortJitter {
    double radiusFraction = 0.0;
    double centerMm = 0.0;
    double amplitudeFraction = 0.0;
    double correlationFraction = 0.0;
};

struct CohortCase {
    std::string caseId;
    PhantomSpec spec;
};

/// Per-case specs, jittered deterministically from (seed, index).
[[nodiscard]] std::vector<CohortCase> cohort_specs(std::size_t n, const PhantomSpec& base, const CohortJitter& jitter,
                                                   std::uint64_t seed);

[[nodiscard]] std::vector<CaseRecord> generate_cohort(std::size_t n, const PhantomSpec& base,
                                                      const CohortJitter& jitter, std::uint64_t seed,
                                                      std::span<const double> thicknessesMm);

/// "case_01", "case_02", ... padded to the width of n.
[[nodiscard]] std::string case_id(std::size_t index, std::size_t n);

} // namespace radcompat::phantom
