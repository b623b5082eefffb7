#pragma once

// Radiomic features over ROI voxels: 5 histogram, 13 GLCM, 5 run-length,
// 2 NGLDM and 3 NGTDM features in a fixed order.

#include "radcompat/core/condition.hpp"
#include "radcompat/core/volume.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace radcompat::features {

inline constexpr std::size_t kFeatureCount = 28;
using FeatureVector = std::array<double, kFeatureCount>;

enum class FeatureGroup { Histogram, Glcm, Rlm, Ngldm, Ngtdm };

struct FeatureInfo {
    std::string_view key;
    std::string_view label;
    FeatureGroup group;
};

[[nodiscard]] const std::array<FeatureInfo, kFeatureCount>& feature_table();
[[nodiscard]] std::string_view group_name(FeatureGroup g);

/// Offset to a neighboring voxel.
struct Offset {
    int dx;
    int dy;
    int dz;
};

/// The 4 unique in-plane unit directions.
[[nodiscard]] std::span<const Offset> in_plane_directions();
/// The 13 unique 3-D unit directions.
[[nodiscard]] std::span<const Offset> volume_directions();
/// 8-neighborhood.
[[nodiscard]] std::span<const Offset> in_plane_neighborhood();
/// 26-neighborhood.
[[nodiscard]] std::span<const Offset> volume_neighborhood();

struct TextureGeometry {
    std::span<const Offset> directions;
    std::span<const Offset> neighborhood;
};

[[nodiscard]] TextureGeometry in_plane_geometry();
[[nodiscard]] TextureGeometry volume_geometry();

/// Gray levels 1..ng for ROI voxels, 0 outside.
struct QuantizedRoi {
    Dims dims;
    int ng = 0;
    double minValue = 0.0;
    double maxValue = 0.0;
    std::vector<int> levels;
    std::size_t voxelCount = 0;

    [[nodiscard]] bool in_bounds(std::ptrdiff_t x, std::ptrdiff_t y, std::ptrdiff_t z) const {
        return x >= 0 && y >= 0 && z >= 0 && x < static_cast<std::ptrdiff_t>(dims.nx) &&
               y < static_cast<std::ptrdiff_t>(dims.ny) && z < static_cast<std::ptrdiff_t>(dims.nz);
    }
    /// 0 when outside the grid or the ROI.
    [[nodiscard]] int level_at(std::ptrdiff_t x, std::ptrdiff_t y, std::ptrdiff_t z) const {
        if (!in_bounds(x, y, z)) {
            return 0;
        }
        return levels[dims.index(static_cast<std::size_t>(x), static_cast<std::size_t>(y),
                                 static_cast<std::size_t>(z))];
    }
};

/// Min-max linear binning: level = min(ng, 1 + floor(ng (x - min) / (max - min))); constant ROI -> 1.
[[nodiscard]] QuantizedRoi quantize(std::span<const float> intensities, std::span<const std::uint8_t> mask,
                                    Dims dims, int ng);
[[nodiscard]] QuantizedRoi quantize(const ScalarVolume& v, const RoiMask& m, int ng);

/// Mean, RMS deviation, SD (N-1), skewness, kurtosis on raw intensities.
[[nodiscard]] std::array<double, 5> histogram_features(std::span<const double> x);

/// Symmetric, direction-merged co-occurrence probabilities.
struct Glcm {
    int ng = 0;
    std::vector<double> p; // ng * ng, row i-1, column j-1

    [[nodiscard]] double at(int i, int j) const {
        return p[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(ng) + static_cast<std::size_t>(j - 1)];
    }
};

[[nodiscard]] Glcm build_glcm(const QuantizedRoi& q, std::span<const Offset> directions);
[[nodiscard]] std::array<double, 13> glcm_features(const Glcm& g);

/// Run counts by (level, run length), accumulated over a direction set.
struct RunLengthMatrix {
    int ng = 0;
    std::size_t maxRun = 0;
    std::size_t directionCount = 0;
    std::vector<double> counts; // ng * maxRun, column j-1 holds runs of length j

    [[nodiscard]] double at(int level, std::size_t length) const {
        return counts[static_cast<std::size_t>(level - 1) * maxRun + (length - 1)];
    }
};

[[nodiscard]] RunLengthMatrix build_rlm(const QuantizedRoi& q, std::span<const Offset> directions);
[[nodiscard]] std::array<double, 5> rlm_features(const RunLengthMatrix& r, std::size_t roiVoxelCount);

/// Voxel counts by (level k, number s of neighbors within `tolerance` gray levels).
struct DependenceMatrix {
    int ng = 0;
    std::size_t maxDependence = 0;
    std::vector<double> counts; // ng * (maxDependence + 1), column s

    [[nodiscard]] double at(int level, std::size_t s) const {
        return counts[static_cast<std::size_t>(level - 1) * (maxDependence + 1) + s];
    }
};

[[nodiscard]] DependenceMatrix build_ngldm(const QuantizedRoi& q, std::span<const Offset> neighborhood,
                                           int tolerance = 0);
[[nodiscard]] std::array<double, 2> ngldm_features(const DependenceMatrix& d);

/// Per-level occurrence probability and summed |level - neighborhood mean|.
struct ToneDifference {
    int ng = 0;
    std::vector<double> probability;   // index level-1
    std::vector<double> differenceSum; // index level-1
    std::size_t contributing = 0;
};

[[nodiscard]] ToneDifference build_ngtdm(const QuantizedRoi& q, std::span<const Offset> neighborhood);
[[nodiscard]] std::array<double, 3> ngtdm_features(const ToneDifference& t);

inline constexpr double kNgtdmEpsilon = 1e-12;
inline constexpr double kCoarsenessCap = 1e6;

/// All 28 features for one quantized ROI plus its raw intensities.
[[nodiscard]] FeatureVector compute_features(const QuantizedRoi& q, std::span<const double> rawIntensities,
                                             const TextureGeometry& geometry);

enum class DirectionMode { PerSlice2D, WholeRoi3D };

struct FeatureConfig {
    int ng = 32;
    std::size_t minSliceVoxels = 5;
    DirectionMode directionMode = DirectionMode::PerSlice2D;

    void validate() const;
};

/// Per-slice feature vectors of one (case, condition) and their spread.
struct FeatureSample {
    std::string caseId;
    ReconCondition condition;
    std::vector<std::size_t> sliceIndices;
    std::vector<FeatureVector> perSlice;
    FeatureVector mean{};
    FeatureVector sd{};
    bool usable = false;
    std::string reason;
    /// Whole-ROI 3-D vector, recorded in WholeRoi3D mode.
    std::optional<FeatureVector> wholeRoi;

    [[nodiscard]] std::size_t n() const { return perSlice.size(); }
};

/// Why a slice is skipped, or empty when it is valid for texture analysis.
[[nodiscard]] std::string slice_rejection(const RoiMask& m, std::size_t z, std::size_t minSliceVoxels);

/// Whole-ROI features with 13 directions and the 26-neighborhood.
[[nodiscard]] FeatureVector extract_whole_roi(const ScalarVolume& v, const RoiMask& m, const FeatureConfig& cfg);

/// Each valid axial slice is quantized on its own and analyzed in 2-D.
/// Fewer than 2 valid slices leaves the sample flagged unusable.
[[nodiscard]] FeatureSample extract_feature_sample(const ScalarVolume& v, const RoiMask& m, const FeatureConfig& cfg);

} // namespace radcompat::features
