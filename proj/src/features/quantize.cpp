#include "radcompat/core/error.hpp"
#include "radcompat/features/features.hpp"

#include <algorithm>
#include <cmath>

namespace radcompat::features {

namespace {

constexpr std::array<Offset, 4> kInPlaneDirections{{{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {1, -1, 0}}};

constexpr std::array<Offset, 13> kVolumeDirections{{{1, 0, 0},
                                                    {0, 1, 0},
                                                    {0, 0, 1},
                                                    {1, 1, 0},
                                                    {1, -1, 0},
                                                    {1, 0, 1},
                                                    {1, 0, -1},
                                                    {0, 1, 1},
                                                    {0, 1, -1},
                                                    {1, 1, 1},
                                                    {1, 1, -1},
                                                    {1, -1, 1},
                                                    {1, -1, -1}}};

template <std::size_t N>
constexpr std::array<Offset, N> make_neighborhood(bool inPlane) {
    std::array<Offset, N> out{};
    std::size_t k = 0;
    for (int dz = inPlane ? 0 : -1; dz <= (inPlane ? 0 : 1); ++dz) {
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx != 0 || dy != 0 || dz != 0) {
                    out[k++] = Offset{dx, dy, dz};
                }
            }
        }
    }
    return out;
}

constexpr auto kInPlaneNeighborhood = make_neighborhood<8>(true);
constexpr auto kVolumeNeighborhood = make_neighborhood<26>(false);

constexpr std::array<FeatureInfo, kFeatureCount> kFeatureTable{{
    {"mean", "Mean", FeatureGroup::Histogram},
    {"hist_contrast", "Contrast (RMS deviation)", FeatureGroup::Histogram},
    {"std_dev", "Standard deviation", FeatureGroup::Histogram},
    {"skewness", "Skewness", FeatureGroup::Histogram},
    {"kurtosis", "Kurtosis", FeatureGroup::Histogram},
    {"glcm_asm", "Homogeneity (ASM)", FeatureGroup::Glcm},
    {"glcm_contrast", "Contrast", FeatureGroup::Glcm},
    {"glcm_correlation", "Correlation", FeatureGroup::Glcm},
    {"glcm_variance", "Variance", FeatureGroup::Glcm},
    {"glcm_idm", "Inverse difference moment", FeatureGroup::Glcm},
    {"glcm_sum_average", "Sum average", FeatureGroup::Glcm},
    {"glcm_sum_entropy", "Sum entropy", FeatureGroup::Glcm},
    {"glcm_sum_variance", "Sum variance", FeatureGroup::Glcm},
    {"glcm_entropy", "Entropy", FeatureGroup::Glcm},
    {"glcm_difference_variance", "Difference variance", FeatureGroup::Glcm},
    {"glcm_difference_entropy", "Difference entropy", FeatureGroup::Glcm},
    {"glcm_imc1", "Information measure of correlation 1", FeatureGroup::Glcm},
    {"glcm_imc2", "Information measure of correlation 2", FeatureGroup::Glcm},
    {"rlm_sre", "Short run emphasis", FeatureGroup::Rlm},
    {"rlm_lre", "Long run emphasis", FeatureGroup::Rlm},
    {"rlm_gln", "Gray level non-uniformity", FeatureGroup::Rlm},
    {"rlm_rln", "Run length non-uniformity", FeatureGroup::Rlm},
    {"rlm_run_percentage", "Run percentage", FeatureGroup::Rlm},
    {"ngldm_sne", "Small number emphasis", FeatureGroup::Ngldm},
    {"ngldm_lne", "Large number emphasis", FeatureGroup::Ngldm},
    {"ngtdm_coarseness", "Coarseness", FeatureGroup::Ngtdm},
    {"ngtdm_complexity", "Complexity", FeatureGroup::Ngtdm},
    {"ngtdm_strength", "Texture strength", FeatureGroup::Ngtdm},
}};

} // namespace

const std::array<FeatureInfo, kFeatureCount>& feature_table() { return kFeatureTable; }

std::string_view group_name(FeatureGroup g) {
    switch (g) {
    case FeatureGroup::Histogram:
        return "histogram";
    case FeatureGroup::Glcm:
        return "glcm";
    case FeatureGroup::Rlm:
        return "rlm";
    case FeatureGroup::Ngldm:
        return "ngldm";
    case FeatureGroup::Ngtdm:
        return "ngtdm";
    }
    return "unknown";
}

std::span<const Offset> in_plane_directions() { return kInPlaneDirections; }
std::span<const Offset> volume_directions() { return kVolumeDirections; }
std::span<const Offset> in_plane_neighborhood() { return kInPlaneNeighborhood; }
std::span<const Offset> volume_neighborhood() { return kVolumeNeighborhood; }

TextureGeometry in_plane_geometry() { return {kInPlaneDirections, kInPlaneNeighborhood}; }
TextureGeometry volume_geometry() { return {kVolumeDirections, kVolumeNeighborhood}; }

QuantizedRoi quantize(std::span<const float> intensities, std::span<const std::uint8_t> mask, Dims dims, int ng) {
    if (ng < 2) {
        throw DomainError("gray-level count must be >= 2");
    }
    if (intensities.size() != dims.count() || mask.size() != dims.count()) {
        throw ValidationError("quantize: intensities and mask must match dims");
    }
    double lo = 0.0;
    double hi = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i] == 0) {
            continue;
        }
        const double x = intensities[i];
        if (n == 0) {
            lo = hi = x;
        } else {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        ++n;
    }
    if (n == 0) {
        throw DomainError("cannot quantize an empty ROI");
    }
    QuantizedRoi q{dims, ng, lo, hi, std::vector<int>(dims.count(), 0), n};
    const double range = hi - lo;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i] == 0) {
            continue;
        }
        if (range == 0.0) {
            q.levels[i] = 1;
            continue;
        }
        const double scaled = static_cast<double>(ng) * (static_cast<double>(intensities[i]) - lo) / range;
        q.levels[i] = std::min(ng, 1 + static_cast<int>(std::floor(scaled)));
    }
    return q;
}

QuantizedRoi quantize(const ScalarVolume& v, const RoiMask& m, int ng) {
    check_congruent(v, m);
    return quantize(v.voxels(), m.bits(), v.dims(), ng);
}

} // namespace radcompat::features
