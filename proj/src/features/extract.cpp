#include "radcompat/core/error.hpp"
#include "radcompat/features/features.hpp"

#include <algorithm>
#include <cmath>

namespace radcompat::features {

namespace {

struct Box {
    std::size_t x0, x1, y0, y1; // half-open
};

Box slice_bounds(const RoiMask& m, std::size_t z) {
    const auto& d = m.dims();
    Box b{d.nx, 0, d.ny, 0};
    for (std::size_t y = 0; y < d.ny; ++y) {
        for (std::size_t x = 0; x < d.nx; ++x) {
            if (m.test(x, y, z)) {
                b.x0 = std::min(b.x0, x);
                b.x1 = std::max(b.x1, x + 1);
                b.y0 = std::min(b.y0, y);
                b.y1 = std::max(b.y1, y + 1);
            }
        }
    }
    return b;
}

bool has_adjacent_pair(const RoiMask& m, std::size_t z) {
    const auto& d = m.dims();
    for (std::size_t y = 0; y < d.ny; ++y) {
        for (std::size_t x = 0; x < d.nx; ++x) {
            if (!m.test(x, y, z)) {
                continue;
            }
            for (const auto& o : in_plane_directions()) {
                const auto nx = static_cast<std::ptrdiff_t>(x) + o.dx;
                const auto ny = static_cast<std::ptrdiff_t>(y) + o.dy;
                if (nx >= 0 && ny >= 0 && nx < static_cast<std::ptrdiff_t>(d.nx) &&
                    ny < static_cast<std::ptrdiff_t>(d.ny) &&
                    m.test(static_cast<std::size_t>(nx), static_cast<std::size_t>(ny), z)) {
                    return true;
                }
            }
        }
    }
    return false;
}

FeatureVector assemble(const std::array<double, 5>& hist, const std::array<double, 13>& glcm,
                       const std::array<double, 5>& rlm, const std::array<double, 2>& ngldm,
                       const std::array<double, 3>& ngtdm) {
    FeatureVector out{};
    auto it = std::copy(hist.begin(), hist.end(), out.begin());
    it = std::copy(glcm.begin(), glcm.end(), it);
    it = std::copy(rlm.begin(), rlm.end(), it);
    it = std::copy(ngldm.begin(), ngldm.end(), it);
    std::copy(ngtdm.begin(), ngtdm.end(), it);
    return out;
}

FeatureVector slice_features(const ScalarVolume& v, const RoiMask& m, std::size_t z, int ng) {
    const Box b = slice_bounds(m, z);
    const Dims crop{b.x1 - b.x0, b.y1 - b.y0, 1};
    std::vector<float> values(crop.count());
    std::vector<std::uint8_t> bits(crop.count());
    std::vector<double> raw;
    for (std::size_t y = 0; y < crop.ny; ++y) {
        for (std::size_t x = 0; x < crop.nx; ++x) {
            const auto i = crop.index(x, y, 0);
            values[i] = v.at(b.x0 + x, b.y0 + y, z);
            bits[i] = m.test(b.x0 + x, b.y0 + y, z) ? 1 : 0;
            if (bits[i] != 0) {
                raw.push_back(values[i]);
            }
        }
    }
    const auto q = quantize(values, bits, crop, ng);
    return compute_features(q, raw, in_plane_geometry());
}

} // namespace

void FeatureConfig::validate() const {
    if (ng < 2) {
        throw ConfigError("features.ng must be >= 2");
    }
    if (minSliceVoxels < 2) {
        throw ConfigError("features.minSliceVoxels must be >= 2");
    }
}

FeatureVector compute_features(const QuantizedRoi& q, std::span<const double> rawIntensities,
                               const TextureGeometry& geometry) {
    const auto hist = histogram_features(rawIntensities);
    const auto glcm = glcm_features(build_glcm(q, geometry.directions));
    const auto rlm = rlm_features(build_rlm(q, geometry.directions), q.voxelCount);
    const auto ngldm = ngldm_features(build_ngldm(q, geometry.neighborhood));
    const auto ngtdm = ngtdm_features(build_ngtdm(q, geometry.neighborhood));
    return assemble(hist, glcm, rlm, ngldm, ngtdm);
}

std::string slice_rejection(const RoiMask& m, std::size_t z, std::size_t minSliceVoxels) {
    const auto count = m.slice_count(z);
    if (count < minSliceVoxels) {
        return "slice " + std::to_string(z) + " has " + std::to_string(count) + " ROI voxels (< " +
               std::to_string(minSliceVoxels) + ")";
    }
    if (!has_adjacent_pair(m, z)) {
        return "slice " + std::to_string(z) + " has no adjacent ROI voxels";
    }
    return {};
}

FeatureVector extract_whole_roi(const ScalarVolume& v, const RoiMask& m, const FeatureConfig& cfg) {
    cfg.validate();
    const auto q = quantize(v, m, cfg.ng);
    std::vector<double> raw;
    raw.reserve(q.voxelCount);
    for (std::size_t i = 0; i < m.bits().size(); ++i) {
        if (m.bits()[i] != 0) {
            raw.push_back(v.voxels()[i]);
        }
    }
    return compute_features(q, raw, volume_geometry());
}

FeatureSample extract_feature_sample(const ScalarVolume& v, const RoiMask& m, const FeatureConfig& cfg) {
    cfg.validate();
    check_congruent(v, m);
    FeatureSample sample;
    for (std::size_t z = 0; z < m.dims().nz; ++z) {
        if (!slice_rejection(m, z, cfg.minSliceVoxels).empty()) {
            continue;
        }
        sample.sliceIndices.push_back(z);
        sample.perSlice.push_back(slice_features(v, m, z, cfg.ng));
    }

    const auto n = sample.perSlice.size();
    if (n >= 1) {
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            double sum = 0.0;
            bool constant = true;
            for (const auto& s : sample.perSlice) {
                sum += s[f];
                constant = constant && s[f] == sample.perSlice.front()[f];
            }
            if (constant) {
                sample.mean[f] = sample.perSlice.front()[f];
                sample.sd[f] = 0.0;
                continue;
            }
            const double mean = sum / static_cast<double>(n);
            double ss = 0.0;
            for (const auto& s : sample.perSlice) {
                ss += (s[f] - mean) * (s[f] - mean);
            }
            sample.mean[f] = mean;
            sample.sd[f] = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
        }
    }
    sample.usable = n >= 2;
    if (!sample.usable) {
        sample.reason = std::to_string(n) + " valid slice(s) with >= " + std::to_string(cfg.minSliceVoxels) +
                        " ROI voxels; at least 2 are required";
    }
    if (cfg.directionMode == DirectionMode::WholeRoi3D && m.count() >= 2) {
        try {
            sample.wholeRoi = extract_whole_roi(v, m, cfg);
        } catch (const DegenerateError&) {
            sample.wholeRoi.reset();
        }
    }
    return sample;
}

} // namespace radcompat::features
