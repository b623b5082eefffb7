#pragma once

#include "radcompat/core/case_record.hpp"
#include "radcompat/core/condition.hpp"
#include "radcompat/core/volume.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace radcompat::sim {

/// Surrogate reconstruction parameters. Defaults are documented in the README.
struct SimulatorConfig {
    /// Noise SD attributed to the full-dose image; added noise follows sigma_ref * sqrt(1/f - 1).
    double refNoiseHU = 10.0;
    /// Sharpness per kernel index, nondecreasing in [-1, 1].
    std::array<double, 10> kernelKappa = default_kappa();
    double blurSigmaMaxMm = 1.5;
    double unsharpAmountMax = 1.5;
    double unsharpSigmaMm = 0.8;
    std::uint64_t seed = 0;

    void validate() const;

    static constexpr std::array<double, 10> default_kappa() {
        std::array<double, 10> k{};
        for (std::size_t i = 0; i < k.size(); ++i) {
            k[i] = -1.0 + 2.0 * static_cast<double>(i) / 9.0;
        }
        return k;
    }
};

/// Adds zero-mean Gaussian noise so total noise scales as sigma_ref / sqrt(f).
/// The noise stream depends only on (cfg.seed, caseId, f).
[[nodiscard]] ScalarVolume simulate_dose(const ScalarVolume& v, double doseFraction, const SimulatorConfig& cfg,
                                         std::string_view caseId);

/// In-plane Gaussian blur (kappa < 0), unsharp mask (kappa > 0) or identity.
[[nodiscard]] ScalarVolume simulate_kernel(const ScalarVolume& v, int kernelIndex, const SimulatorConfig& cfg);

/// In-plane separable Gaussian blur with sigma in millimeters.
[[nodiscard]] ScalarVolume blur_in_plane(const ScalarVolume& v, double sigmaMm);

/// One output slab: contributing input slices and their normalized overlap weights.
struct Slab {
    std::vector<std::size_t> slices;
    std::vector<double> weights;
};

/// Overlap of each output slab [k t, (k+1) t) with the input slices [j sz, (j+1) sz).
[[nodiscard]] std::vector<Slab> slab_layout(std::size_t nz, double sz, double tMm);

/// Box filter of width t along z sampled every t from the top; output spacing (sx, sy, t).
[[nodiscard]] ScalarVolume simulate_thickness(const ScalarVolume& v, double tMm);

/// A slab voxel is set iff its overlap fraction with set input voxels is >= 0.5.
[[nodiscard]] RoiMask resample_mask(const RoiMask& m, const Spacing& fromSpacing, double tMm);

/// dose -> kernel -> thickness.
[[nodiscard]] ScalarVolume reconstruct(const CaseRecord& record, const ReconCondition& c,
                                       const SimulatorConfig& cfg);

/// Derives the thickness-specific ROI stacks from the native mask.
[[nodiscard]] CaseRecord make_case_record(std::string caseId, ScalarVolume volume, RoiMask mask,
                                          std::span<const double> thicknessesMm);

} // namespace radcompat::sim
