#include "radcompat/sim/condition_sim.hpp"

#include "radcompat/core/error.hpp"
#include "radcompat/core/filter.hpp"
#include "radcompat/core/seed.hpp"
#include "radcompat/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace radcompat::sim {

namespace {

// Relative slack for comparing thicknesses against base spacing and extent.
constexpr double kLengthTolerance = 1e-9;
constexpr double kOverlapFloor = 1e-12;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

std::size_t output_slices(std::size_t nz, double sz, double tMm) {
    if (!positive_finite(tMm)) {
        throw DomainError("slice thickness must be positive");
    }
    if (tMm < sz * (1.0 - kLengthTolerance)) {
        throw DomainError("slice thickness " + format_minimal(tMm) + " mm is thinner than the base spacing " +
                          format_minimal(sz) + " mm; upsampling refused");
    }
    const double extent = static_cast<double>(nz) * sz;
    if (tMm > extent * (1.0 + kLengthTolerance)) {
        throw DomainError("slice thickness " + format_minimal(tMm) + " mm exceeds the volume extent " +
                          format_minimal(extent) + " mm");
    }
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(extent / tMm + kLengthTolerance)));
}

} // namespace

void SimulatorConfig::validate() const {
    if (!positive_finite(refNoiseHU)) {
        throw ConfigError("simulator.refNoiseHU must be > 0");
    }
    if (!positive_finite(blurSigmaMaxMm) || !positive_finite(unsharpSigmaMm)) {
        throw ConfigError("simulator blur sigmas must be > 0");
    }
    if (!positive_finite(unsharpAmountMax)) {
        throw ConfigError("simulator.unsharpAmountMax must be > 0");
    }
    for (std::size_t i = 0; i < kernelKappa.size(); ++i) {
        const double k = kernelKappa[i];
        if (!std::isfinite(k) || k < -1.0 || k > 1.0) {
            throw ConfigError("simulator.kernelKappa[" + std::to_string(i) + "] outside [-1, 1]");
        }
        if (i > 0 && k < kernelKappa[i - 1]) {
            throw ConfigError("simulator.kernelKappa must be nondecreasing");
        }
    }
}

ScalarVolume simulate_dose(const ScalarVolume& v, double doseFraction, const SimulatorConfig& cfg,
                           std::string_view caseId) {
    if (!std::isfinite(doseFraction) || doseFraction <= 0.0 || doseFraction > 1.0) {
        throw DomainError("dose fraction " + format_minimal(doseFraction) + " outside (0, 1]");
    }
    if (doseFraction == 1.0) {
        return v;
    }
    const double sigma = cfg.refNoiseHU * std::sqrt(1.0 / doseFraction - 1.0);
    std::mt19937_64 rng(derive_seed(cfg.seed, caseId, doseFraction));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> noise(v.voxels().size());
    for (auto& z : noise) {
        z = normal(rng);
    }
    std::vector<float> out(noise.size());
    simd::kernels().add_scaled(v.voxels().data(), noise.data(), sigma, out.data(), out.size());
    return ScalarVolume(v.dims(), v.spacing(), std::move(out));
}

ScalarVolume blur_in_plane(const ScalarVolume& v, double sigmaMm) {
    const auto wx = gaussian_weights(sigmaMm / v.spacing().sx);
    const auto wy = gaussian_weights(sigmaMm / v.spacing().sy);
    auto tmp = convolve_axis(v.voxels(), v.dims(), Axis::X, wx);
    auto out = convolve_axis(tmp, v.dims(), Axis::Y, wy);
    return ScalarVolume(v.dims(), v.spacing(), std::move(out));
}

ScalarVolume simulate_kernel(const ScalarVolume& v, int kernelIndex, const SimulatorConfig& cfg) {
    if (kernelIndex < 0 || kernelIndex >= static_cast<int>(cfg.kernelKappa.size())) {
        throw DomainError("kernel index " + std::to_string(kernelIndex) + " outside 0..9");
    }
    const double kappa = cfg.kernelKappa[static_cast<std::size_t>(kernelIndex)];
    if (kappa == 0.0) {
        return v;
    }
    if (kappa < 0.0) {
        return blur_in_plane(v, -kappa * cfg.blurSigmaMaxMm);
    }
    const auto blurred = blur_in_plane(v, cfg.unsharpSigmaMm);
    std::vector<float> out(v.voxels().size());
    simd::kernels().unsharp(v.voxels().data(), blurred.voxels().data(), kappa * cfg.unsharpAmountMax, out.data(),
                            out.size());
    return ScalarVolume(v.dims(), v.spacing(), std::move(out));
}

std::vector<Slab> slab_layout(std::size_t nz, double sz, double tMm) {
    const std::size_t nOut = output_slices(nz, sz, tMm);
    std::vector<Slab> slabs(nOut);
    for (std::size_t k = 0; k < nOut; ++k) {
        const double lo = static_cast<double>(k) * tMm;
        const double hi = static_cast<double>(k + 1) * tMm;
        const auto first = static_cast<std::size_t>(std::floor(lo / sz));
        auto& slab = slabs[k];
        double total = 0.0;
        for (std::size_t j = first; j < nz; ++j) {
            const double jlo = static_cast<double>(j) * sz;
            if (jlo >= hi) {
                break;
            }
            const double overlap = std::min(hi, jlo + sz) - std::max(lo, jlo);
            if (overlap > kOverlapFloor * tMm) {
                slab.slices.push_back(j);
                slab.weights.push_back(overlap);
                total += overlap;
            }
        }
        for (auto& w : slab.weights) {
            w /= total;
        }
    }
    return slabs;
}

ScalarVolume simulate_thickness(const ScalarVolume& v, double tMm) {
    const auto& dims = v.dims();
    const auto slabs = slab_layout(dims.nz, v.spacing().sz, tMm);
    const Dims outDims{dims.nx, dims.ny, slabs.size()};
    std::vector<float> out(outDims.count());
    std::vector<const float*> rows;
    const auto& kern = simd::kernels();
    for (std::size_t k = 0; k < slabs.size(); ++k) {
        rows.clear();
        for (auto j : slabs[k].slices) {
            rows.push_back(v.slice(j).data());
        }
        kern.weighted_sum(rows.data(), slabs[k].weights.data(), rows.size(), out.data() + k * dims.slice_size(),
                          dims.slice_size());
    }
    return ScalarVolume(outDims, Spacing{v.spacing().sx, v.spacing().sy, tMm}, std::move(out));
}

RoiMask resample_mask(const RoiMask& m, const Spacing& fromSpacing, double tMm) {
    const auto& dims = m.dims();
    const auto slabs = slab_layout(dims.nz, fromSpacing.sz, tMm);
    const Dims outDims{dims.nx, dims.ny, slabs.size()};
    std::vector<std::uint8_t> bits(outDims.count(), 0);
    const auto plane = dims.slice_size();
    const auto src = m.bits();
    for (std::size_t k = 0; k < slabs.size(); ++k) {
        const auto& slab = slabs[k];
        for (std::size_t p = 0; p < plane; ++p) {
            double frac = 0.0;
            for (std::size_t s = 0; s < slab.slices.size(); ++s) {
                if (src[slab.slices[s] * plane + p] != 0) {
                    frac += slab.weights[s];
                }
            }
            // Ties at exactly one half are included.
            bits[k * plane + p] = frac >= 0.5 - kLengthTolerance ? 1 : 0;
        }
    }
    return RoiMask(outDims, std::move(bits));
}

ScalarVolume reconstruct(const CaseRecord& record, const ReconCondition& c, const SimulatorConfig& cfg) {
    const auto dosed = simulate_dose(record.baseVolume, c.doseFraction, cfg, record.caseId);
    const auto sharpened = simulate_kernel(dosed, c.kernelIndex, cfg);
    return simulate_thickness(sharpened, c.thicknessMm);
}

CaseRecord make_case_record(std::string caseId, ScalarVolume volume, RoiMask mask,
                            std::span<const double> thicknessesMm) {
    check_congruent(volume, mask);
    CaseRecord record{std::move(caseId), std::move(volume), std::move(mask), {}};
    for (double t : thicknessesMm) {
        record.baseMasksByThickness.emplace(t, resample_mask(record.baseMask, record.baseVolume.spacing(), t));
    }
    return record;
}

} // namespace radcompat::sim
