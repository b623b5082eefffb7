#include "radcompat/core/condition.hpp"
#include "radcompat/core/error.hpp"
#include "radcompat/core/volume.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

namespace radcompat {

namespace {

bool valid_spacing(const Spacing& s) {
    return std::isfinite(s.sx) && std::isfinite(s.sy) && std::isfinite(s.sz) && s.sx > 0.0 &&
           s.sy > 0.0 && s.sz > 0.0;
}

} // namespace

ScalarVolume::ScalarVolume(Dims dims, Spacing spacing, std::vector<float> voxels)
    : dims_(dims), spacing_(spacing), voxels_(std::move(voxels)) {
    if (dims_.nx == 0 || dims_.ny == 0 || dims_.nz == 0) {
        throw ValidationError("volume dims must be positive");
    }
    if (voxels_.size() != dims_.count()) {
        throw ValidationError("volume has " + std::to_string(voxels_.size()) + " voxels, dims require " +
                              std::to_string(dims_.count()));
    }
    if (!valid_spacing(spacing_)) {
        throw ValidationError("volume spacing must be finite and positive");
    }
    const auto bad = std::find_if(voxels_.begin(), voxels_.end(), [](float v) { return !std::isfinite(v); });
    if (bad != voxels_.end()) {
        throw ValidationError("non-finite intensity at voxel " + std::to_string(bad - voxels_.begin()));
    }
}

ScalarVolume ScalarVolume::filled(Dims dims, Spacing spacing, float value) {
    return ScalarVolume(dims, spacing, std::vector<float>(dims.count(), value));
}

std::span<const float> ScalarVolume::slice(std::size_t z) const {
    return std::span<const float>(voxels_).subspan(z * dims_.slice_size(), dims_.slice_size());
}

RoiMask::RoiMask(Dims dims, std::vector<std::uint8_t> bits) : dims_(dims), bits_(std::move(bits)) {
    if (dims_.nx == 0 || dims_.ny == 0 || dims_.nz == 0) {
        throw ValidationError("mask dims must be positive");
    }
    if (bits_.size() != dims_.count()) {
        throw ValidationError("mask has " + std::to_string(bits_.size()) + " entries, dims require " +
                              std::to_string(dims_.count()));
    }
    for (auto& b : bits_) {
        b = b != 0 ? 1 : 0;
    }
}

std::size_t RoiMask::count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::size_t RoiMask::slice_count(std::size_t z) const {
    const auto begin = bits_.begin() + static_cast<std::ptrdiff_t>(z * dims_.slice_size());
    return static_cast<std::size_t>(
        std::count(begin, begin + static_cast<std::ptrdiff_t>(dims_.slice_size()), std::uint8_t{1}));
}

void check_congruent(const ScalarVolume& volume, const RoiMask& mask) {
    if (!(volume.dims() == mask.dims())) {
        const auto fmt = [](const Dims& d) {
            return std::to_string(d.nx) + "x" + std::to_string(d.ny) + "x" + std::to_string(d.nz);
        };
        throw ValidationError("mask dims " + fmt(mask.dims()) + " do not match volume dims " +
                              fmt(volume.dims()));
    }
}

std::string_view kernel_name(int index) {
    if (index < 0 || index >= static_cast<int>(kKernelNames.size())) {
        throw DomainError("kernel index " + std::to_string(index) + " outside 0..9");
    }
    return kKernelNames[static_cast<std::size_t>(index)];
}

int kernel_index(std::string_view name) {
    const auto it = std::find(kKernelNames.begin(), kKernelNames.end(), name);
    if (it == kKernelNames.end()) {
        throw ConfigError("unknown kernel '" + std::string(name) + "'");
    }
    return static_cast<int>(it - kKernelNames.begin());
}

bool canonical_less(const ReconCondition& a, const ReconCondition& b) {
    if (a.thicknessMm != b.thicknessMm) {
        return a.thicknessMm > b.thicknessMm;
    }
    if (a.kernelIndex != b.kernelIndex) {
        return a.kernelIndex < b.kernelIndex;
    }
    return a.doseFraction > b.doseFraction;
}

std::string format_minimal(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", value);
    return buf;
}

std::string condition_label(const ReconCondition& c) {
    return "T" + format_minimal(c.thicknessMm) + "_K" + std::string(kernel_name(c.kernelIndex)) + "_D" +
           format_minimal(c.doseFraction * 100.0);
}

void ConditionGridConfig::validate() const {
    if (doses.empty()) {
        throw ConfigError("grid.doses is empty");
    }
    if (kernels.empty()) {
        throw ConfigError("grid.kernels is empty");
    }
    if (thicknessesMm.empty()) {
        throw ConfigError("grid.thicknessesMm is empty");
    }
    for (double d : doses) {
        if (!std::isfinite(d) || d <= 0.0 || d > 1.0) {
            throw ConfigError("dose fraction " + format_minimal(d) + " outside (0, 1]");
        }
    }
    for (int k : kernels) {
        if (k < 0 || k >= static_cast<int>(kKernelNames.size())) {
            throw ConfigError("kernel index " + std::to_string(k) + " outside 0..9");
        }
    }
    for (double t : thicknessesMm) {
        if (!std::isfinite(t) || t <= 0.0) {
            throw ConfigError("slice thickness " + format_minimal(t) + " must be positive");
        }
    }
    if (std::set<double>(doses.begin(), doses.end()).size() != doses.size()) {
        throw ConfigError("grid.doses contains duplicates");
    }
    if (std::set<int>(kernels.begin(), kernels.end()).size() != kernels.size()) {
        throw ConfigError("grid.kernels contains duplicates");
    }
    if (std::set<double>(thicknessesMm.begin(), thicknessesMm.end()).size() != thicknessesMm.size()) {
        throw ConfigError("grid.thicknessesMm contains duplicates");
    }
}

std::vector<ReconCondition> enumerate_conditions(const ConditionGridConfig& grid) {
    grid.validate();
    auto thicknesses = grid.thicknessesMm;
    auto kernels = grid.kernels;
    auto doses = grid.doses;
    std::sort(thicknesses.begin(), thicknesses.end(), std::greater<>());
    std::sort(kernels.begin(), kernels.end());
    std::sort(doses.begin(), doses.end(), std::greater<>());

    std::vector<ReconCondition> out;
    out.reserve(grid.size());
    for (double t : thicknesses) {
        for (int k : kernels) {
            for (double d : doses) {
                out.push_back(ReconCondition{d, k, t});
            }
        }
    }
    return out;
}

} // namespace radcompat
