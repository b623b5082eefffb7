#include "radcompat/phantom/phantom.hpp"

#include "radcompat/core/error.hpp"
#include "radcompat/core/filter.hpp"
#include "radcompat/core/seed.hpp"
#include "radcompat/sim/condition_sim.hpp"

#include <cmath>
#include <random>

namespace radcompat::phantom {

namespace {

double extent(std::size_t n, double s) { return static_cast<double>(n) * s; }

std::vector<float> gaussian_field(const PhantomSpec& spec, const GaussianFieldTexture& tex) {
    const auto& d = spec.dims;
    std::mt19937_64 rng(derive_seed(spec.seed, 0x7465787475726500ULL));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<float> field(d.count());
    for (auto& v : field) {
        v = static_cast<float>(normal(rng));
    }
    const auto& s = spec.baseSpacing;
    field = convolve_axis(field, d, Axis::X, gaussian_weights(tex.correlationLengthMm / s.sx));
    field = convolve_axis(field, d, Axis::Y, gaussian_weights(tex.correlationLengthMm / s.sy));
    field = convolve_axis(field, d, Axis::Z, gaussian_weights(tex.correlationLengthMm / s.sz));

    double mean = 0.0;
    for (float v : field) {
        mean += v;
    }
    mean /= static_cast<double>(field.size());
    double ss = 0.0;
    for (float v : field) {
        ss += (v - mean) * (v - mean);
    }
    const double sd = std::sqrt(ss / static_cast<double>(field.size()));
    const double scale = sd > 0.0 ? tex.amplitudeHU / sd : 0.0;
    for (auto& v : field) {
        v = static_cast<float>((v - mean) * scale);
    }
    return field;
}

} // namespace

Vec3 PhantomSpec::center() const {
    if (centerMm) {
        return *centerMm;
    }
    return {extent(dims.nx, baseSpacing.sx) / 2.0, extent(dims.ny, baseSpacing.sy) / 2.0,
            extent(dims.nz, baseSpacing.sz) / 2.0};
}

void PhantomSpec::validate() const {
    if (dims.nx == 0 || dims.ny == 0 || dims.nz == 0) {
        throw ValidationError("phantom dims must be positive");
    }
    for (double s : {baseSpacing.sx, baseSpacing.sy, baseSpacing.sz}) {
        if (!std::isfinite(s) || s <= 0.0) {
            throw ValidationError("phantom spacing must be positive");
        }
    }
    for (double r : {radiiMm.x, radiiMm.y, radiiMm.z}) {
        if (!std::isfinite(r) || r <= 0.0) {
            throw ValidationError("phantom radii must be positive");
        }
    }
    if (shape == Shape::Sphere && !(radiiMm.x == radiiMm.y && radiiMm.y == radiiMm.z)) {
        throw ValidationError("sphere phantom needs equal radii");
    }
    if (!std::isfinite(backgroundHU) || !std::isfinite(nodulePeakHU)) {
        throw ValidationError("phantom intensities must be finite");
    }
    if (const auto* g = std::get_if<GaussianFieldTexture>(&texture)) {
        if (!(g->amplitudeHU >= 0.0) || !std::isfinite(g->amplitudeHU)) {
            throw ValidationError("texture amplitudeHU must be >= 0");
        }
        if (!(g->correlationLengthMm > 0.0) || !std::isfinite(g->correlationLengthMm)) {
            throw ValidationError("texture correlationLengthMm must be > 0");
        }
    }
    const Vec3 c = center();
    const auto fits = [](double center, double radius, std::size_t n, double s, const char* axis) {
        const double margin = 2.0 * s;
        if (center - radius < margin || center + radius > extent(n, s) - margin) {
            throw ValidationError(std::string("nodule exceeds the grid along ") + axis +
                                  " (needs a 2-voxel margin)");
        }
    };
    fits(c.x, radiiMm.x, dims.nx, baseSpacing.sx, "x");
    fits(c.y, radiiMm.y, dims.ny, baseSpacing.sy, "y");
    fits(c.z, radiiMm.z, dims.nz, baseSpacing.sz, "z");
}

bool inside(const PhantomSpec& spec, std::size_t x, std::size_t y, std::size_t z) {
    const Vec3 c = spec.center();
    const double dx = ((static_cast<double>(x) + 0.5) * spec.baseSpacing.sx - c.x) / spec.radiiMm.x;
    const double dy = ((static_cast<double>(y) + 0.5) * spec.baseSpacing.sy - c.y) / spec.radiiMm.y;
    const double dz = ((static_cast<double>(z) + 0.5) * spec.baseSpacing.sz - c.z) / spec.radiiMm.z;
    return dx * dx + dy * dy + dz * dz <= 1.0;
}

PhantomImage generate_phantom(const PhantomSpec& spec) {
    spec.validate();
    const auto& d = spec.dims;
    std::vector<float> field;
    if (const auto* g = std::get_if<GaussianFieldTexture>(&spec.texture); g != nullptr && g->amplitudeHU > 0.0) {
        field = gaussian_field(spec, *g);
    }
    std::vector<float> voxels(d.count(), static_cast<float>(spec.backgroundHU));
    std::vector<std::uint8_t> bits(d.count(), 0);
    for (std::size_t z = 0; z < d.nz; ++z) {
        for (std::size_t y = 0; y < d.ny; ++y) {
            for (std::size_t x = 0; x < d.nx; ++x) {
                if (!inside(spec, x, y, z)) {
                    continue;
                }
                const auto i = d.index(x, y, z);
                bits[i] = 1;
                voxels[i] = static_cast<float>(spec.nodulePeakHU + (field.empty() ? 0.0 : field[i]));
            }
        }
    }
    return {ScalarVolume(d, spec.baseSpacing, std::move(voxels)), RoiMask(d, std::move(bits))};
}

std::string case_id(std::size_t index, std::size_t n) {
    const auto width = std::max<std::size_t>(2, std::to_string(n).size());
    auto digits = std::to_string(index + 1);
    return "case_" + std::string(width - std::min(width, digits.size()), '0') + digits;
}

std::vector<CohortCase> cohort_specs(std::size_t n, const PhantomSpec& base, const CohortJitter& jitter,
                                     std::uint64_t seed) {
    if (n == 0) {
        throw ValidationError("cohort size must be >= 1");
    }
    std::vector<CohortCase> cases;
    cases.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::mt19937_64 rng(derive_seed(seed, i));
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        PhantomSpec spec = base;
        spec.seed = derive_seed(seed, i, 1);
        const double rscale = 1.0 + jitter.radiusFraction * unit(rng);
        spec.radiiMm = {base.radiiMm.x * rscale, base.radiiMm.y * rscale, base.radiiMm.z * rscale};
        if (spec.shape == Shape::Ellipsoid) {
            spec.radiiMm.y = base.radiiMm.y * (1.0 + jitter.radiusFraction * unit(rng));
            spec.radiiMm.z = base.radiiMm.z * (1.0 + jitter.radiusFraction * unit(rng));
        }
        const Vec3 c = base.center();
        spec.centerMm = Vec3{c.x + jitter.centerMm * unit(rng), c.y + jitter.centerMm * unit(rng),
                             c.z + jitter.centerMm * unit(rng)};
        if (auto* g = std::get_if<GaussianFieldTexture>(&spec.texture)) {
            g->amplitudeHU *= 1.0 + jitter.amplitudeFraction * unit(rng);
            g->correlationLengthMm *= 1.0 + jitter.correlationFraction * unit(rng);
        }
        try {
            spec.validate();
        } catch (const ValidationError& e) {
            throw ValidationError("cohort case " + std::to_string(i) + ": " + e.what());
        }
        cases.push_back({case_id(i, n), spec});
    }
    return cases;
}

std::vector<CaseRecord> generate_cohort(std::size_t n, const PhantomSpec& base, const CohortJitter& jitter,
                                        std::uint64_t seed, std::span<const double> thicknessesMm) {
    std::vector<CaseRecord> out;
    for (auto& c : cohort_specs(n, base, jitter, seed)) {
        auto image = generate_phantom(c.spec);
        out.push_back(sim::make_case_record(c.caseId, std::move(image.volume), std::move(image.mask), thicknessesMm));
    }
    return out;
}

} // namespace radcompat::phantom
