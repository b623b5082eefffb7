#include "radcompat/core/filter.hpp"

#include "radcompat/core/error.hpp"
#include "radcompat/simd/kernels.hpp"

#include <cmath>

namespace radcompat {

std::vector<double> gaussian_weights(double sigmaVoxels) {
    if (!(sigmaVoxels > 0.0) || !std::isfinite(sigmaVoxels)) {
        return {1.0};
    }
    const auto radius = std::max<std::ptrdiff_t>(1, static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigmaVoxels)));
    std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
        const double v = std::exp(-0.5 * static_cast<double>(k * k) / (sigmaVoxels * sigmaVoxels));
        w[static_cast<std::size_t>(k + radius)] = v;
        sum += v;
    }
    for (auto& v : w) {
        v /= sum;
    }
    return w;
}

std::ptrdiff_t reflect_index(std::ptrdiff_t i, std::ptrdiff_t n) {
    if (n == 1) {
        return 0;
    }
    const std::ptrdiff_t period = 2 * n;
    i %= period;
    if (i < 0) {
        i += period;
    }
    return i < n ? i : period - 1 - i;
}

std::vector<float> convolve_axis(std::span<const float> data, Dims dims, Axis axis,
                                  std::span<const double> weights) {
    if (data.size() != dims.count()) {
        throw ValidationError("convolve_axis: data size does not match dims");
    }
    if (weights.size() % 2 == 0) {
        throw DomainError("convolve_axis: weight count must be odd");
    }
    const auto& kern = simd::kernels();
    const std::size_t taps = weights.size();
    const auto radius = static_cast<std::ptrdiff_t>(taps / 2);
    std::vector<float> out(data.size());
    std::vector<const float*> rows(taps);

    const auto nx = static_cast<std::ptrdiff_t>(dims.nx);
    const auto ny = static_cast<std::ptrdiff_t>(dims.ny);
    const auto nz = static_cast<std::ptrdiff_t>(dims.nz);
    const float* base = data.data();

    switch (axis) {
    case Axis::X:
        for (std::ptrdiff_t z = 0; z < nz; ++z) {
            for (std::ptrdiff_t y = 0; y < ny; ++y) {
                const float* row = base + (z * ny + y) * nx;
                float* dst = out.data() + (z * ny + y) * nx;
                const auto border = [&](std::ptrdiff_t x) {
                    double acc = 0.0;
                    for (std::size_t k = 0; k < taps; ++k) {
                        const auto src = reflect_index(x + static_cast<std::ptrdiff_t>(k) - radius, nx);
                        acc = acc + weights[k] * static_cast<double>(row[src]);
                    }
                    dst[x] = static_cast<float>(acc);
                };
                if (nx > 2 * radius) {
                    for (std::size_t k = 0; k < taps; ++k) {
                        rows[k] = row + k;
                    }
                    kern.weighted_sum(rows.data(), weights.data(), taps, dst + radius,
                                      static_cast<std::size_t>(nx - 2 * radius));
                    for (std::ptrdiff_t x = 0; x < radius; ++x) {
                        border(x);
                        border(nx - 1 - x);
                    }
                } else {
                    for (std::ptrdiff_t x = 0; x < nx; ++x) {
                        border(x);
                    }
                }
            }
        }
        break;
    case Axis::Y:
        for (std::ptrdiff_t z = 0; z < nz; ++z) {
            for (std::ptrdiff_t y = 0; y < ny; ++y) {
                for (std::size_t k = 0; k < taps; ++k) {
                    const auto src = reflect_index(y + static_cast<std::ptrdiff_t>(k) - radius, ny);
                    rows[k] = base + (z * ny + src) * nx;
                }
                kern.weighted_sum(rows.data(), weights.data(), taps, out.data() + (z * ny + y) * nx,
                                  dims.nx);
            }
        }
        break;
    case Axis::Z:
        for (std::ptrdiff_t z = 0; z < nz; ++z) {
            for (std::size_t k = 0; k < taps; ++k) {
                const auto src = reflect_index(z + static_cast<std::ptrdiff_t>(k) - radius, nz);
                rows[k] = base + src * nx * ny;
            }
            kern.weighted_sum(rows.data(), weights.data(), taps, out.data() + z * nx * ny, dims.slice_size());
        }
        break;
    }
    return out;
}

} // namespace radcompat
