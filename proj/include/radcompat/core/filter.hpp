#pragma once

#include "radcompat/core/volume.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace radcompat {

enum class Axis { X = 0, Y = 1, Z = 2 };

/// Normalized Gaussian taps truncated at radius max(1, ceil(3 sigma)).
/// sigma <= 0 yields the single tap {1}.
[[nodiscard]] std::vector<double> gaussian_weights(double sigmaVoxels);

/// Symmetric reflection with the edge sample repeated: -1 -> 0, n -> n-1.
[[nodiscard]] std::ptrdiff_t reflect_index(std::ptrdiff_t i, std::ptrdiff_t n);

/// 1-D convolution along one axis of a row-major grid, reflect boundaries.
/// weights has odd length 2r+1 and is centered.
[[nodiscard]] std::vector<float> convolve_axis(std::span<const float> data, Dims dims, Axis axis,
                                               std::span<const double> weights);

} // namespace radcompat
