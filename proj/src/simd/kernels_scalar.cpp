#include "radcompat/simd/kernels.hpp"

#include <cmath>

namespace radcompat::simd {

namespace {

void weighted_sum_scalar(const float* const* rows, const double* weights, std::size_t taps, float* out,
                         std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < taps; ++k) {
            acc = acc + weights[k] * static_cast<double>(rows[k][i]);
        }
        out[i] = static_cast<float>(acc);
    }
}

void unsharp_scalar(const float* in, const float* blurred, double amount, float* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double x = in[i];
        out[i] = static_cast<float>(x + amount * (x - static_cast<double>(blurred[i])));
    }
}

void add_scaled_scalar(const float* in, const double* noise, double sigma, float* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = static_cast<float>(static_cast<double>(in[i]) + sigma * noise[i]);
    }
}

std::size_t count_compatible_scalar(const double* meanA, const double* varA, const double* meanB,
                                    const double* varB, std::size_t n, double threshold) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = meanA[i] - meanB[i];
        const double t = d == 0.0 ? 0.0 : std::fabs(d) / std::sqrt(varA[i] + varB[i]);
        count += t < threshold ? 1 : 0;
    }
    return count;
}

} // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{Isa::Scalar, weighted_sum_scalar, unsharp_scalar, add_scaled_scalar,
                                   count_compatible_scalar};
    return table;
}

} // namespace radcompat::simd
