#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference and, on x86-64,
// an AVX2 variant selected at runtime. Both variants perform the same IEEE
// operations in the same order per element, so their outputs are bit-identical.

#include <cstddef>
#include <string_view>

namespace radcompat::simd {

enum class Isa { Scalar, Avx2 };

[[nodiscard]] std::string_view isa_name(Isa isa);

struct KernelTable {
    Isa isa;

    /// out[i] = float(sum_k weights[k] * rows[k][i]), accumulated in double, k ascending.
    void (*weighted_sum)(const float* const* rows, const double* weights, std::size_t taps, float* out,
                         std::size_t n);

    /// out[i] = float(in[i] + amount * (in[i] - blurred[i])) in double.
    void (*unsharp)(const float* in, const float* blurred, double amount, float* out, std::size_t n);

    /// out[i] = float(in[i] + sigma * noise[i]) in double.
    void (*add_scaled)(const float* in, const double* noise, double sigma, float* out, std::size_t n);

    /// Counts lanes with t < threshold where t = 0 if meanA == meanB, else
    /// |meanA - meanB| / sqrt(varA + varB). NaN lanes never count.
    std::size_t (*count_compatible)(const double* meanA, const double* varA, const double* meanB,
                                    const double* varB, std::size_t n, double threshold);
};

[[nodiscard]] const KernelTable& scalar_kernels();

/// nullptr when the build has no AVX2 variant.
[[nodiscard]] const KernelTable* avx2_kernels();

[[nodiscard]] bool cpu_supports(Isa isa);

/// Table for a specific ISA; throws DomainError if the CPU or build lacks it.
[[nodiscard]] const KernelTable& kernels_for(Isa isa);

/// Best table for this CPU. RADCOMPAT_SIMD=scalar forces the reference kernels.
[[nodiscard]] const KernelTable& kernels();

} // namespace radcompat::simd
