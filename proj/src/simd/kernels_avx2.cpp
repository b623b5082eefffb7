#include "radcompat/simd/kernels.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define RADCOMPAT_HAVE_AVX2 1
#include <immintrin.h>
#else
#define RADCOMPAT_HAVE_AVX2 0
#endif

#include <cmath>

namespace radcompat::simd {

#if RADCOMPAT_HAVE_AVX2

namespace {

#define RADCOMPAT_AVX2 __attribute__((target("avx2")))

RADCOMPAT_AVX2 void weighted_sum_avx2(const float* const* rows, const double* weights, std::size_t taps,
                                      float* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d lo = _mm256_setzero_pd();
        __m256d hi = _mm256_setzero_pd();
        for (std::size_t k = 0; k < taps; ++k) {
            const __m256d w = _mm256_set1_pd(weights[k]);
            const __m256 x = _mm256_loadu_ps(rows[k] + i);
            lo = _mm256_add_pd(lo, _mm256_mul_pd(w, _mm256_cvtps_pd(_mm256_castps256_ps128(x))));
            hi = _mm256_add_pd(hi, _mm256_mul_pd(w, _mm256_cvtps_pd(_mm256_extractf128_ps(x, 1))));
        }
        const __m256 packed =
            _mm256_insertf128_ps(_mm256_castps128_ps256(_mm256_cvtpd_ps(lo)), _mm256_cvtpd_ps(hi), 1);
        _mm256_storeu_ps(out + i, packed);
    }
    for (; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < taps; ++k) {
            acc = acc + weights[k] * static_cast<double>(rows[k][i]);
        }
        out[i] = static_cast<float>(acc);
    }
}

RADCOMPAT_AVX2 void unsharp_avx2(const float* in, const float* blurred, double amount, float* out,
                                 std::size_t n) {
    const __m256d a = _mm256_set1_pd(amount);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_cvtps_pd(_mm_loadu_ps(in + i));
        const __m256d b = _mm256_cvtps_pd(_mm_loadu_ps(blurred + i));
        const __m256d r = _mm256_add_pd(x, _mm256_mul_pd(a, _mm256_sub_pd(x, b)));
        _mm_storeu_ps(out + i, _mm256_cvtpd_ps(r));
    }
    for (; i < n; ++i) {
        const double x = in[i];
        out[i] = static_cast<float>(x + amount * (x - static_cast<double>(blurred[i])));
    }
}

RADCOMPAT_AVX2 void add_scaled_avx2(const float* in, const double* noise, double sigma, float* out,
                                    std::size_t n) {
    const __m256d s = _mm256_set1_pd(sigma);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_cvtps_pd(_mm_loadu_ps(in + i));
        const __m256d r = _mm256_add_pd(x, _mm256_mul_pd(s, _mm256_loadu_pd(noise + i)));
        _mm_storeu_ps(out + i, _mm256_cvtpd_ps(r));
    }
    for (; i < n; ++i) {
        out[i] = static_cast<float>(static_cast<double>(in[i]) + sigma * noise[i]);
    }
}

RADCOMPAT_AVX2 std::size_t count_compatible_avx2(const double* meanA, const double* varA, const double* meanB,
                                                 const double* varB, std::size_t n, double threshold) {
    const __m256d thr = _mm256_set1_pd(threshold);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d sign = _mm256_set1_pd(-0.0);
    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(meanA + i), _mm256_loadu_pd(meanB + i));
        const __m256d v = _mm256_add_pd(_mm256_loadu_pd(varA + i), _mm256_loadu_pd(varB + i));
        __m256d t = _mm256_div_pd(_mm256_andnot_pd(sign, d), _mm256_sqrt_pd(v));
        t = _mm256_blendv_pd(t, zero, _mm256_cmp_pd(d, zero, _CMP_EQ_OQ));
        const int bits = _mm256_movemask_pd(_mm256_cmp_pd(t, thr, _CMP_LT_OQ));
        count += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(bits)));
    }
    for (; i < n; ++i) {
        const double d = meanA[i] - meanB[i];
        const double t = d == 0.0 ? 0.0 : std::fabs(d) / std::sqrt(varA[i] + varB[i]);
        count += t < threshold ? 1 : 0;
    }
    return count;
}

#undef RADCOMPAT_AVX2

} // namespace

const KernelTable* avx2_kernels() {
    static const KernelTable table{Isa::Avx2, weighted_sum_avx2, unsharp_avx2, add_scaled_avx2,
                                   count_compatible_avx2};
    return &table;
}

bool cpu_has_avx2() {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
}

#else

const KernelTable* avx2_kernels() { return nullptr; }

bool cpu_has_avx2() { return false; }

#endif

} // namespace radcompat::simd
