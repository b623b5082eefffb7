#include "radcompat/core/error.hpp"
#include "radcompat/simd/kernels.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>

using namespace radcompat;
using namespace radcompat::simd;

namespace {

bool bits_equal(const std::vector<float>& a, const std::vector<float>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(float)) == 0;
}

const KernelTable* vector_table() {
    return cpu_supports(Isa::Avx2) ? avx2_kernels() : nullptr;
}

std::vector<float> random_floats(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<float> u(-1200.0f, 400.0f);
    std::vector<float> v(n);
    for (auto& x : v) {
        x = u(rng);
    }
    return v;
}

} // namespace

TEST(Simd, ScalarTableIsAlwaysAvailable) {
    EXPECT_EQ(scalar_kernels().isa, Isa::Scalar);
    EXPECT_TRUE(cpu_supports(Isa::Scalar));
    EXPECT_EQ(&kernels_for(Isa::Scalar), &scalar_kernels());
    EXPECT_EQ(isa_name(Isa::Avx2), "avx2");
}

TEST(Simd, UnavailableIsaIsRefused) {
    if (cpu_supports(Isa::Avx2)) {
        GTEST_SKIP() << "AVX2 present";
    }
    EXPECT_THROW((void)kernels_for(Isa::Avx2), DomainError);
}

TEST(Simd, WeightedSumMatchesScalarBitForBit) {
    const auto* vec = vector_table();
    if (vec == nullptr) {
        GTEST_SKIP() << "no vector ISA on this CPU";
    }
    std::mt19937_64 rng(11);
    for (std::size_t n : {1u, 7u, 8u, 9u, 31u, 1600u, 1603u}) {
        for (std::size_t taps : {1u, 2u, 5u, 17u}) {
            std::vector<std::vector<float>> rows;
            std::vector<const float*> ptrs;
            std::vector<double> w(taps);
            for (std::size_t k = 0; k < taps; ++k) {
                rows.push_back(random_floats(rng, n));
                w[k] = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            }
            for (const auto& r : rows) {
                ptrs.push_back(r.data());
            }
            std::vector<float> a(n), b(n);
            scalar_kernels().weighted_sum(ptrs.data(), w.data(), taps, a.data(), n);
            vec->weighted_sum(ptrs.data(), w.data(), taps, b.data(), n);
            EXPECT_TRUE(bits_equal(a, b)) << "n=" << n << " taps=" << taps;
        }
    }
}

TEST(Simd, UnsharpAndAddScaledMatchScalar) {
    const auto* vec = vector_table();
    if (vec == nullptr) {
        GTEST_SKIP() << "no vector ISA on this CPU";
    }
    std::mt19937_64 rng(12);
    for (std::size_t n : {3u, 8u, 13u, 4096u, 4099u}) {
        const auto in = random_floats(rng, n);
        const auto blurred = random_floats(rng, n);
        std::vector<double> noise(n);
        std::normal_distribution<double> normal;
        for (auto& z : noise) {
            z = normal(rng);
        }
        std::vector<float> a(n), b(n);
        scalar_kernels().unsharp(in.data(), blurred.data(), 1.37, a.data(), n);
        vec->unsharp(in.data(), blurred.data(), 1.37, b.data(), n);
        EXPECT_TRUE(bits_equal(a, b));
        scalar_kernels().add_scaled(in.data(), noise.data(), 17.3, a.data(), n);
        vec->add_scaled(in.data(), noise.data(), 17.3, b.data(), n);
        EXPECT_TRUE(bits_equal(a, b));
    }
}

TEST(Simd, CountCompatibleMatchesScalarIncludingSpecialLanes) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t n : {1u, 3u, 4u, 5u, 644u, 1001u}) {
        std::vector<double> ma(n), va(n), mb(n), vb(n);
        for (std::size_t i = 0; i < n; ++i) {
            ma[i] = u(rng);
            mb[i] = ma[i] + u(rng);
            va[i] = std::fabs(u(rng)) * 0.5;
            vb[i] = std::fabs(u(rng)) * 0.5;
            switch (i % 7) {
            case 0:
                mb[i] = ma[i]; // equal means
                break;
            case 1:
                va[i] = vb[i] = 0.0; // zero spread, unequal means
                break;
            case 2:
                ma[i] = va[i] = nan; // unusable lane
                break;
            case 3:
                mb[i] = ma[i];
                va[i] = vb[i] = 0.0;
                break;
            default:
                break;
            }
        }
        const auto expected = scalar_kernels().count_compatible(ma.data(), va.data(), mb.data(), vb.data(), n, 1.96);
        std::size_t manual = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = ma[i] - mb[i];
            const double t = d == 0.0 ? 0.0 : std::fabs(d) / std::sqrt(va[i] + vb[i]);
            manual += t < 1.96 ? 1 : 0;
        }
        EXPECT_EQ(expected, manual);
        if (const auto* vec = vector_table()) {
            EXPECT_EQ(vec->count_compatible(ma.data(), va.data(), mb.data(), vb.data(), n, 1.96), expected);
        }
    }
}

TEST(Simd, ThresholdIsStrict) {
    // t exactly 2: |d| = 2, var sum = 1.
    const double ma = 0.0, mb = 2.0, va = 0.5, vb = 0.5;
    EXPECT_EQ(scalar_kernels().count_compatible(&ma, &va, &mb, &vb, 1, 2.0), 0u);
    EXPECT_EQ(scalar_kernels().count_compatible(&ma, &va, &mb, &vb, 1, 2.0000001), 1u);
    if (const auto* vec = vector_table()) {
        EXPECT_EQ(vec->count_compatible(&ma, &va, &mb, &vb, 1, 2.0), 0u);
    }
}
