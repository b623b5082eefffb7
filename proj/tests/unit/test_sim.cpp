#include "radcompat/core/error.hpp"
#include "radcompat/phantom/phantom.hpp"
#include "radcompat/sim/condition_sim.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace radcompat;
using namespace radcompat::sim;

namespace {

double mean_of(std::span<const float> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sd_of(std::span<const float> v) {
    const double m = mean_of(v);
    double ss = 0;
    for (float x : v) {
        ss += (x - m) * (x - m);
    }
    return std::sqrt(ss / static_cast<double>(v.size()));
}

ScalarVolume ramp_z(std::size_t nz, double sz) {
    std::vector<float> v(2 * 2 * nz);
    for (std::size_t z = 0; z < nz; ++z) {
        for (std::size_t i = 0; i < 4; ++i) {
            v[z * 4 + i] = static_cast<float>(z);
        }
    }
    return ScalarVolume({2, 2, nz}, {1.0, 1.0, sz}, v);
}

} // namespace

TEST(Dose, FullDoseIsIdentity) {
    const auto v = ScalarVolume::filled({8, 8, 8}, {}, 5.0f);
    EXPECT_EQ(simulate_dose(v, 1.0, {}, "c"), v);
}

TEST(Dose, NoiseFollowsInverseSquareRootLaw) {
    const auto v = ScalarVolume::filled({64, 64, 16}, {}, 0.0f);
    SimulatorConfig cfg;
    cfg.refNoiseHU = 10.0;
    for (double f : {0.5, 0.25, 0.125}) {
        const auto noisy = simulate_dose(v, f, cfg, "c");
        const double expected = 10.0 * std::sqrt(1.0 / f - 1.0);
        EXPECT_NEAR(sd_of(noisy.voxels()), expected, expected * 0.02);
        EXPECT_NEAR(mean_of(noisy.voxels()), 0.0, expected * 0.02);
    }
}

TEST(Dose, SeededByCaseAndDose) {
    const auto v = ScalarVolume::filled({8, 8, 8}, {}, 0.0f);
    SimulatorConfig cfg;
    EXPECT_EQ(simulate_dose(v, 0.5, cfg, "a"), simulate_dose(v, 0.5, cfg, "a"));
    EXPECT_FALSE(simulate_dose(v, 0.5, cfg, "a") == simulate_dose(v, 0.5, cfg, "b"));
    cfg.seed = 1;
    EXPECT_FALSE(simulate_dose(v, 0.5, cfg, "a") == simulate_dose(v, 0.5, SimulatorConfig{}, "a"));
}

TEST(Dose, RejectsOutOfRangeFraction) {
    const auto v = ScalarVolume::filled({2, 2, 2}, {}, 0.0f);
    EXPECT_THROW((void)simulate_dose(v, 0.0, {}, "c"), DomainError);
    EXPECT_THROW((void)simulate_dose(v, 1.5, {}, "c"), DomainError);
}

TEST(Kernel, SharperKernelsRaiseNoise) {
    const auto base = ScalarVolume::filled({48, 48, 4}, {0.6, 0.6, 0.3}, 0.0f);
    const auto noisy = simulate_dose(base, 0.25, {}, "c");
    double previous = 0.0;
    for (int k = 0; k < 10; ++k) {
        const double sd = sd_of(simulate_kernel(noisy, k, {}).voxels());
        EXPECT_GT(sd, previous) << "kernel " << k;
        previous = sd;
    }
}

TEST(Kernel, PreservesConstantImage) {
    const auto v = ScalarVolume::filled({16, 16, 2}, {0.6, 0.6, 0.3}, -300.0f);
    for (int k = 0; k < 10; ++k) {
        for (float x : simulate_kernel(v, k, {}).voxels()) {
            EXPECT_NEAR(x, -300.0f, 1e-3);
        }
    }
}

TEST(Kernel, DefaultKappaSpansMinusOneToOne) {
    const auto k = SimulatorConfig::default_kappa();
    EXPECT_EQ(k.front(), -1.0);
    EXPECT_DOUBLE_EQ(k.back(), 1.0);
    SimulatorConfig cfg;
    cfg.kernelKappa[3] = 2.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Thickness, SlabLayoutWeights) {
    const auto slabs = slab_layout(10, 0.3, 0.75);
    ASSERT_EQ(slabs.size(), 4u);
    EXPECT_EQ(slabs[0].slices, (std::vector<std::size_t>{0, 1, 2}));
    EXPECT_NEAR(slabs[0].weights[0], 0.4, 1e-12);
    EXPECT_NEAR(slabs[0].weights[2], 0.2, 1e-12);
    EXPECT_EQ(slabs[1].slices, (std::vector<std::size_t>{2, 3, 4}));
}

TEST(Thickness, BoxAverageOfRamp) {
    const auto out = simulate_thickness(ramp_z(12, 0.5), 1.5);
    ASSERT_EQ(out.dims().nz, 4u);
    EXPECT_EQ(out.spacing().sz, 1.5);
    EXPECT_FLOAT_EQ(out.at(0, 0, 0), 1.0f);
    EXPECT_FLOAT_EQ(out.at(1, 1, 3), 10.0f);
}

TEST(Thickness, IdentityAtBaseSpacing) {
    const auto v = ramp_z(6, 0.5);
    EXPECT_EQ(simulate_thickness(v, 0.5).voxels().size(), v.voxels().size());
    EXPECT_EQ(simulate_thickness(v, 0.5).at(0, 0, 5), 5.0f);
}

TEST(Thickness, RefusesUpsamplingAndOverlongSlabs) {
    const auto v = ramp_z(6, 0.5);
    EXPECT_THROW((void)simulate_thickness(v, 0.25), DomainError);
    EXPECT_THROW((void)simulate_thickness(v, 4.0), DomainError);
}

TEST(Thickness, MaskHalfOverlapRule) {
    // Slab of 3 input slices with two set: 2/3 >= 0.5; one set: 1/3 < 0.5.
    std::vector<std::uint8_t> bits{1, 1, 0, 1, 0, 0};
    const RoiMask m({1, 1, 6}, bits);
    const auto r = resample_mask(m, {1, 1, 1}, 3.0);
    EXPECT_EQ(r.dims().nz, 2u);
    EXPECT_TRUE(r.test(0, 0, 0));
    EXPECT_FALSE(r.test(0, 0, 1));
    // Exactly one half is included.
    const RoiMask half({1, 1, 2}, {1, 0});
    EXPECT_TRUE(resample_mask(half, {1, 1, 1}, 2.0).test(0, 0, 0));
}

TEST(Reconstruct, ThickSlicesReduceNoise) {
    phantom::PhantomSpec spec;
    const auto img = phantom::generate_phantom(spec);
    const std::vector<double> t{0.6, 5.0};
    const auto rec = make_case_record("c", img.volume, img.mask, t);
    const auto thin = reconstruct(rec, {0.25, 6, 0.6}, {});
    const auto thick = reconstruct(rec, {0.25, 6, 5.0}, {});
    EXPECT_EQ(thin.dims().nz, 50u);
    EXPECT_EQ(thick.dims().nz, 6u);
    EXPECT_EQ(rec.baseMasksByThickness.at(5.0).dims(), thick.dims());
    // Background corner region noise.
    std::vector<float> a, b;
    for (std::size_t y = 0; y < 5; ++y) {
        for (std::size_t x = 0; x < 5; ++x) {
            a.push_back(thin.at(x, y, 10));
            b.push_back(thick.at(x, y, 1));
        }
    }
    EXPECT_GT(sd_of(a), sd_of(b));
}
