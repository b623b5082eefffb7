#include "radcompat/core/error.hpp"
#include "radcompat/phantom/phantom.hpp"
#include "radcompat/volumetry/volumetry.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace radcompat;
using namespace radcompat::phantom;

TEST(Phantom, SphereVolumeMatchesAnalyticWithinTwoPercent) {
    PhantomSpec spec;
    spec.radiiMm = {5.0, 5.0, 5.0};
    spec.baseSpacing = {0.5, 0.5, 0.5};
    spec.dims = {32, 32, 32};
    const auto img = generate_phantom(spec);
    const double v = volumetry::measure_volume(img.mask, img.volume.spacing());
    const double analytic = 4.0 / 3.0 * M_PI * 125.0;
    EXPECT_NEAR(analytic, 523.6, 0.01);
    EXPECT_LT(std::fabs(v - analytic) / analytic, 0.02);
}

TEST(Phantom, UniformTextureHasTwoIntensities) {
    PhantomSpec spec;
    const auto img = generate_phantom(spec);
    for (std::size_t i = 0; i < img.mask.bits().size(); ++i) {
        EXPECT_EQ(img.volume.voxels()[i], img.mask.bits()[i] ? 40.0f : -800.0f);
    }
}

TEST(Phantom, GaussianTextureVariesInsideNodule) {
    PhantomSpec spec;
    spec.texture = GaussianFieldTexture{1.0, 20.0};
    const auto img = generate_phantom(spec);
    double sum = 0, ss = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < img.mask.bits().size(); ++i) {
        if (img.mask.bits()[i]) {
            sum += img.volume.voxels()[i];
            ss += img.volume.voxels()[i] * img.volume.voxels()[i];
            ++n;
        }
    }
    const double mean = sum / n;
    const double sd = std::sqrt(ss / n - mean * mean);
    EXPECT_NEAR(mean, 40.0, 5.0);
    EXPECT_GT(sd, 10.0);
    EXPECT_LT(sd, 30.0);
}

TEST(Phantom, DeterministicPerSeed) {
    PhantomSpec spec;
    spec.texture = GaussianFieldTexture{};
    const auto a = generate_phantom(spec);
    const auto b = generate_phantom(spec);
    EXPECT_EQ(a.volume, b.volume);
    spec.seed = 2;
    EXPECT_FALSE(generate_phantom(spec).volume == a.volume);
}

TEST(Phantom, ValidationRejectsOversizedNodule) {
    PhantomSpec spec;
    spec.radiiMm = {12.0, 12.0, 12.0};
    EXPECT_THROW(spec.validate(), ValidationError);
    spec = {};
    spec.radiiMm = {7.0, 6.0, 7.0};
    EXPECT_THROW(spec.validate(), ValidationError);
    spec.shape = Shape::Ellipsoid;
    EXPECT_NO_THROW(spec.validate());
}

TEST(Cohort, SizeIdsAndJitter) {
    const auto cases = cohort_specs(23, PhantomSpec{}, {0.15, 0.5, 0.1, 0.1}, 7);
    ASSERT_EQ(cases.size(), 23u);
    EXPECT_EQ(cases[0].caseId, "case_01");
    EXPECT_EQ(cases[22].caseId, "case_23");
    EXPECT_NE(cases[0].spec.radiiMm.x, cases[1].spec.radiiMm.x);
    for (const auto& c : cases) {
        EXPECT_GE(c.spec.radiiMm.x, 7.0 * 0.85);
        EXPECT_LE(c.spec.radiiMm.x, 7.0 * 1.15);
    }
    EXPECT_THROW((void)cohort_specs(0, PhantomSpec{}, {}, 7), ValidationError);
}

TEST(Cohort, GeneratedRecordsCarryThicknessMasks) {
    const std::vector<double> t{1.0, 5.0};
    const auto records = generate_cohort(2, PhantomSpec{}, {}, 3, t);
    ASSERT_EQ(records.size(), 2u);
    EXPECT_EQ(records[0].baseMasksByThickness.size(), 2u);
    EXPECT_EQ(records[0].baseMasksByThickness.at(5.0).dims().nz, 6u);
}

TEST(Cohort, CaseIdWidthFollowsCohortSize) {
    EXPECT_EQ(case_id(0, 5), "case_01");
    EXPECT_EQ(case_id(99, 150), "case_100");
    EXPECT_EQ(case_id(4, 150), "case_005");
}
