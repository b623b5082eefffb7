#include "radcompat/core/error.hpp"
#include "radcompat/volumetry/volumetry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace radcompat;
using namespace radcompat::volumetry;

TEST(TStatistic, HandComputedValues) {
    EXPECT_NEAR(t_statistic(0, 1, 23, 1, 1, 23), 3.391164991562634, 1e-12);
    EXPECT_NEAR(t_statistic(1, 1, 23, 0, 1, 23), 3.391164991562634, 1e-12);
    EXPECT_NEAR(t_statistic(2.0, 0.5, 4, -1.0, 1.5, 9), 5.366563145999495, 1e-12);
    EXPECT_EQ(t_statistic(1.5, 0, 5, 1.5, 0, 5), 0.0);
    EXPECT_EQ(t_statistic(1.5, 2, 5, 1.5, 3, 5), 0.0);
    EXPECT_TRUE(std::isinf(t_statistic(1.0, 0, 5, 2.0, 0, 5)));
    EXPECT_THROW((void)t_statistic(0, 1, 1, 0, 1, 5), DomainError);
}

TEST(TStatistic, ThresholdIsStrict) {
    EXPECT_FALSE(is_compatible(1.96));
    EXPECT_TRUE(is_compatible(std::nextafter(1.96, 0.0)));
    EXPECT_FALSE(is_compatible(kIncompatibleT));
    EXPECT_TRUE(is_compatible(0.0));
}

TEST(PValue, NormalAndStudent) {
    EXPECT_NEAR(two_tailed_p(2.0, 1, 23, 1, 23, PValueMode::Normal), 0.04550026389635844, 1e-14);
    EXPECT_NEAR(two_tailed_p(2.0, 1, 23, 1, 23, PValueMode::Student), 0.05169660308239088, 1e-12);
    EXPECT_NEAR(two_tailed_p(1.5, 1, 5, 2, 8, PValueMode::Student), 0.16248060876645046, 1e-10);
    EXPECT_EQ(two_tailed_p(0.0, 1, 5, 1, 5, PValueMode::Normal), 1.0);
    EXPECT_EQ(two_tailed_p(kIncompatibleT, 0, 5, 0, 5, PValueMode::Student), 0.0);
}

TEST(Normalize, MeanIsOne) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.01, 1000.0);
    for (int rep = 0; rep < 200; ++rep) {
        VolumeSeries s{"c", {}};
        for (double t : {0.6, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0}) {
            s.volumes[t] = u(rng);
        }
        const auto n = normalize_series(s);
        double sum = 0;
        for (const auto& [t, v] : n.values) {
            sum += v;
        }
        EXPECT_NEAR(sum / 8.0, 1.0, 1e-12);
    }
}

TEST(Normalize, RejectsNonPositive) {
    EXPECT_THROW((void)normalize_series({"c", {{1.0, 0.0}, {2.0, 0.0}}}), DomainError);
    EXPECT_THROW((void)normalize_series({"c", {}}), DomainError);
}

TEST(MeasureVolume, CountsTimesVoxelVolume) {
    const RoiMask m({2, 2, 2}, {1, 1, 0, 1, 0, 0, 0, 1});
    EXPECT_DOUBLE_EQ(measure_volume(m, {0.5, 0.5, 2.0}), 2.0);
    EXPECT_THROW((void)measure_volume(RoiMask({1, 1, 1}, {0}), {}), DomainError);
}

TEST(PMatrix, SymmetricUnitDiagonalDescendingLabels) {
    std::vector<NormalizedVolumeSeries> cohort;
    std::mt19937_64 rng(9);
    std::normal_distribution<double> noise(0.0, 0.02);
    for (int p = 0; p < 6; ++p) {
        VolumeSeries s{"c" + std::to_string(p), {}};
        for (double t : {0.6, 1.0, 2.0, 5.0}) {
            s.volumes[t] = 500.0 * (1.0 + noise(rng) * t);
        }
        cohort.push_back(normalize_series(s));
    }
    for (auto mode : {PValueMode::Normal, PValueMode::Student}) {
        const auto m = thickness_p_matrix(cohort, {1.96, mode});
        ASSERT_EQ(m.labels, (std::vector<double>{5.0, 2.0, 1.0, 0.6}));
        for (std::size_t i = 0; i < 4; ++i) {
            EXPECT_EQ(m.at(i, i), 1.0);
            for (std::size_t j = 0; j < 4; ++j) {
                EXPECT_EQ(m.at(i, j), m.at(j, i));
                EXPECT_GE(m.at(i, j), 0.0);
                EXPECT_LE(m.at(i, j), 1.0);
            }
        }
    }
}

TEST(Trend, PercentDeviationRows) {
    std::vector<NormalizedVolumeSeries> cohort{{"a", {{1.0, 1.02}, {5.0, 0.98}}}, {"b", {{1.0, 1.0}, {5.0, 1.0}}}};
    const auto rows = volume_trend_report(cohort);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].thicknessMm, 1.0);
    EXPECT_NEAR(rows[0].meanPercent, 1.0, 1e-12);
    EXPECT_NEAR(rows[0].sdPercent, std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(rows[1].meanPercent, -1.0, 1e-12);
}

TEST(CohortStats, MismatchedThicknessSetsRejected) {
    std::vector<NormalizedVolumeSeries> cohort{{"a", {{1.0, 1.0}}}, {"b", {{2.0, 1.0}}}};
    EXPECT_THROW((void)cohort_stats(cohort), ValidationError);
}
