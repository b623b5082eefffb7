#pragma once

#include "radcompat/core/condition.hpp"
#include "radcompat/features/features.hpp"
#include "radcompat/simd/kernels.hpp"
#include "radcompat/volumetry/volumetry.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace radcompat::compat {

using features::FeatureSample;
using volumetry::StatsConfig;

/// Two-sample test of one feature between two conditions of the same case.
/// nullopt means the pair is excluded because a sample is unusable.
[[nodiscard]] std::optional<bool> pair_compatibility(const FeatureSample& a, const FeatureSample& b,
                                                     std::size_t feature, const StatsConfig& stats = {});

struct CompatCounts {
    std::size_t compatible = 0;
    std::size_t total = 0;    // usable (feature, case) comparisons
    std::size_t excluded = 0; // comparisons dropped for unusable samples

    /// Undefined when no comparison is usable.
    [[nodiscard]] std::optional<double> ratio_percent() const {
        if (total == 0) {
            return std::nullopt;
        }
        return 100.0 * static_cast<double>(compatible) / static_cast<double>(total);
    }
    bool operator==(const CompatCounts&) const = default;
};

struct CompatibilityCell {
    ReconCondition conditionA;
    ReconCondition conditionB;
    CompatCounts counts;

    [[nodiscard]] std::optional<double> ratio_percent() const { return counts.ratio_percent(); }
};

/// Per-(condition, case, feature) mean/SD/n, packed per condition as [case][feature]
/// lanes for the batched comparison kernel. Unusable samples are stored as NaN.
class SampleTable {
public:
    SampleTable(std::vector<ReconCondition> conditions, std::vector<std::string> caseIds,
                std::size_t featureCount = features::kFeatureCount);

    void set(std::size_t condition, std::size_t caseIndex, const FeatureSample& sample);
    /// Direct statistics, n = slice count. Unusable when !usable or n < 2.
    void set_stats(std::size_t condition, std::size_t caseIndex, bool usable, std::span<const double> mean,
                   std::span<const double> sd, std::size_t n);

    [[nodiscard]] const std::vector<ReconCondition>& conditions() const { return conditions_; }
    [[nodiscard]] const std::vector<std::string>& case_ids() const { return caseIds_; }
    [[nodiscard]] std::size_t feature_count() const { return featureCount_; }
    [[nodiscard]] std::size_t lanes() const { return caseIds_.size() * featureCount_; }

    [[nodiscard]] bool filled(std::size_t condition, std::size_t caseIndex) const;
    [[nodiscard]] bool usable(std::size_t condition, std::size_t caseIndex) const;
    [[nodiscard]] double mean(std::size_t condition, std::size_t caseIndex, std::size_t feature) const;
    [[nodiscard]] double sd(std::size_t condition, std::size_t caseIndex, std::size_t feature) const;
    [[nodiscard]] std::size_t n(std::size_t condition, std::size_t caseIndex) const;
    [[nodiscard]] std::size_t usable_cases(std::size_t condition) const;

    [[nodiscard]] std::span<const double> packed_means(std::size_t condition) const;
    /// sd^2 / n per lane.
    [[nodiscard]] std::span<const double> packed_variances(std::size_t condition) const;

    /// Index of a condition, or conditions().size() when absent.
    [[nodiscard]] std::size_t index_of(const ReconCondition& c) const;

private:
    [[nodiscard]] std::size_t slot(std::size_t condition, std::size_t caseIndex) const;

    std::vector<ReconCondition> conditions_;
    std::vector<std::string> caseIds_;
    std::size_t featureCount_;
    std::vector<double> means_;
    std::vector<double> sds_;
    std::vector<double> variances_;
    std::vector<std::size_t> counts_;
    std::vector<std::uint8_t> usable_;
    std::vector<std::uint8_t> filled_;
};

/// Reference route: the two-sample statistic evaluated lane by lane.
[[nodiscard]] CompatibilityCell compatibility_ratio_reference(const SampleTable& table, std::size_t a, std::size_t b,
                                                              const StatsConfig& stats = {});

/// Batched route through the SIMD comparison kernel.
[[nodiscard]] CompatibilityCell compatibility_ratio(const SampleTable& table, std::size_t a, std::size_t b,
                                                    const StatsConfig& stats = {},
                                                    const simd::KernelTable& kernels = simd::kernels());

/// Counts for every ordered condition pair.
struct StudyResults {
    std::vector<ReconCondition> conditions;
    std::vector<std::string> caseIds;
    std::size_t featureCount = features::kFeatureCount;
    std::vector<CompatCounts> cells; // conditions.size()^2, row-major, symmetric

    [[nodiscard]] const CompatCounts& at(std::size_t i, std::size_t j) const {
        return cells[i * conditions.size() + j];
    }
    /// Comparisons over all ordered pairs, usable or excluded (C * C * F * P).
    [[nodiscard]] std::size_t comparisons() const;
    [[nodiscard]] std::size_t usable_comparisons() const;
    [[nodiscard]] std::size_t index_of(const ReconCondition& c) const;
};

/// Computes the upper triangle in parallel and mirrors it.
[[nodiscard]] StudyResults compute_study(const SampleTable& table, const StatsConfig& stats = {},
                                         unsigned threads = 1);

enum class Ordering { Canonical, ByTotalCompatibility };

struct CompatibilityMap {
    Ordering ordering = Ordering::Canonical;
    std::vector<ReconCondition> orderedConditions;
    std::vector<std::string> labels;
    std::vector<CompatCounts> counts; // row-major over orderedConditions

    [[nodiscard]] std::size_t size() const { return orderedConditions.size(); }
    [[nodiscard]] std::optional<double> ratio(std::size_t i, std::size_t j) const {
        return counts[i * orderedConditions.size() + j].ratio_percent();
    }
};

/// Canonical axis order, or descending row sum of ratios with canonical tie-break.
[[nodiscard]] CompatibilityMap build_map(const StudyResults& results, Ordering ordering);

enum class GridAxis { Kernel = 0, Thickness = 1, Dose = 2 };

[[nodiscard]] std::string_view axis_name(GridAxis axis);

struct MarginalMatrix {
    GridAxis axis = GridAxis::Kernel;
    std::vector<double> values;  // axis values in canonical order (kernel index for Kernel)
    std::vector<std::string> labels;
    std::vector<std::optional<double>> percent; // row-major
    std::vector<std::size_t> contexts;          // fixed-context pairs averaged per entry

    [[nodiscard]] std::size_t size() const { return values.size(); }
    [[nodiscard]] std::optional<double> at(std::size_t i, std::size_t j) const { return percent[i * values.size() + j]; }
};

/// Entry (a, b): mean ratio over condition pairs that differ only on `axis`, taking values a and b.
[[nodiscard]] MarginalMatrix marginal_matrix(GridAxis axis, const StudyResults& results);

struct FeatureRobustness {
    std::size_t feature = 0;
    double percent = 0.0;
    std::size_t compatible = 0;
    std::size_t total = 0;
};

struct GroupRobustness {
    features::FeatureGroup group;
    double percent = 0.0;
};

struct AxisRobustness {
    GridAxis axis;
    std::vector<FeatureRobustness> features; // descending percent
    std::vector<GroupRobustness> groups;     // mean of member features
};

/// Per-feature share of compatible (pair, case) comparisons among distinct condition pairs
/// that differ only on one axis.
[[nodiscard]] std::array<AxisRobustness, 3> feature_robustness_report(const SampleTable& table,
                                                                      const StatsConfig& stats = {});

} // namespace radcompat::compat
