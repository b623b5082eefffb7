#pragma once

#include "radcompat/core/volume.hpp"

#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace radcompat::volumetry {

/// Nodule volume (mm^3) per slice thickness for one case.
struct VolumeSeries {
    std::string caseId;
    std::map<double, double> volumes;
};

/// Volumes divided by the case's mean volume; the entries average to 1.
struct NormalizedVolumeSeries {
    std::string caseId;
    std::map<double, double> values;
};

enum class PValueMode { Normal, Student };

struct StatsConfig {
    double tThreshold = 1.96;
    PValueMode pValueMode = PValueMode::Normal;
};

inline constexpr double kIncompatibleT = std::numeric_limits<double>::infinity();

[[nodiscard]] double measure_volume(const RoiMask& m, const Spacing& spacing);

[[nodiscard]] NormalizedVolumeSeries normalize_series(const VolumeSeries& s);

/// |m1 - m2| / sqrt(s1^2/n1 + s2^2/n2). Equal means give 0; unequal means with
/// zero spread give +inf.
[[nodiscard]] double t_statistic(double m1, double s1, double n1, double m2, double s2, double n2);

/// Strict: t == threshold is incompatible.
[[nodiscard]] bool is_compatible(double t, double threshold = 1.96);

/// Two-tailed p for a Welch statistic. Student mode uses Welch-Satterthwaite degrees of freedom.
[[nodiscard]] double two_tailed_p(double t, double s1, double n1, double s2, double n2, PValueMode mode);

/// Square matrix with row/column labels.
struct LabeledMatrix {
    std::vector<double> labels;
    std::vector<double> values; // row-major, labels.size()^2

    [[nodiscard]] std::size_t size() const { return labels.size(); }
    [[nodiscard]] double at(std::size_t i, std::size_t j) const { return values[i * labels.size() + j]; }
};

/// Per-thickness cohort mean and SD of a normalized series.
struct ThicknessStats {
    double mean = 0.0;
    double sd = 0.0;
    std::size_t n = 0;
};

[[nodiscard]] std::map<double, ThicknessStats> cohort_stats(std::span<const NormalizedVolumeSeries> cohort);

/// Labels in descending thickness; unit diagonal; symmetric.
[[nodiscard]] LabeledMatrix thickness_p_matrix(std::span<const NormalizedVolumeSeries> cohort,
                                               const StatsConfig& stats = {});

struct TrendRow {
    double thicknessMm = 0.0;
    double meanPercent = 0.0;
    double sdPercent = 0.0;
};

/// Mean and SD of (V_norm - 1) * 100 per thickness, ascending thickness.
[[nodiscard]] std::vector<TrendRow> volume_trend_report(std::span<const NormalizedVolumeSeries> cohort);

} // namespace radcompat::volumetry
