#include "radcompat/compat/compat.hpp"

#include "radcompat/core/error.hpp"
#include "radcompat/core/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace radcompat::compat {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double axis_value(const ReconCondition& c, GridAxis axis) {
    switch (axis) {
    case GridAxis::Kernel:
        return c.kernelIndex;
    case GridAxis::Thickness:
        return c.thicknessMm;
    case GridAxis::Dose:
        return c.doseFraction;
    }
    return 0.0;
}

/// True when a and b agree on every axis except possibly `axis`.
bool same_context(const ReconCondition& a, const ReconCondition& b, GridAxis axis) {
    return (axis == GridAxis::Kernel || a.kernelIndex == b.kernelIndex) &&
           (axis == GridAxis::Thickness || a.thicknessMm == b.thicknessMm) &&
           (axis == GridAxis::Dose || a.doseFraction == b.doseFraction);
}

std::vector<double> axis_values(const std::vector<ReconCondition>& conditions, GridAxis axis) {
    std::vector<double> values;
    for (const auto& c : conditions) {
        values.push_back(axis_value(c, axis));
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    if (axis != GridAxis::Kernel) {
        std::reverse(values.begin(), values.end());
    }
    return values;
}

std::string axis_label(double value, GridAxis axis) {
    switch (axis) {
    case GridAxis::Kernel:
        return std::string(kernel_name(static_cast<int>(value)));
    case GridAxis::Thickness:
        return format_minimal(value) + "mm";
    case GridAxis::Dose:
        return format_minimal(value * 100.0) + "%";
    }
    return {};
}

} // namespace

std::optional<bool> pair_compatibility(const FeatureSample& a, const FeatureSample& b, std::size_t feature,
                                       const StatsConfig& stats) {
    if (feature >= features::kFeatureCount) {
        throw DomainError("feature index " + std::to_string(feature) + " out of range");
    }
    if (!a.usable || !b.usable || a.n() < 2 || b.n() < 2) {
        return std::nullopt;
    }
    if (a.caseId != b.caseId) {
        throw ValidationError("pair_compatibility compares samples of different cases");
    }
    const double t = volumetry::t_statistic(a.mean[feature], a.sd[feature], static_cast<double>(a.n()),
                                            b.mean[feature], b.sd[feature], static_cast<double>(b.n()));
    return volumetry::is_compatible(t, stats.tThreshold);
}

SampleTable::SampleTable(std::vector<ReconCondition> conditions, std::vector<std::string> caseIds,
                         std::size_t featureCount)
    : conditions_(std::move(conditions)), caseIds_(std::move(caseIds)), featureCount_(featureCount) {
    const auto slots = conditions_.size() * caseIds_.size();
    means_.assign(slots * featureCount_, kNaN);
    sds_.assign(slots * featureCount_, kNaN);
    variances_.assign(slots * featureCount_, kNaN);
    counts_.assign(slots, 0);
    usable_.assign(slots, 0);
    filled_.assign(slots, 0);
}

std::size_t SampleTable::slot(std::size_t condition, std::size_t caseIndex) const {
    if (condition >= conditions_.size() || caseIndex >= caseIds_.size()) {
        throw DomainError("sample table index out of range");
    }
    return condition * caseIds_.size() + caseIndex;
}

void SampleTable::set(std::size_t condition, std::size_t caseIndex, const FeatureSample& sample) {
    if (featureCount_ != features::kFeatureCount) {
        throw ValidationError("sample table feature count does not match feature vectors");
    }
    set_stats(condition, caseIndex, sample.usable, sample.mean, sample.sd, sample.n());
}

void SampleTable::set_stats(std::size_t condition, std::size_t caseIndex, bool usable, std::span<const double> mean,
                            std::span<const double> sd, std::size_t n) {
    if (mean.size() != featureCount_ || sd.size() != featureCount_) {
        throw ValidationError("sample statistics have the wrong feature count");
    }
    const auto s = slot(condition, caseIndex);
    const bool ok = usable && n >= 2;
    filled_[s] = 1;
    usable_[s] = ok ? 1 : 0;
    counts_[s] = n;
    const auto base = s * featureCount_;
    for (std::size_t f = 0; f < featureCount_; ++f) {
        means_[base + f] = ok ? mean[f] : kNaN;
        sds_[base + f] = ok ? sd[f] : kNaN;
        variances_[base + f] = ok ? sd[f] * sd[f] / static_cast<double>(n) : kNaN;
    }
}

bool SampleTable::filled(std::size_t condition, std::size_t caseIndex) const {
    return filled_[slot(condition, caseIndex)] != 0;
}

bool SampleTable::usable(std::size_t condition, std::size_t caseIndex) const {
    return usable_[slot(condition, caseIndex)] != 0;
}

double SampleTable::mean(std::size_t condition, std::size_t caseIndex, std::size_t feature) const {
    return means_[slot(condition, caseIndex) * featureCount_ + feature];
}

double SampleTable::sd(std::size_t condition, std::size_t caseIndex, std::size_t feature) const {
    return sds_[slot(condition, caseIndex) * featureCount_ + feature];
}

std::size_t SampleTable::n(std::size_t condition, std::size_t caseIndex) const {
    return counts_[slot(condition, caseIndex)];
}

std::size_t SampleTable::usable_cases(std::size_t condition) const {
    std::size_t count = 0;
    for (std::size_t p = 0; p < caseIds_.size(); ++p) {
        count += usable(condition, p) ? 1 : 0;
    }
    return count;
}

std::span<const double> SampleTable::packed_means(std::size_t condition) const {
    return std::span<const double>(means_).subspan(condition * lanes(), lanes());
}

std::span<const double> SampleTable::packed_variances(std::size_t condition) const {
    return std::span<const double>(variances_).subspan(condition * lanes(), lanes());
}

std::size_t SampleTable::index_of(const ReconCondition& c) const {
    return static_cast<std::size_t>(std::find(conditions_.begin(), conditions_.end(), c) - conditions_.begin());
}

CompatibilityCell compatibility_ratio_reference(const SampleTable& table, std::size_t a, std::size_t b,
                                                const StatsConfig& stats) {
    CompatibilityCell cell{table.conditions().at(a), table.conditions().at(b), {}};
    const auto F = table.feature_count();
    for (std::size_t p = 0; p < table.case_ids().size(); ++p) {
        if (!table.usable(a, p) || !table.usable(b, p)) {
            cell.counts.excluded += F;
            continue;
        }
        const auto na = static_cast<double>(table.n(a, p));
        const auto nb = static_cast<double>(table.n(b, p));
        for (std::size_t f = 0; f < F; ++f) {
            const double t =
                volumetry::t_statistic(table.mean(a, p, f), table.sd(a, p, f), na, table.mean(b, p, f), table.sd(b, p, f), nb);
            cell.counts.total += 1;
            cell.counts.compatible += volumetry::is_compatible(t, stats.tThreshold) ? 1 : 0;
        }
    }
    return cell;
}

CompatibilityCell compatibility_ratio(const SampleTable& table, std::size_t a, std::size_t b,
                                      const StatsConfig& stats, const simd::KernelTable& kernels) {
    CompatibilityCell cell{table.conditions().at(a), table.conditions().at(b), {}};
    const auto F = table.feature_count();
    std::size_t both = 0;
    for (std::size_t p = 0; p < table.case_ids().size(); ++p) {
        both += table.usable(a, p) && table.usable(b, p) ? 1 : 0;
    }
    cell.counts.total = both * F;
    cell.counts.excluded = table.lanes() - cell.counts.total;
    const auto ma = table.packed_means(a);
    const auto va = table.packed_variances(a);
    const auto mb = table.packed_means(b);
    const auto vb = table.packed_variances(b);
    cell.counts.compatible =
        kernels.count_compatible(ma.data(), va.data(), mb.data(), vb.data(), table.lanes(), stats.tThreshold);
    return cell;
}

std::size_t StudyResults::comparisons() const {
    return std::accumulate(cells.begin(), cells.end(), std::size_t{0},
                           [](std::size_t acc, const CompatCounts& c) { return acc + c.total + c.excluded; });
}

std::size_t StudyResults::usable_comparisons() const {
    return std::accumulate(cells.begin(), cells.end(), std::size_t{0},
                           [](std::size_t acc, const CompatCounts& c) { return acc + c.total; });
}

std::size_t StudyResults::index_of(const ReconCondition& c) const {
    return static_cast<std::size_t>(std::find(conditions.begin(), conditions.end(), c) - conditions.begin());
}

StudyResults compute_study(const SampleTable& table, const StatsConfig& stats, unsigned threads) {
    const auto C = table.conditions().size();
    StudyResults results{table.conditions(), table.case_ids(), table.feature_count(), std::vector<CompatCounts>(C * C)};
    const auto& kernels = simd::kernels();
    parallel_for(C, threads, [&](std::size_t i) {
        for (std::size_t j = i; j < C; ++j) {
            const auto counts = compatibility_ratio(table, i, j, stats, kernels).counts;
            results.cells[i * C + j] = counts;
            results.cells[j * C + i] = counts;
        }
    });
    return results;
}

CompatibilityMap build_map(const StudyResults& results, Ordering ordering) {
    const auto C = results.conditions.size();
    std::vector<std::size_t> order(C);
    std::iota(order.begin(), order.end(), 0);
    const auto canonical = [&](std::size_t a, std::size_t b) {
        return canonical_less(results.conditions[a], results.conditions[b]);
    };
    std::sort(order.begin(), order.end(), canonical);
    if (ordering == Ordering::ByTotalCompatibility) {
        std::vector<double> rowSum(C, 0.0);
        for (std::size_t i = 0; i < C; ++i) {
            for (std::size_t j = 0; j < C; ++j) {
                rowSum[i] += results.at(i, j).ratio_percent().value_or(0.0);
            }
        }
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return rowSum[a] > rowSum[b]; });
    }
    CompatibilityMap map;
    map.ordering = ordering;
    for (auto i : order) {
        map.orderedConditions.push_back(results.conditions[i]);
        map.labels.push_back(condition_label(results.conditions[i]));
    }
    map.counts.reserve(C * C);
    for (auto i : order) {
        for (auto j : order) {
            map.counts.push_back(results.at(i, j));
        }
    }
    return map;
}

std::string_view axis_name(GridAxis axis) {
    switch (axis) {
    case GridAxis::Kernel:
        return "kernel";
    case GridAxis::Thickness:
        return "thickness";
    case GridAxis::Dose:
        return "dose";
    }
    return "unknown";
}

MarginalMatrix marginal_matrix(GridAxis axis, const StudyResults& results) {
    MarginalMatrix m;
    m.axis = axis;
    m.values = axis_values(results.conditions, axis);
    for (double v : m.values) {
        m.labels.push_back(axis_label(v, axis));
    }
    const auto K = m.values.size();
    std::vector<double> sums(K * K, 0.0);
    m.contexts.assign(K * K, 0);
    const auto position = [&](double v) {
        return static_cast<std::size_t>(std::find(m.values.begin(), m.values.end(), v) - m.values.begin());
    };
    const auto C = results.conditions.size();
    for (std::size_t i = 0; i < C; ++i) {
        const auto& a = results.conditions[i];
        const auto ia = position(axis_value(a, axis));
        for (std::size_t j = 0; j < C; ++j) {
            const auto& b = results.conditions[j];
            if (!same_context(a, b, axis)) {
                continue;
            }
            const auto ratio = results.at(i, j).ratio_percent();
            if (!ratio) {
                continue;
            }
            const auto ib = position(axis_value(b, axis));
            sums[ia * K + ib] += *ratio;
            m.contexts[ia * K + ib] += 1;
        }
    }
    m.percent.resize(K * K);
    for (std::size_t k = 0; k < K * K; ++k) {
        if (m.contexts[k] > 0) {
            m.percent[k] = sums[k] / static_cast<double>(m.contexts[k]);
        }
    }
    return m;
}

std::array<AxisRobustness, 3> feature_robustness_report(const SampleTable& table, const StatsConfig& stats) {
    const auto F = table.feature_count();
    const auto C = table.conditions().size();
    const auto P = table.case_ids().size();
    std::array<AxisRobustness, 3> out{AxisRobustness{GridAxis::Kernel, {}, {}},
                                      AxisRobustness{GridAxis::Thickness, {}, {}},
                                      AxisRobustness{GridAxis::Dose, {}, {}}};
    for (auto& axisReport : out) {
        std::vector<std::size_t> compatible(F, 0);
        std::vector<std::size_t> total(F, 0);
        for (std::size_t i = 0; i < C; ++i) {
            for (std::size_t j = i + 1; j < C; ++j) {
                const auto& a = table.conditions()[i];
                const auto& b = table.conditions()[j];
                if (!same_context(a, b, axisReport.axis)) {
                    continue;
                }
                for (std::size_t p = 0; p < P; ++p) {
                    if (!table.usable(i, p) || !table.usable(j, p)) {
                        continue;
                    }
                    const auto ni = static_cast<double>(table.n(i, p));
                    const auto nj = static_cast<double>(table.n(j, p));
                    for (std::size_t f = 0; f < F; ++f) {
                        const double t = volumetry::t_statistic(table.mean(i, p, f), table.sd(i, p, f), ni,
                                                                table.mean(j, p, f), table.sd(j, p, f), nj);
                        total[f] += 1;
                        compatible[f] += volumetry::is_compatible(t, stats.tThreshold) ? 1 : 0;
                    }
                }
            }
        }
        std::map<features::FeatureGroup, std::pair<double, std::size_t>> groups;
        for (std::size_t f = 0; f < F; ++f) {
            FeatureRobustness r{f, 0.0, compatible[f], total[f]};
            if (total[f] > 0) {
                r.percent = 100.0 * static_cast<double>(compatible[f]) / static_cast<double>(total[f]);
                if (F == features::kFeatureCount) {
                    auto& g = groups[features::feature_table()[f].group];
                    g.first += r.percent;
                    g.second += 1;
                }
            }
            axisReport.features.push_back(r);
        }
        std::stable_sort(axisReport.features.begin(), axisReport.features.end(),
                         [](const FeatureRobustness& x, const FeatureRobustness& y) { return x.percent > y.percent; });
        for (const auto& [group, acc] : groups) {
            axisReport.groups.push_back({group, acc.first / static_cast<double>(acc.second)});
        }
    }
    return out;
}

} // namespace radcompat::compat
