#include "radcompat/volumetry/volumetry.hpp"

#include "radcompat/core/condition.hpp"
#include "radcompat/core/error.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <set>

namespace radcompat::volumetry {

double measure_volume(const RoiMask& m, const Spacing& spacing) {
    const auto n = m.count();
    if (n == 0) {
        throw DomainError("cannot measure the volume of an empty mask");
    }
    return static_cast<double>(n) * spacing.sx * spacing.sy * spacing.sz;
}

NormalizedVolumeSeries normalize_series(const VolumeSeries& s) {
    if (s.volumes.size() < 2) {
        throw DomainError("case " + s.caseId + ": normalization needs at least 2 volumes");
    }
    double sum = 0.0;
    for (const auto& [t, v] : s.volumes) {
        if (!std::isfinite(v) || v <= 0.0) {
            throw DomainError("case " + s.caseId + ": nonpositive volume at " + format_minimal(t) + " mm");
        }
        sum += v;
    }
    const double mean = sum / static_cast<double>(s.volumes.size());
    NormalizedVolumeSeries out{s.caseId, {}};
    for (const auto& [t, v] : s.volumes) {
        out.values.emplace(t, v / mean);
    }
    return out;
}

double t_statistic(double m1, double s1, double n1, double m2, double s2, double n2) {
    if (n1 < 2.0 || n2 < 2.0) {
        throw DomainError("t statistic needs at least 2 samples per group");
    }
    const double d = m1 - m2;
    if (d == 0.0) {
        return 0.0;
    }
    return std::fabs(d) / std::sqrt(s1 * s1 / n1 + s2 * s2 / n2);
}

bool is_compatible(double t, double threshold) { return t < threshold; }

double two_tailed_p(double t, double s1, double n1, double s2, double n2, PValueMode mode) {
    if (t == 0.0) {
        return 1.0;
    }
    if (std::isinf(t)) {
        return 0.0;
    }
    if (mode == PValueMode::Normal) {
        return std::erfc(t / std::sqrt(2.0));
    }
    const double a = s1 * s1 / n1;
    const double b = s2 * s2 / n2;
    const double denom = a * a / (n1 - 1.0) + b * b / (n2 - 1.0);
    const double df = denom > 0.0 ? (a + b) * (a + b) / denom : n1 + n2 - 2.0;
    const boost::math::students_t dist(df);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, t));
}

std::map<double, ThicknessStats> cohort_stats(std::span<const NormalizedVolumeSeries> cohort) {
    if (cohort.size() < 2) {
        throw DomainError("cohort analysis needs at least 2 cases");
    }
    std::set<double> thicknesses;
    for (const auto& [t, v] : cohort.front().values) {
        thicknesses.insert(t);
    }
    for (const auto& s : cohort) {
        std::set<double> own;
        for (const auto& [t, v] : s.values) {
            own.insert(t);
        }
        if (own != thicknesses) {
            throw ValidationError("case " + s.caseId + " has a different thickness set");
        }
    }
    std::map<double, ThicknessStats> out;
    const auto n = static_cast<double>(cohort.size());
    for (double t : thicknesses) {
        double sum = 0.0;
        for (const auto& s : cohort) {
            sum += s.values.at(t);
        }
        const double mean = sum / n;
        double ss = 0.0;
        for (const auto& s : cohort) {
            const double d = s.values.at(t) - mean;
            ss += d * d;
        }
        out.emplace(t, ThicknessStats{mean, std::sqrt(ss / (n - 1.0)), cohort.size()});
    }
    return out;
}

LabeledMatrix thickness_p_matrix(std::span<const NormalizedVolumeSeries> cohort, const StatsConfig& stats) {
    const auto per = cohort_stats(cohort);
    LabeledMatrix m;
    for (auto it = per.rbegin(); it != per.rend(); ++it) {
        m.labels.push_back(it->first);
    }
    const auto k = m.labels.size();
    m.values.assign(k * k, 1.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            const auto& a = per.at(m.labels[i]);
            const auto& b = per.at(m.labels[j]);
            const double na = static_cast<double>(a.n);
            const double nb = static_cast<double>(b.n);
            const double t = t_statistic(a.mean, a.sd, na, b.mean, b.sd, nb);
            const double p = two_tailed_p(t, a.sd, na, b.sd, nb, stats.pValueMode);
            m.values[i * k + j] = p;
            m.values[j * k + i] = p;
        }
    }
    return m;
}

std::vector<TrendRow> volume_trend_report(std::span<const NormalizedVolumeSeries> cohort) {
    std::vector<NormalizedVolumeSeries> pct(cohort.begin(), cohort.end());
    for (auto& s : pct) {
        for (auto& [t, v] : s.values) {
            v = (v - 1.0) * 100.0;
        }
    }
    std::vector<TrendRow> rows;
    for (const auto& [t, st] : cohort_stats(pct)) {
        rows.push_back({t, st.mean, st.sd});
    }
    return rows;
}

} // namespace radcompat::volumetry
