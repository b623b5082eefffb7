#include "radcompat/report/report.hpp"

#include "radcompat/core/error.hpp"
#include "radcompat/io/file.hpp"
#include "radcompat/io/serialize.hpp"
#include "radcompat/volumetry/volumetry.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace radcompat::report {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json optional_array(const std::vector<std::optional<double>>& values) {
    json a = json::array();
    for (const auto& v : values) {
        a.push_back(v ? json(*v) : json(nullptr));
    }
    return a;
}

compat::StudyResults complete_results(const StudyStore& store) {
    const auto missing = missing_samples(store);
    if (!missing.empty() || !store.has_cells()) {
        std::string msg = "study store " + store.root().string() + " is incomplete";
        if (missing.empty()) {
            msg += ": compatibility cells have not been computed";
        } else {
            msg += "; missing " + std::to_string(missing.size()) + " sample(s):";
            for (const auto& m : missing) {
                msg += "\n  " + m;
            }
        }
        throw ValidationError(msg);
    }
    return store.read_cells();
}

std::string map_report(const StudyStore& store, ReportFormat format) {
    const auto manifest = store_manifest(store);
    const auto map = compat::build_map(complete_results(store), manifest.analysis.ordering);
    std::vector<std::optional<double>> percent;
    for (const auto& c : map.counts) {
        percent.push_back(c.ratio_percent());
    }
    switch (format) {
    case ReportFormat::Csv:
        return matrix_csv(map.labels, percent, "%.2f");
    case ReportFormat::Ppm:
        return percent_ppm(map.size(), percent);
    case ReportFormat::Json: {
        json counts = json::array();
        for (const auto& c : map.counts) {
            counts.push_back({c.compatible, c.total, c.excluded});
        }
        return io::dump({{"ordering", io::ordering_name(map.ordering)},
                         {"labels", map.labels},
                         {"percent", optional_array(percent)},
                         {"counts", counts}});
    }
    }
    return {};
}

std::string marginal_report(const StudyStore& store, compat::GridAxis axis, ReportFormat format) {
    const auto m = compat::marginal_matrix(axis, complete_results(store));
    switch (format) {
    case ReportFormat::Csv:
        return matrix_csv(m.labels, m.percent, "%.2f");
    case ReportFormat::Ppm:
        return percent_ppm(m.size(), m.percent);
    case ReportFormat::Json:
        return io::dump({{"axis", std::string(compat::axis_name(axis))},
                         {"labels", m.labels},
                         {"percent", optional_array(m.percent)},
                         {"contexts", m.contexts}});
    }
    return {};
}

std::string volumes_report(const StudyStore& store, ReportFormat format) {
    const auto manifest = store_manifest(store);
    (void)complete_results(store);
    std::vector<volumetry::NormalizedVolumeSeries> cohort;
    for (const auto& s : store.read_volumes()) {
        cohort.push_back(volumetry::normalize_series(s));
    }
    std::vector<volumetry::TrendRow> trend;
    if (cohort.size() >= 2) {
        trend = volumetry::volume_trend_report(cohort);
    } else {
        // One case: the spread is undefined.
        for (const auto& [t, v] : cohort.front().values) {
            trend.push_back({t, (v - 1.0) * 100.0, std::numeric_limits<double>::quiet_NaN()});
        }
    }
    std::vector<std::string> labels;
    std::vector<std::optional<double>> p;
    if (cohort.size() >= 2) {
        const auto matrix = volumetry::thickness_p_matrix(cohort, manifest.analysis.statistics);
        for (double t : matrix.labels) {
            labels.push_back(format_percent(t));
        }
        for (double v : matrix.values) {
            p.emplace_back(v);
        }
    } else {
        for (auto it = trend.rbegin(); it != trend.rend(); ++it) {
            labels.push_back(format_percent(it->thicknessMm));
        }
        for (std::size_t i = 0; i < labels.size(); ++i) {
            for (std::size_t j = 0; j < labels.size(); ++j) {
                p.push_back(i == j ? std::optional<double>(1.0) : std::nullopt);
            }
        }
    }
    switch (format) {
    case ReportFormat::Csv: {
        std::string out = "thicknessMm,meanPercent,sdPercent,summary\n";
        char buf[128];
        for (const auto& r : trend) {
            if (std::isnan(r.sdPercent)) {
                std::snprintf(buf, sizeof buf, "%.2f,%.2f,,%+.2f%%\n", r.thicknessMm, r.meanPercent, r.meanPercent);
            } else {
                std::snprintf(buf, sizeof buf, "%.2f,%.2f,%.2f,%+.2f%% \xC2\xB1%.2f\n", r.thicknessMm,
                              r.meanPercent, r.sdPercent, r.meanPercent, r.sdPercent);
            }
            out += buf;
        }
        out += "\n";
        return out + matrix_csv(labels, p, nullptr);
    }
    case ReportFormat::Ppm: {
        std::vector<std::optional<double>> scaled;
        for (const auto& v : p) {
            scaled.push_back(v ? std::optional<double>(*v * 100.0) : std::nullopt);
        }
        return percent_ppm(labels.size(), scaled);
    }
    case ReportFormat::Json: {
        json rows = json::array();
        for (const auto& r : trend) {
            rows.push_back({{"thicknessMm", r.thicknessMm}, {"meanPercent", r.meanPercent}, {"sdPercent", r.sdPercent}});
        }
        return io::dump({{"trend", rows},
                         {"pValue", io::p_value_mode_name(manifest.analysis.statistics.pValueMode)},
                         {"labels", labels},
                         {"p", optional_array(p)}});
    }
    }
    return {};
}

std::string features_report(const StudyStore& store, ReportFormat format) {
    const auto manifest = store_manifest(store);
    (void)complete_results(store);
    std::vector<std::string> ids;
    for (const auto& c : manifest.cases) {
        ids.push_back(c.caseId);
    }
    const auto conditions = enumerate_conditions(manifest.grid);
    compat::SampleTable table(conditions, ids);
    for (std::size_t ci = 0; ci < conditions.size(); ++ci) {
        for (std::size_t p = 0; p < ids.size(); ++p) {
            table.set(ci, p, store.read_sample(ids[p], conditions[ci]));
        }
    }
    const auto report = compat::feature_robustness_report(table, manifest.analysis.statistics);
    const auto& info = features::feature_table();
    switch (format) {
    case ReportFormat::Csv: {
        std::string out = "axis,rank,feature,label,group,percent,compatible,total\n";
        for (const auto& axis : report) {
            std::size_t rank = 1;
            for (const auto& f : axis.features) {
                const auto& fi = info[f.feature];
                out += std::string(compat::axis_name(axis.axis)) + "," + std::to_string(rank++) + "," +
                       std::string(fi.key) + ",\"" + std::string(fi.label) + "\"," +
                       std::string(features::group_name(fi.group)) + "," +
                       (f.total > 0 ? format_percent(f.percent) : std::string()) + "," +
                       std::to_string(f.compatible) + "," + std::to_string(f.total) + "\n";
            }
        }
        out += "\naxis,group,percent\n";
        for (const auto& axis : report) {
            for (const auto& g : axis.groups) {
                out += std::string(compat::axis_name(axis.axis)) + "," + std::string(features::group_name(g.group)) +
                       "," + format_percent(g.percent) + "\n";
            }
        }
        return out;
    }
    case ReportFormat::Json: {
        json axes = json::array();
        for (const auto& axis : report) {
            json feats = json::array();
            for (const auto& f : axis.features) {
                feats.push_back({{"feature", std::string(info[f.feature].key)},
                                 {"percent", f.total > 0 ? json(f.percent) : json(nullptr)},
                                 {"compatible", f.compatible},
                                 {"total", f.total}});
            }
            json groups = json::array();
            for (const auto& g : axis.groups) {
                groups.push_back({{"group", std::string(features::group_name(g.group))}, {"percent", g.percent}});
            }
            axes.push_back({{"axis", std::string(compat::axis_name(axis.axis))}, {"features", feats}, {"groups", groups}});
        }
        return io::dump({{"axes", axes}});
    }
    case ReportFormat::Ppm:
        throw ConfigError("the features report has no ppm form; use csv or json");
    }
    return {};
}

} // namespace

ReportKind parse_report_kind(std::string_view name) {
    static constexpr std::pair<std::string_view, ReportKind> kinds[] = {
        {"map", ReportKind::Map},         {"kernel", ReportKind::Kernel},   {"thickness", ReportKind::Thickness},
        {"dose", ReportKind::Dose},       {"volumes", ReportKind::Volumes}, {"features", ReportKind::Features}};
    for (const auto& [n, k] : kinds) {
        if (n == name) {
            return k;
        }
    }
    throw ConfigError("unknown report \"" + std::string(name) + "\"");
}

ReportFormat parse_report_format(std::string_view name) {
    if (name == "csv") {
        return ReportFormat::Csv;
    }
    if (name == "ppm") {
        return ReportFormat::Ppm;
    }
    if (name == "json") {
        return ReportFormat::Json;
    }
    throw ConfigError("unknown format \"" + std::string(name) + "\"");
}

std::string_view report_kind_name(ReportKind kind) {
    switch (kind) {
    case ReportKind::Map:
        return "map";
    case ReportKind::Kernel:
        return "kernel";
    case ReportKind::Thickness:
        return "thickness";
    case ReportKind::Dose:
        return "dose";
    case ReportKind::Volumes:
        return "volumes";
    case ReportKind::Features:
        return "features";
    }
    return "";
}

std::string_view report_format_extension(ReportFormat format) {
    switch (format) {
    case ReportFormat::Csv:
        return "csv";
    case ReportFormat::Ppm:
        return "ppm";
    case ReportFormat::Json:
        return "json";
    }
    return "";
}

std::string format_percent(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", value);
    return buf;
}

std::string format_p_value(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%#.4g", value);
    return buf;
}

std::string matrix_csv(const std::vector<std::string>& labels, const std::vector<std::optional<double>>& values,
                       const char* cellFormat) {
    const auto n = labels.size();
    if (values.size() != n * n) {
        throw ValidationError("matrix does not match its labels");
    }
    std::string out;
    for (const auto& l : labels) {
        out += "," + l;
    }
    out += "\n";
    char buf[64];
    for (std::size_t i = 0; i < n; ++i) {
        out += labels[i];
        for (std::size_t j = 0; j < n; ++j) {
            out += ",";
            if (const auto& v = values[i * n + j]) {
                if (cellFormat == nullptr) {
                    out += format_p_value(*v);
                } else {
                    std::snprintf(buf, sizeof buf, cellFormat, *v);
                    out += buf;
                }
            }
        }
        out += "\n";
    }
    return out;
}

std::string percent_ppm(std::size_t size, const std::vector<std::optional<double>>& percent) {
    if (percent.size() != size * size) {
        throw ValidationError("heatmap does not match its size");
    }
    std::string out = "P6\n" + std::to_string(size) + " " + std::to_string(size) + "\n255\n";
    for (const auto& v : percent) {
        if (!v || !std::isfinite(*v)) {
            out.append(3, static_cast<char>(128));
            continue;
        }
        const double r = std::clamp(*v, 0.0, 100.0) / 100.0;
        out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * (1.0 - r)))));
        out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * r))));
        out.push_back(0);
    }
    return out;
}

io::StudyManifest store_manifest(const StudyStore& store) {
    const auto metadata = store.read_metadata();
    try {
        return io::parse_manifest(metadata.at("config"), store.root(), false);
    } catch (const ConfigError& e) {
        throw FormatError(store.metadata_path().string() + ": config snapshot is invalid: " + e.what());
    }
}

std::vector<std::string> missing_samples(const StudyStore& store) {
    const auto manifest = store_manifest(store);
    std::vector<std::string> missing;
    for (const auto& c : manifest.cases) {
        for (const auto& cond : enumerate_conditions(manifest.grid)) {
            if (!store.has_sample(c.caseId, cond)) {
                missing.push_back(c.caseId + " " + condition_label(cond));
            }
        }
    }
    return missing;
}

std::string render_report(const StudyStore& store, ReportKind kind, ReportFormat format) {
    switch (kind) {
    case ReportKind::Map:
        return map_report(store, format);
    case ReportKind::Kernel:
        return marginal_report(store, compat::GridAxis::Kernel, format);
    case ReportKind::Thickness:
        return marginal_report(store, compat::GridAxis::Thickness, format);
    case ReportKind::Dose:
        return marginal_report(store, compat::GridAxis::Dose, format);
    case ReportKind::Volumes:
        return volumes_report(store, format);
    case ReportKind::Features:
        return features_report(store, format);
    }
    return {};
}

fs::path write_report(const StudyStore& store, ReportKind kind, ReportFormat format,
                      const std::optional<fs::path>& out) {
    const auto bytes = render_report(store, kind, format);
    const auto path = out ? *out
                          : store.reports_dir() / (std::string(report_kind_name(kind)) + "." +
                                                   std::string(report_format_extension(format)));
    io::write_file_atomic(path, bytes);
    return path;
}

} // namespace radcompat::report
