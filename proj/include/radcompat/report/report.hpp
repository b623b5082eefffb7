#pragma once

#include "radcompat/compat/compat.hpp"
#include "radcompat/io/manifest.hpp"
#include "radcompat/report/store.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace radcompat::report {

enum class ReportKind { Map, Kernel, Thickness, Dose, Volumes, Features };
enum class ReportFormat { Csv, Ppm, Json };

/// Throws ConfigError for an unknown name.
[[nodiscard]] ReportKind parse_report_kind(std::string_view name);
[[nodiscard]] ReportFormat parse_report_format(std::string_view name);
[[nodiscard]] std::string_view report_kind_name(ReportKind kind);
[[nodiscard]] std::string_view report_format_extension(ReportFormat format);

/// Square matrix CSV: header row and first column carry the labels; empty cell for undefined.
[[nodiscard]] std::string matrix_csv(const std::vector<std::string>& labels,
                                     const std::vector<std::optional<double>>& values, const char* cellFormat);

/// Binary P6, one pixel per cell. 100 is pure green, 0 pure red, undefined gray.
[[nodiscard]] std::string percent_ppm(std::size_t size, const std::vector<std::optional<double>>& percent);

/// "%.2f", the percentage cell format.
[[nodiscard]] std::string format_percent(double value);
/// Four significant digits, the p-value cell format.
[[nodiscard]] std::string format_p_value(double value);

/// Manifest reconstructed from the store's config snapshot.
[[nodiscard]] io::StudyManifest store_manifest(const StudyStore& store);

/// (caseId, condition label) pairs without a sample record.
[[nodiscard]] std::vector<std::string> missing_samples(const StudyStore& store);

/// Report bytes. Throws ValidationError listing missing samples when the store is incomplete,
/// ConfigError for an unsupported kind/format pair.
[[nodiscard]] std::string render_report(const StudyStore& store, ReportKind kind, ReportFormat format);

/// Writes to `out`, or to reports/<kind>.<ext> inside the store. Returns the path written.
std::filesystem::path write_report(const StudyStore& store, ReportKind kind, ReportFormat format,
                                   const std::optional<std::filesystem::path>& out = std::nullopt);

} // namespace radcompat::report
