#pragma once

#include "radcompat/compat/compat.hpp"
#include "radcompat/core/case_record.hpp"
#include "radcompat/io/manifest.hpp"
#include "radcompat/volumetry/volumetry.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace radcompat::report {

/// Samples of one case for a fixed (dose, kernel), one per thickness, in the given thickness order.
/// The dose and kernel stages run once and are shared by every thickness.
[[nodiscard]] std::vector<features::FeatureSample> simulate_group(const CaseRecord& record, double doseFraction,
                                                                  int kernelIndex, std::span<const double> thicknessesMm,
                                                                  const io::AnalysisConfig& analysis);

/// Per-thickness ROI volumes, taken from the thickness-specific masks.
[[nodiscard]] volumetry::VolumeSeries case_volumes(const CaseRecord& record, std::span<const double> thicknessesMm);

/// Whole study held in memory, no store. Conditions in canonical order.
[[nodiscard]] compat::SampleTable compute_sample_table(std::span<const CaseRecord> cases,
                                                       const ConditionGridConfig& grid,
                                                       const io::AnalysisConfig& analysis, unsigned threads);

struct RunOptions {
    unsigned threads = 1;
    bool force = false;
    std::ostream* log = nullptr;
};

struct RunSummary {
    std::size_t computed = 0;
    std::size_t skipped = 0;
    std::vector<std::string> failures; // one line per failed case
    bool cellsWritten = false;

    [[nodiscard]] int exit_code() const { return failures.empty() ? 0 : 1; }
};

/// Deterministic store metadata for a manifest.
[[nodiscard]] nlohmann::json store_metadata(const io::StudyManifest& manifest);

/// Runs or resumes a study into `storeDir`. A store written for another configuration,
/// or holding corrupt records, is refused with ConfigError unless `force` is set.
RunSummary run_study(const io::StudyManifest& manifest, const std::filesystem::path& storeDir,
                     const RunOptions& options);

} // namespace radcompat::report
