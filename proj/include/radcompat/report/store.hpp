#pragma once

#include "radcompat/compat/compat.hpp"
#include "radcompat/features/features.hpp"
#include "radcompat/volumetry/volumetry.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace radcompat::report {

inline constexpr const char* kStoreVersion = "1";

/// On-disk study layout:
///   metadata.json            config snapshot, seed, version (deterministic)
///   timestamps.json          wall-clock times of the last run
///   samples/<case>/<label>.json
///   volumes.csv              caseId,thicknessMm,volumeMm3
///   cells.json               compatibility counts, upper triangle
///   reports/                 default report destination
class StudyStore {
public:
    explicit StudyStore(std::filesystem::path root);

    [[nodiscard]] const std::filesystem::path& root() const { return root_; }
    [[nodiscard]] std::filesystem::path metadata_path() const { return root_ / "metadata.json"; }
    [[nodiscard]] std::filesystem::path timestamps_path() const { return root_ / "timestamps.json"; }
    [[nodiscard]] std::filesystem::path volumes_path() const { return root_ / "volumes.csv"; }
    [[nodiscard]] std::filesystem::path cells_path() const { return root_ / "cells.json"; }
    [[nodiscard]] std::filesystem::path reports_dir() const { return root_ / "reports"; }
    [[nodiscard]] std::filesystem::path sample_path(const std::string& caseId, const ReconCondition& c) const;

    [[nodiscard]] bool has_metadata() const;
    /// Throws FormatError when metadata.json is unreadable.
    [[nodiscard]] nlohmann::json read_metadata() const;
    void write_metadata(const nlohmann::json& metadata) const;
    void write_timestamps(const nlohmann::json& timestamps) const;

    [[nodiscard]] bool has_sample(const std::string& caseId, const ReconCondition& c) const;
    void write_sample(const features::FeatureSample& s) const;
    /// Throws FormatError when the record is corrupt or belongs to another (case, condition).
    [[nodiscard]] features::FeatureSample read_sample(const std::string& caseId, const ReconCondition& c) const;

    void write_volumes(const std::vector<volumetry::VolumeSeries>& series) const;
    [[nodiscard]] std::vector<volumetry::VolumeSeries> read_volumes() const;

    void write_cells(const compat::StudyResults& results) const;
    [[nodiscard]] bool has_cells() const;
    [[nodiscard]] compat::StudyResults read_cells() const;

    /// Removes derived files (samples, volumes, cells); metadata is rewritten by the caller.
    void clear_results() const;

private:
    std::filesystem::path root_;
};

} // namespace radcompat::report
