#pragma once

#include "radcompat/compat/compat.hpp"
#include "radcompat/core/case_record.hpp"
#include "radcompat/core/condition.hpp"
#include "radcompat/features/features.hpp"
#include "radcompat/sim/condition_sim.hpp"
#include "radcompat/volumetry/volumetry.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace radcompat::io {

struct CaseEntry {
    std::string caseId;
    std::filesystem::path volumePath;
    std::filesystem::path maskPath;
    /// Masks already drawn on the thick-slice grid, keyed by thickness in mm.
    std::map<double, std::filesystem::path> maskPathsByThickness;
    std::optional<Spacing> spacingOverride;

    bool operator==(const CaseEntry&) const = default;
};

struct AnalysisConfig {
    features::FeatureConfig features;
    volumetry::StatsConfig statistics;
    sim::SimulatorConfig simulator;
    compat::Ordering ordering = compat::Ordering::Canonical;
};

struct StudyManifest {
    std::string studyId;
    std::vector<CaseEntry> cases;
    ConditionGridConfig grid;
    AnalysisConfig analysis;
};

/// Validates against the schema; relative paths resolve against baseDir.
/// Schema violations throw ConfigError naming the JSON pointer; duplicate ids throw ValidationError.
[[nodiscard]] StudyManifest parse_manifest(const nlohmann::json& doc, const std::filesystem::path& baseDir,
                                           bool checkPaths = true);
[[nodiscard]] StudyManifest load_manifest(const std::filesystem::path& path);

/// Fully-defaulted manifest, stable key order.
[[nodiscard]] nlohmann::json manifest_to_json(const StudyManifest& m);

/// Reads the case images and derives one mask per grid thickness.
[[nodiscard]] CaseRecord load_case(const CaseEntry& entry, const std::vector<double>& thicknessesMm);

[[nodiscard]] std::string direction_mode_name(features::DirectionMode mode);
[[nodiscard]] std::string p_value_mode_name(volumetry::PValueMode mode);
[[nodiscard]] std::string ordering_name(compat::Ordering ordering);

} // namespace radcompat::io
