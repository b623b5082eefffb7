#pragma once

#include "radcompat/compat/compat.hpp"
#include "radcompat/features/features.hpp"

#include <json.hpp>

namespace radcompat::io {

[[nodiscard]] nlohmann::json condition_to_json(const ReconCondition& c);
[[nodiscard]] ReconCondition condition_from_json(const nlohmann::json& j);

/// Non-finite numbers are written as null and read back as NaN.
[[nodiscard]] nlohmann::json sample_to_json(const features::FeatureSample& s);
/// Throws FormatError on a malformed record.
[[nodiscard]] features::FeatureSample sample_from_json(const nlohmann::json& j);

/// Upper triangle of the count matrix.
[[nodiscard]] nlohmann::json study_to_json(const compat::StudyResults& r);
[[nodiscard]] compat::StudyResults study_from_json(const nlohmann::json& j);

/// Two-space indented dump with a trailing newline.
[[nodiscard]] std::string dump(const nlohmann::json& j);

} // namespace radcompat::io
