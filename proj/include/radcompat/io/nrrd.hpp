#pragma once

#include "radcompat/core/volume.hpp"

#include <filesystem>
#include <vector>

namespace radcompat::io {

enum class NrrdType { Int16, UInt8, Float32 };

/// Decoded attached-header NRRD: 3-D, raw, little-endian.
struct NrrdImage {
    Dims dims;
    Spacing spacing;
    NrrdType type = NrrdType::Float32;
    std::vector<float> values;
};

/// Throws FormatError naming the offending header line, TruncationError on a payload size mismatch.
[[nodiscard]] NrrdImage parse_nrrd(std::string_view bytes);
[[nodiscard]] NrrdImage read_nrrd(const std::filesystem::path& path);

[[nodiscard]] ScalarVolume read_volume(const std::filesystem::path& path);

struct MaskImage {
    RoiMask mask;
    Spacing spacing;
};

/// uint8 payload restricted to {0, 1}.
[[nodiscard]] MaskImage read_mask(const std::filesystem::path& path);

[[nodiscard]] std::string encode_nrrd(const ScalarVolume& v, NrrdType type = NrrdType::Float32);
[[nodiscard]] std::string encode_nrrd(const RoiMask& m, const Spacing& spacing);

/// Int16 requires integral intensities within range (ValidationError otherwise).
void write_nrrd(const ScalarVolume& v, const std::filesystem::path& path, NrrdType type = NrrdType::Float32);
void write_nrrd(const RoiMask& m, const Spacing& spacing, const std::filesystem::path& path);

} // namespace radcompat::io
