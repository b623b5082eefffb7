#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace radcompat::io {

/// Whole file as bytes. Throws IoError naming the path.
[[nodiscard]] std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary and renames it into place, creating parent directories.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

} // namespace radcompat::io
