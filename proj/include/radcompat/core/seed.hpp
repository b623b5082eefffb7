#pragma once

#include <cstdint>
#include <string_view>

namespace radcompat {

/// SplitMix64 finalizer.
[[nodiscard]] std::uint64_t mix64(std::uint64_t x);

/// FNV-1a over the bytes of a string.
[[nodiscard]] std::uint64_t hash_string(std::string_view s);

/// Deterministic per-task seed; no RNG state is shared between tasks.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t base, std::string_view key, double value);

} // namespace radcompat
