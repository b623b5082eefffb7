#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace radcompat {

/// Reconstruction kernels ordered softest to sharpest. The index is the sharpness axis.
inline constexpr std::array<std::string_view, 10> kKernelNames{
    "I26f", "I31f", "B31f", "I40f", "B40f", "I50f", "B50f", "I70f", "B60f", "B70f"};

inline constexpr int kReferenceKernel = 6; // B50f

[[nodiscard]] std::string_view kernel_name(int index);
/// Throws ConfigError for an unknown name.
[[nodiscard]] int kernel_index(std::string_view name);

/// One point of the acquisition/reconstruction grid.
struct ReconCondition {
    double doseFraction = 1.0;
    int kernelIndex = kReferenceKernel;
    double thicknessMm = 1.0;

    bool operator==(const ReconCondition&) const = default;
};

/// Thickness descending, then kernel ascending, then dose descending.
[[nodiscard]] bool canonical_less(const ReconCondition& a, const ReconCondition& b);

/// "T{thickness}_K{kernel}_D{dose%}", e.g. "T0.75_KB50f_D100".
[[nodiscard]] std::string condition_label(const ReconCondition& c);

/// Shortest decimal form ("%g"): 1.0 -> "1", 0.75 -> "0.75", 12.5 -> "12.5".
[[nodiscard]] std::string format_minimal(double value);

struct ConditionGridConfig {
    std::vector<double> doses{1.0, 0.5, 0.25, 0.125};
    std::vector<int> kernels{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::vector<double> thicknessesMm{0.6, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0};

    /// Throws ConfigError on an empty axis, a duplicate, or an inadmissible value.
    void validate() const;
    [[nodiscard]] std::size_t size() const {
        return doses.size() * kernels.size() * thicknessesMm.size();
    }
};

/// Full Cartesian product in canonical order.
[[nodiscard]] std::vector<ReconCondition> enumerate_conditions(const ConditionGridConfig& grid);

} // namespace radcompat
