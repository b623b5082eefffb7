#pragma once

#include "radcompat/phantom/phantom.hpp"

#include <filesystem>

namespace radcompat::report {

struct PhantomCohortOptions {
    std::size_t cohort = 1;
    std::uint64_t seed = 1;
    std::filesystem::path outDir;
    phantom::PhantomSpec base = default_cohort_base();
    phantom::CohortJitter jitter = default_cohort_jitter();

    /// Gaussian-field texture on the default grid.
    static phantom::PhantomSpec default_cohort_base();
    static phantom::CohortJitter default_cohort_jitter();
};

/// Writes <case>_volume.nrrd, <case>_mask.nrrd and manifest.json. Returns the manifest path.
/// The manifest uses relative paths, the default grid and a simulator seed equal to `seed`.
std::filesystem::path write_phantom_cohort(const PhantomCohortOptions& options);

} // namespace radcompat::report
