#include "radcompat/report/phantom_command.hpp"

#include "radcompat/core/error.hpp"
#include "radcompat/io/file.hpp"
#include "radcompat/io/manifest.hpp"
#include "radcompat/io/nrrd.hpp"
#include "radcompat/io/serialize.hpp"

namespace radcompat::report {

namespace fs = std::filesystem;

phantom::PhantomSpec PhantomCohortOptions::default_cohort_base() {
    phantom::PhantomSpec spec;
    spec.texture = phantom::GaussianFieldTexture{};
    return spec;
}

phantom::CohortJitter PhantomCohortOptions::default_cohort_jitter() {
    return {0.15, 0.5, 0.1, 0.1};
}

fs::path write_phantom_cohort(const PhantomCohortOptions& options) {
    if (options.cohort == 0) {
        throw ConfigError("--cohort must be >= 1");
    }
    const auto cases = phantom::cohort_specs(options.cohort, options.base, options.jitter, options.seed);
    nlohmann::json caseList = nlohmann::json::array();
    for (const auto& c : cases) {
        const auto image = phantom::generate_phantom(c.spec);
        const auto volumeName = c.caseId + "_volume.nrrd";
        const auto maskName = c.caseId + "_mask.nrrd";
        io::write_nrrd(image.volume, options.outDir / volumeName);
        io::write_nrrd(image.mask, image.volume.spacing(), options.outDir / maskName);
        caseList.push_back({{"caseId", c.caseId}, {"volumePath", volumeName}, {"maskPath", maskName}});
    }
    io::StudyManifest defaults;
    defaults.analysis.simulator.seed = options.seed;
    const auto full = io::manifest_to_json(defaults);
    nlohmann::json manifest{{"studyId", "phantom-cohort-" + std::to_string(options.cohort) + "-seed-" +
                                            std::to_string(options.seed)},
                            {"cases", caseList},
                            {"grid", full.at("grid")},
                            {"analysis", full.at("analysis")}};
    const auto path = options.outDir / "manifest.json";
    io::write_file_atomic(path, io::dump(manifest));
    return path;
}

} // namespace radcompat::report
