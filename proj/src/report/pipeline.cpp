#include "radcompat/report/pipeline.hpp"

#include "radcompat/core/error.hpp"
#include "radcompat/core/parallel.hpp"
#include "radcompat/report/store.hpp"
#include "radcompat/sim/condition_sim.hpp"

#include <chrono>
#include <ctime>
#include <map>
#include <mutex>
#include <ostream>
#include <set>

namespace radcompat::report {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GroupTask {
    std::size_t caseIndex;
    double dose;
    int kernel;
};

std::vector<GroupTask> group_tasks(std::size_t cases, const ConditionGridConfig& grid) {
    std::vector<GroupTask> tasks;
    for (std::size_t p = 0; p < cases; ++p) {
        for (double d : grid.doses) {
            for (int k : grid.kernels) {
                tasks.push_back({p, d, k});
            }
        }
    }
    return tasks;
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

class Logger {
public:
    explicit Logger(std::ostream* out) : out_(out) {}
    void line(const std::string& text) {
        if (out_ != nullptr) {
            std::lock_guard lock(mutex_);
            *out_ << text << '\n' << std::flush;
        }
    }

private:
    std::ostream* out_;
    std::mutex mutex_;
};

} // namespace

std::vector<features::FeatureSample> simulate_group(const CaseRecord& record, double doseFraction, int kernelIndex,
                                                    std::span<const double> thicknessesMm,
                                                    const io::AnalysisConfig& analysis) {
    const auto dosed = sim::simulate_dose(record.baseVolume, doseFraction, analysis.simulator, record.caseId);
    const auto filtered = sim::simulate_kernel(dosed, kernelIndex, analysis.simulator);
    std::vector<features::FeatureSample> out;
    out.reserve(thicknessesMm.size());
    for (double t : thicknessesMm) {
        const auto volume = sim::simulate_thickness(filtered, t);
        const auto it = record.baseMasksByThickness.find(t);
        if (it == record.baseMasksByThickness.end()) {
            throw ValidationError(record.caseId + ": no mask for thickness " + format_minimal(t) + " mm");
        }
        auto sample = features::extract_feature_sample(volume, it->second, analysis.features);
        sample.caseId = record.caseId;
        sample.condition = ReconCondition{doseFraction, kernelIndex, t};
        out.push_back(std::move(sample));
    }
    return out;
}

volumetry::VolumeSeries case_volumes(const CaseRecord& record, std::span<const double> thicknessesMm) {
    volumetry::VolumeSeries series{record.caseId, {}};
    const auto& s = record.baseVolume.spacing();
    for (double t : thicknessesMm) {
        const auto it = record.baseMasksByThickness.find(t);
        if (it == record.baseMasksByThickness.end()) {
            throw ValidationError(record.caseId + ": no mask for thickness " + format_minimal(t) + " mm");
        }
        series.volumes[t] = volumetry::measure_volume(it->second, Spacing{s.sx, s.sy, t});
    }
    return series;
}

compat::SampleTable compute_sample_table(std::span<const CaseRecord> cases, const ConditionGridConfig& grid,
                                         const io::AnalysisConfig& analysis, unsigned threads) {
    grid.validate();
    std::vector<std::string> ids;
    for (const auto& c : cases) {
        ids.push_back(c.caseId);
    }
    compat::SampleTable table(enumerate_conditions(grid), ids);
    const auto tasks = group_tasks(cases.size(), grid);
    std::mutex mutex;
    parallel_for(tasks.size(), threads, [&](std::size_t i) {
        const auto& task = tasks[i];
        auto samples = simulate_group(cases[task.caseIndex], task.dose, task.kernel, grid.thicknessesMm, analysis);
        std::lock_guard lock(mutex);
        for (const auto& s : samples) {
            table.set(table.index_of(s.condition), task.caseIndex, s);
        }
    });
    return table;
}

json store_metadata(const io::StudyManifest& manifest) {
    json j;
    j["tool"] = "radcompat";
    j["version"] = kStoreVersion;
    j["seed"] = manifest.analysis.simulator.seed;
    j["config"] = io::manifest_to_json(manifest);
    std::vector<std::string> keys;
    for (const auto& f : features::feature_table()) {
        keys.emplace_back(f.key);
    }
    j["features"] = keys;
    return j;
}

RunSummary run_study(const io::StudyManifest& manifest, const fs::path& storeDir, const RunOptions& options) {
    manifest.grid.validate();
    Logger log(options.log);
    const StudyStore store(storeDir);
    const auto metadata = store_metadata(manifest);
    const auto conditions = enumerate_conditions(manifest.grid);

    if (store.has_metadata() && !options.force) {
        json existing;
        try {
            existing = store.read_metadata();
        } catch (const FormatError& e) {
            throw ConfigError(std::string("refusing to resume a corrupt store: ") + e.what());
        }
        if (existing != metadata) {
            throw ConfigError("refusing to resume: " + storeDir.string() +
                              " was written for a different configuration (use --force to overwrite)");
        }
        for (const auto& c : manifest.cases) {
            for (const auto& cond : conditions) {
                if (store.has_sample(c.caseId, cond)) {
                    try {
                        (void)store.read_sample(c.caseId, cond);
                    } catch (const FormatError& e) {
                        throw ConfigError(std::string("refusing to resume a corrupt store: ") + e.what());
                    }
                }
            }
        }
    } else if (!store.has_metadata() && fs::exists(storeDir) && !fs::is_empty(storeDir) && !options.force) {
        throw ConfigError("refusing to write into non-empty directory " + storeDir.string() +
                          " that is not a study store (use --force)");
    }
    if (options.force) {
        store.clear_results();
    }
    fs::create_directories(storeDir);
    store.write_metadata(metadata);
    const auto started = utc_now();

    RunSummary summary;
    std::vector<std::optional<CaseRecord>> records(manifest.cases.size());
    std::vector<std::string> caseFailure(manifest.cases.size());
    parallel_for(manifest.cases.size(), options.threads, [&](std::size_t p) {
        try {
            records[p] = io::load_case(manifest.cases[p], manifest.grid.thicknessesMm);
        } catch (const Error& e) {
            caseFailure[p] = e.what();
        }
    });

    const auto tasks = group_tasks(manifest.cases.size(), manifest.grid);
    std::mutex mutex;
    parallel_for(tasks.size(), options.threads, [&](std::size_t i) {
        const auto& task = tasks[i];
        const auto& entry = manifest.cases[task.caseIndex];
        {
            std::lock_guard lock(mutex);
            if (!caseFailure[task.caseIndex].empty()) {
                return;
            }
        }
        std::vector<double> missing;
        for (double t : manifest.grid.thicknessesMm) {
            if (!store.has_sample(entry.caseId, ReconCondition{task.dose, task.kernel, t})) {
                missing.push_back(t);
            }
        }
        const auto skipped = manifest.grid.thicknessesMm.size() - missing.size();
        std::size_t computed = 0;
        if (!missing.empty()) {
            try {
                for (const auto& s : simulate_group(*records[task.caseIndex], task.dose, task.kernel, missing,
                                                    manifest.analysis)) {
                    store.write_sample(s);
                    ++computed;
                }
            } catch (const Error& e) {
                std::lock_guard lock(mutex);
                if (caseFailure[task.caseIndex].empty()) {
                    caseFailure[task.caseIndex] = e.what();
                }
                return;
            }
        }
        std::lock_guard lock(mutex);
        summary.computed += computed;
        summary.skipped += skipped;
    });

    for (std::size_t p = 0; p < manifest.cases.size(); ++p) {
        if (!caseFailure[p].empty()) {
            summary.failures.push_back(manifest.cases[p].caseId + ": " + caseFailure[p]);
            log.line("case " + manifest.cases[p].caseId + " failed: " + caseFailure[p]);
        }
    }
    log.line("samples computed: " + std::to_string(summary.computed) +
             ", already present: " + std::to_string(summary.skipped));

    if (summary.failures.empty()) {
        std::vector<volumetry::VolumeSeries> volumes;
        for (const auto& r : records) {
            volumes.push_back(case_volumes(*r, manifest.grid.thicknessesMm));
        }
        store.write_volumes(volumes);

        std::vector<std::string> ids;
        for (const auto& c : manifest.cases) {
            ids.push_back(c.caseId);
        }
        compat::SampleTable table(conditions, ids);
        for (std::size_t ci = 0; ci < conditions.size(); ++ci) {
            for (std::size_t p = 0; p < ids.size(); ++p) {
                table.set(ci, p, store.read_sample(ids[p], conditions[ci]));
            }
        }
        store.write_cells(compat::compute_study(table, manifest.analysis.statistics, options.threads));
        summary.cellsWritten = true;
        log.line("compatibility cells written for " + std::to_string(conditions.size()) + " conditions");
    } else {
        log.line(std::to_string(summary.failures.size()) + " case(s) failed; cells not written");
    }
    store.write_timestamps({{"started", started}, {"finished", utc_now()}});
    return summary;
}

} // namespace radcompat::report
