#include "radcompat/report/cli.hpp"

#include "radcompat/core/error.hpp"
#include "radcompat/io/manifest.hpp"
#include "radcompat/report/phantom_command.hpp"
#include "radcompat/report/pipeline.hpp"
#include "radcompat/report/report.hpp"
#include "radcompat/simd/kernels.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <ostream>
#include <thread>

namespace radcompat::report {

namespace fs = std::filesystem;

namespace {

unsigned default_threads() {
    if (const char* env = std::getenv("RADCOMPAT_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) {
                return static_cast<unsigned>(v);
            }
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

struct PhantomArgs {
    std::size_t cohort = 1;
    std::uint64_t seed = 1;
    std::string out;
    std::string texture = "gaussian";
    std::string shape = "sphere";
    double radius = 7.0;
    double amplitude = 20.0;
    double correlation = 1.0;
    double radiusJitter = PhantomCohortOptions::default_cohort_jitter().radiusFraction;
    double centerJitter = PhantomCohortOptions::default_cohort_jitter().centerMm;
};

struct RunArgs {
    std::string manifest;
    std::string store;
    unsigned threads = 1;
    bool force = false;
    std::vector<double> doses;
    std::vector<std::string> kernels;
    std::vector<double> thicknesses;
    std::optional<std::uint64_t> seed;
};

struct ReportArgs {
    std::string which;
    std::string store;
    std::string format = "csv";
    std::string out;
};

int do_phantom(const PhantomArgs& a, std::ostream& out) {
    if (a.cohort == 0) {
        throw ConfigError("--cohort must be >= 1");
    }
    PhantomCohortOptions options;
    options.cohort = a.cohort;
    options.seed = a.seed;
    options.outDir = a.out;
    options.base.radiiMm = {a.radius, a.radius, a.radius};
    if (a.shape == "ellipsoid") {
        options.base.shape = phantom::Shape::Ellipsoid;
        options.base.radiiMm = {a.radius, a.radius * 0.8, a.radius * 0.9};
    }
    if (a.texture == "uniform") {
        options.base.texture = phantom::UniformTexture{};
    } else {
        options.base.texture = phantom::GaussianFieldTexture{a.correlation, a.amplitude};
    }
    options.jitter.radiusFraction = a.radiusJitter;
    options.jitter.centerMm = a.centerJitter;
    const auto manifest = write_phantom_cohort(options);
    out << "wrote " << a.cohort << " phantom case(s) and " << manifest.string() << '\n';
    return kExitOk;
}

int do_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
    auto manifest = io::load_manifest(a.manifest);
    if (!a.doses.empty()) {
        manifest.grid.doses = a.doses;
    }
    if (!a.kernels.empty()) {
        manifest.grid.kernels.clear();
        for (const auto& k : a.kernels) {
            manifest.grid.kernels.push_back(kernel_index(k));
        }
    }
    if (!a.thicknesses.empty()) {
        manifest.grid.thicknessesMm = a.thicknesses;
    }
    if (a.seed) {
        manifest.analysis.simulator.seed = *a.seed;
    }
    manifest.grid.validate();
    const fs::path store = a.store.empty() ? fs::path(a.manifest).parent_path() / "store" : fs::path(a.store);
    out << "running " << manifest.grid.size() << " conditions x " << manifest.cases.size() << " case(s) into "
        << store.string() << " on " << a.threads << " thread(s), " << simd::isa_name(simd::kernels().isa)
        << " kernels\n";
    const auto summary = run_study(manifest, store, RunOptions{a.threads, a.force, &err});
    out << "computed " << summary.computed << ", skipped " << summary.skipped << ", failed cases "
        << summary.failures.size() << '\n';
    return summary.exit_code();
}

int do_report(const ReportArgs& a, std::ostream& out) {
    const auto kind = parse_report_kind(a.which);
    const auto format = parse_report_format(a.format);
    const StudyStore store(a.store);
    if (!store.has_metadata()) {
        throw ConfigError(a.store + " is not a study store");
    }
    const auto path =
        write_report(store, kind, format, a.out.empty() ? std::nullopt : std::optional<fs::path>(a.out));
    out << "wrote " << path.string() << '\n';
    return kExitOk;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Radiomic feature compatibility across simulated CT acquisition and reconstruction settings"};
    app.require_subcommand(1);

    PhantomArgs phantomArgs;
    auto* phantomCmd = app.add_subcommand("phantom", "Generate a synthetic nodule cohort and a manifest");
    phantomCmd->add_option("--cohort", phantomArgs.cohort, "Number of cases")->capture_default_str();
    phantomCmd->add_option("--seed", phantomArgs.seed, "Cohort seed, also used as the simulator seed")
        ->capture_default_str();
    phantomCmd->add_option("--out", phantomArgs.out, "Output directory")->required();
    phantomCmd->add_option("--texture", phantomArgs.texture, "Nodule texture")
        ->check(CLI::IsMember({"gaussian", "uniform"}))
        ->capture_default_str();
    phantomCmd->add_option("--shape", phantomArgs.shape, "Nodule shape")
        ->check(CLI::IsMember({"sphere", "ellipsoid"}))
        ->capture_default_str();
    phantomCmd->add_option("--radius", phantomArgs.radius, "Nodule radius in mm")->capture_default_str();
    phantomCmd->add_option("--amplitude", phantomArgs.amplitude, "Texture SD in HU")->capture_default_str();
    phantomCmd->add_option("--correlation", phantomArgs.correlation, "Texture correlation length in mm")
        ->capture_default_str();
    phantomCmd->add_option("--radius-jitter", phantomArgs.radiusJitter, "Relative radius spread across cases")
        ->capture_default_str();
    phantomCmd->add_option("--center-jitter", phantomArgs.centerJitter, "Center spread in mm")->capture_default_str();

    RunArgs runArgs;
    runArgs.threads = default_threads();
    auto* runCmd = app.add_subcommand("run", "Simulate every condition, extract features and compare");
    runCmd->add_option("manifest", runArgs.manifest, "Study manifest (JSON)")->required()->check(CLI::ExistingFile);
    runCmd->add_option("--store", runArgs.store, "Results directory (default: <manifest dir>/store)");
    runCmd->add_option("--threads", runArgs.threads, "Worker threads (default: RADCOMPAT_THREADS or all cores)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    runCmd->add_flag("--force", runArgs.force, "Recompute everything, overwriting an existing store");
    runCmd->add_option("--grid-doses", runArgs.doses, "Override the dose fractions")->delimiter(',');
    runCmd->add_option("--grid-kernels", runArgs.kernels, "Override the kernels by name")->delimiter(',');
    runCmd->add_option("--grid-thicknesses", runArgs.thicknesses, "Override the slice thicknesses in mm")
        ->delimiter(',');
    runCmd->add_option("--seed", runArgs.seed, "Override the simulator seed");

    ReportArgs reportArgs;
    auto* reportCmd = app.add_subcommand("report", "Emit a matrix or table from a completed store");
    reportCmd->add_option("which", reportArgs.which, "map | kernel | thickness | dose | volumes | features")
        ->required()
        ->check(CLI::IsMember({"map", "kernel", "thickness", "dose", "volumes", "features"}));
    reportCmd->add_option("--store", reportArgs.store, "Results directory")->required();
    reportCmd->add_option("--format", reportArgs.format, "csv | ppm | json")
        ->check(CLI::IsMember({"csv", "ppm", "json"}))
        ->capture_default_str();
    reportCmd->add_option("--out", reportArgs.out, "Output file (default: <store>/reports/<which>.<format>)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kExitOk;
        }
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (*phantomCmd) {
            return do_phantom(phantomArgs, out);
        }
        if (*runCmd) {
            return do_run(runArgs, out, err);
        }
        return do_report(reportArgs, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return *reportCmd ? kExitPartial : kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitPartial;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitPartial;
    }
}

} // namespace radcompat::report
