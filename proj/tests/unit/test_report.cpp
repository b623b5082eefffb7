#include "radcompat/core/error.hpp"
#include "radcompat/io/file.hpp"
#include "radcompat/io/manifest.hpp"
#include "radcompat/report/phantom_command.hpp"
#include "radcompat/report/pipeline.hpp"
#include "radcompat/report/report.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

using namespace radcompat;
using namespace radcompat::report;
namespace fs = std::filesystem;

namespace {

/// Small phantoms and a 2x2x2 grid so a full run takes well under a second per case.
class StudyTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("radcompat_report_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        PhantomCohortOptions opt;
        opt.cohort = 2;
        opt.seed = 5;
        opt.outDir = dir_ / "cohort";
        opt.base.dims = {24, 24, 48};
        opt.base.radiiMm = {4.0, 4.0, 4.0};
        const auto path = write_phantom_cohort(opt);
        manifest_ = io::load_manifest(path);
        manifest_.grid.doses = {1.0, 0.25};
        manifest_.grid.kernels = {1, 8};
        manifest_.grid.thicknessesMm = {1.0, 2.0};
        manifest_.analysis.features.ng = 16;
    }
    void TearDown() override { fs::remove_all(dir_); }

    RunSummary run(const fs::path& store, bool force = false) {
        RunOptions o;
        o.threads = 2;
        o.force = force;
        return run_study(manifest_, store, o);
    }

    fs::path dir_;
    io::StudyManifest manifest_;
};

} // namespace

TEST(ReportFormat, MatrixCsvLayout) {
    const std::string csv = matrix_csv({"a", "b"}, {100.0, std::nullopt, 12.345, 100.0}, "%.2f");
    EXPECT_EQ(csv, ",a,b\na,100.00,\nb,12.35,100.00\n");
    EXPECT_EQ(format_percent(66.666666), "66.67");
    EXPECT_EQ(format_p_value(0.0455002), "0.04550");
}

TEST(ReportFormat, PpmColors) {
    const std::string ppm = percent_ppm(2, {100.0, 0.0, std::nullopt, 50.0});
    const std::string header = "P6\n2 2\n255\n";
    ASSERT_EQ(ppm.size(), header.size() + 12);
    EXPECT_EQ(ppm.substr(0, header.size()), header);
    const auto px = [&](std::size_t i, std::size_t c) {
        return static_cast<unsigned char>(ppm[header.size() + 3 * i + c]);
    };
    EXPECT_EQ(px(0, 0), 0);
    EXPECT_EQ(px(0, 1), 255);
    EXPECT_EQ(px(1, 0), 255);
    EXPECT_EQ(px(1, 1), 0);
    EXPECT_EQ(px(2, 0), 128);
    EXPECT_EQ(px(2, 2), 128);
    EXPECT_EQ(px(3, 0), 128);
    EXPECT_EQ(px(3, 2), 0);
}

TEST(ReportFormat, NamesParse) {
    EXPECT_EQ(parse_report_kind("thickness"), ReportKind::Thickness);
    EXPECT_EQ(parse_report_format("ppm"), ReportFormat::Ppm);
    EXPECT_THROW((void)parse_report_kind("heatmap"), ConfigError);
    EXPECT_THROW((void)parse_report_format("png"), ConfigError);
}

TEST_F(StudyTest, RunWritesCompleteStore) {
    const auto summary = run(dir_ / "store");
    EXPECT_EQ(summary.exit_code(), 0);
    EXPECT_EQ(summary.computed, 16u);
    EXPECT_TRUE(summary.cellsWritten);
    StudyStore store(dir_ / "store");
    EXPECT_TRUE(missing_samples(store).empty());
    const auto cells = store.read_cells();
    EXPECT_EQ(cells.comparisons(), 8u * 8u * 28u * 2u);
    EXPECT_EQ(store.read_volumes().size(), 2u);
    const auto s = store.read_sample("case_01", ReconCondition{0.25, 8, 2.0});
    EXPECT_EQ(s.caseId, "case_01");
}

TEST_F(StudyTest, ResumeSkipsAndReproducesBytes) {
    run(dir_ / "store");
    StudyStore store(dir_ / "store");
    const std::string cellsBefore = io::read_file(store.cells_path());
    const std::string mapBefore = render_report(store, ReportKind::Map, ReportFormat::Csv);
    fs::remove(store.sample_path("case_02", ReconCondition{1.0, 1, 1.0}));
    fs::remove(store.cells_path());
    const auto again = run(dir_ / "store");
    EXPECT_EQ(again.computed, 1u);
    EXPECT_EQ(again.skipped, 15u);
    EXPECT_EQ(io::read_file(store.cells_path()), cellsBefore);
    EXPECT_EQ(render_report(store, ReportKind::Map, ReportFormat::Csv), mapBefore);
}

TEST_F(StudyTest, TwoStoresAreByteIdentical) {
    run(dir_ / "a");
    run(dir_ / "b");
    StudyStore a(dir_ / "a");
    StudyStore b(dir_ / "b");
    EXPECT_EQ(io::read_file(a.metadata_path()), io::read_file(b.metadata_path()));
    EXPECT_EQ(io::read_file(a.cells_path()), io::read_file(b.cells_path()));
    EXPECT_EQ(io::read_file(a.volumes_path()), io::read_file(b.volumes_path()));
    for (auto kind : {ReportKind::Map, ReportKind::Kernel, ReportKind::Thickness, ReportKind::Dose,
                      ReportKind::Volumes, ReportKind::Features}) {
        EXPECT_EQ(render_report(a, kind, ReportFormat::Csv), render_report(b, kind, ReportFormat::Csv));
    }
}

TEST_F(StudyTest, RefusesMismatchedConfigUnlessForced) {
    run(dir_ / "store");
    manifest_.analysis.statistics.tThreshold = 2.5;
    EXPECT_THROW(run(dir_ / "store"), ConfigError);
    const auto forced = run(dir_ / "store", true);
    EXPECT_EQ(forced.computed, 16u);
}

TEST_F(StudyTest, RefusesCorruptStore) {
    run(dir_ / "store");
    StudyStore store(dir_ / "store");
    io::write_file_atomic(store.sample_path("case_01", ReconCondition{1.0, 8, 2.0}), "{\"caseId\":");
    EXPECT_THROW(run(dir_ / "store"), ConfigError);
}

TEST_F(StudyTest, ReportsRefuseIncompleteStore) {
    run(dir_ / "store");
    StudyStore store(dir_ / "store");
    fs::remove(store.sample_path("case_01", ReconCondition{0.25, 1, 1.0}));
    try {
        (void)render_report(store, ReportKind::Map, ReportFormat::Csv);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("case_01 T1_KI31f_D25"), std::string::npos) << e.what();
    }
}

TEST_F(StudyTest, ReportShapes) {
    run(dir_ / "store");
    StudyStore store(dir_ / "store");
    const std::string map = render_report(store, ReportKind::Map, ReportFormat::Csv);
    std::istringstream lines(map);
    std::string header;
    std::getline(lines, header);
    EXPECT_EQ(header.substr(0, 17), ",T2_KI31f_D100,T2");
    const std::string ppm = render_report(store, ReportKind::Map, ReportFormat::Ppm);
    EXPECT_EQ(ppm.substr(0, 11), "P6\n8 8\n255\n");
    EXPECT_EQ(render_report(store, ReportKind::Dose, ReportFormat::Csv).substr(0, 10), ",100%,25%\n");
    const std::string vol = render_report(store, ReportKind::Volumes, ReportFormat::Csv);
    EXPECT_EQ(vol.substr(0, vol.find('\n')), "thicknessMm,meanPercent,sdPercent,summary");
    const std::string features = render_report(store, ReportKind::Features, ReportFormat::Json);
    EXPECT_NE(features.find("glcm_asm"), std::string::npos);
    EXPECT_THROW((void)render_report(store, ReportKind::Features, ReportFormat::Ppm), ConfigError);
    const auto path = write_report(store, ReportKind::Kernel, ReportFormat::Csv);
    EXPECT_EQ(path, store.reports_dir() / "kernel.csv");
    EXPECT_TRUE(fs::exists(path));
}

TEST_F(StudyTest, SingleCaseVolumesReport) {
    manifest_.cases.resize(1);
    run(dir_ / "store");
    StudyStore store(dir_ / "store");
    const std::string vol = render_report(store, ReportKind::Volumes, ReportFormat::Csv);
    EXPECT_NE(vol.find("\n1.00,"), std::string::npos) << vol;
}

TEST_F(StudyTest, InMemoryTableMatchesStore) {
    run(dir_ / "store");
    StudyStore store(dir_ / "store");
    std::vector<CaseRecord> records;
    for (const auto& e : manifest_.cases) {
        records.push_back(io::load_case(e, manifest_.grid.thicknessesMm));
    }
    const auto table = compute_sample_table(records, manifest_.grid, manifest_.analysis, 2);
    const auto fromMemory = compat::compute_study(table, manifest_.analysis.statistics);
    EXPECT_EQ(fromMemory.cells, store.read_cells().cells);
}
