#include "radcompat/report/store.hpp"

#include "radcompat/core/error.hpp"
#include "radcompat/io/file.hpp"
#include "radcompat/io/serialize.hpp"

#include <cstdio>
#include <map>
#include <sstream>

namespace radcompat::report {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json parse_json_file(const fs::path& path) {
    const auto text = io::read_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(path.string() + ": corrupt JSON: " + e.what());
    }
}

} // namespace

StudyStore::StudyStore(fs::path root) : root_(std::move(root)) {}

fs::path StudyStore::sample_path(const std::string& caseId, const ReconCondition& c) const {
    return root_ / "samples" / caseId / (condition_label(c) + ".json");
}

bool StudyStore::has_metadata() const {
    return fs::exists(metadata_path());
}

json StudyStore::read_metadata() const {
    auto j = parse_json_file(metadata_path());
    if (!j.is_object() || !j.contains("config") || !j.contains("version")) {
        throw FormatError(metadata_path().string() + ": not a study metadata file");
    }
    return j;
}

void StudyStore::write_metadata(const json& metadata) const {
    io::write_file_atomic(metadata_path(), io::dump(metadata));
}

void StudyStore::write_timestamps(const json& timestamps) const {
    io::write_file_atomic(timestamps_path(), io::dump(timestamps));
}

bool StudyStore::has_sample(const std::string& caseId, const ReconCondition& c) const {
    return fs::exists(sample_path(caseId, c));
}

void StudyStore::write_sample(const features::FeatureSample& s) const {
    io::write_file_atomic(sample_path(s.caseId, s.condition), io::dump(io::sample_to_json(s)));
}

features::FeatureSample StudyStore::read_sample(const std::string& caseId, const ReconCondition& c) const {
    const auto path = sample_path(caseId, c);
    features::FeatureSample s;
    try {
        s = io::sample_from_json(parse_json_file(path));
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    if (s.caseId != caseId || !(s.condition == c)) {
        throw FormatError(path.string() + ": record belongs to another case or condition");
    }
    return s;
}

void StudyStore::write_volumes(const std::vector<volumetry::VolumeSeries>& series) const {
    std::string out = "caseId,thicknessMm,volumeMm3\n";
    char buf[64];
    for (const auto& s : series) {
        for (const auto& [t, v] : s.volumes) {
            std::snprintf(buf, sizeof buf, ",%.17g,%.17g\n", t, v);
            out += s.caseId + buf;
        }
    }
    io::write_file_atomic(volumes_path(), out);
}

std::vector<volumetry::VolumeSeries> StudyStore::read_volumes() const {
    std::istringstream in(io::read_file(volumes_path()));
    std::string line;
    std::getline(in, line);
    if (line != "caseId,thicknessMm,volumeMm3") {
        throw FormatError(volumes_path().string() + ": unexpected header");
    }
    std::vector<volumetry::VolumeSeries> series;
    std::size_t lineNo = 1;
    while (std::getline(in, line)) {
        ++lineNo;
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string::npos) {
            throw FormatError(volumes_path().string() + ": line " + std::to_string(lineNo) + " is malformed");
        }
        const auto id = line.substr(0, c1);
        double t = 0.0;
        double v = 0.0;
        try {
            t = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
            v = std::stod(line.substr(c2 + 1));
        } catch (const std::exception&) {
            throw FormatError(volumes_path().string() + ": line " + std::to_string(lineNo) + " is malformed");
        }
        if (series.empty() || series.back().caseId != id) {
            series.push_back({id, {}});
        }
        series.back().volumes[t] = v;
    }
    return series;
}

void StudyStore::write_cells(const compat::StudyResults& results) const {
    io::write_file_atomic(cells_path(), io::study_to_json(results).dump() + "\n");
}

bool StudyStore::has_cells() const {
    return fs::exists(cells_path());
}

compat::StudyResults StudyStore::read_cells() const {
    try {
        return io::study_from_json(parse_json_file(cells_path()));
    } catch (const FormatError& e) {
        throw FormatError(cells_path().string() + ": " + e.what());
    }
}

void StudyStore::clear_results() const {
    std::error_code ec;
    fs::remove_all(root_ / "samples", ec);
    fs::remove(volumes_path(), ec);
    fs::remove(cells_path(), ec);
}

} // namespace radcompat::report
