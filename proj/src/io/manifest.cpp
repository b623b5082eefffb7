#include "radcompat/io/manifest.hpp"

#include "radcompat/core/error.hpp"
#include "radcompat/io/file.hpp"
#include "radcompat/io/nrrd.hpp"

#include <cmath>
#include <set>

namespace radcompat::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// A JSON node plus its pointer, for error messages.
struct Node {
    const json& value;
    std::string pointer;

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError((pointer.empty() ? std::string("/") : pointer) + ": " + what);
    }

    Node child(const std::string& key) const { return {value.at(key), pointer + "/" + key}; }
    Node element(std::size_t i) const { return {value.at(i), pointer + "/" + std::to_string(i)}; }

    const json& object(std::initializer_list<const char*> allowed) const {
        if (!value.is_object()) {
            fail("expected an object");
        }
        for (const auto& item : value.items()) {
            bool known = false;
            for (const char* k : allowed) {
                known = known || item.key() == k;
            }
            if (!known) {
                throw ConfigError(pointer + "/" + item.key() + ": unknown key");
            }
        }
        return value;
    }

    bool has(const char* key) const { return value.contains(key); }

    std::string string() const {
        if (!value.is_string()) {
            fail("expected a string");
        }
        return value.get<std::string>();
    }

    double number() const {
        if (!value.is_number()) {
            fail("expected a number");
        }
        const double v = value.get<double>();
        if (!std::isfinite(v)) {
            fail("expected a finite number");
        }
        return v;
    }

    std::uint64_t unsigned_integer() const {
        // Documents built in memory hold nonnegative ints as signed.
        if (!value.is_number_integer() || (!value.is_number_unsigned() && value.get<std::int64_t>() < 0)) {
            fail("expected a nonnegative integer");
        }
        return value.get<std::uint64_t>();
    }

    const json& array() const {
        if (!value.is_array()) {
            fail("expected an array");
        }
        return value;
    }
};

fs::path resolve(const fs::path& baseDir, const std::string& text) {
    fs::path p(text);
    return p.is_absolute() ? p.lexically_normal() : (baseDir / p).lexically_normal();
}

void check_exists(const Node& node, const fs::path& p, bool checkPaths) {
    if (checkPaths && !fs::exists(p)) {
        node.fail("file not found: " + p.string());
    }
}

Spacing parse_spacing(const Node& node) {
    const auto& a = node.array();
    if (a.size() != 3) {
        node.fail("expected three spacings");
    }
    Spacing s{node.element(0).number(), node.element(1).number(), node.element(2).number()};
    if (!(s.sx > 0 && s.sy > 0 && s.sz > 0)) {
        node.fail("spacings must be positive");
    }
    return s;
}

CaseEntry parse_case(const Node& node, const fs::path& baseDir, bool checkPaths) {
    node.object({"caseId", "volumePath", "maskPath", "maskPathsByThickness", "spacingOverride"});
    CaseEntry c;
    for (const char* key : {"caseId", "volumePath", "maskPath"}) {
        if (!node.has(key)) {
            node.fail(std::string("missing required key ") + key);
        }
    }
    c.caseId = node.child("caseId").string();
    if (c.caseId.empty() || c.caseId.find_first_of("/\\") != std::string::npos || c.caseId == "." ||
        c.caseId == "..") {
        node.child("caseId").fail("caseId must be a nonempty file-name-safe string");
    }
    const auto vol = node.child("volumePath");
    c.volumePath = resolve(baseDir, vol.string());
    check_exists(vol, c.volumePath, checkPaths);
    const auto mask = node.child("maskPath");
    c.maskPath = resolve(baseDir, mask.string());
    check_exists(mask, c.maskPath, checkPaths);
    if (node.has("spacingOverride")) {
        c.spacingOverride = parse_spacing(node.child("spacingOverride"));
    }
    return c;
}

features::DirectionMode parse_direction_mode(const Node& node) {
    const auto s = node.string();
    if (s == "2d-per-slice") {
        return features::DirectionMode::PerSlice2D;
    }
    if (s == "3d-whole-roi") {
        return features::DirectionMode::WholeRoi3D;
    }
    node.fail("expected \"2d-per-slice\" or \"3d-whole-roi\"");
}

} // namespace

std::string direction_mode_name(features::DirectionMode mode) {
    return mode == features::DirectionMode::PerSlice2D ? "2d-per-slice" : "3d-whole-roi";
}

std::string p_value_mode_name(volumetry::PValueMode mode) {
    return mode == volumetry::PValueMode::Normal ? "normal" : "student";
}

std::string ordering_name(compat::Ordering ordering) {
    return ordering == compat::Ordering::Canonical ? "canonical" : "total-compatibility";
}

StudyManifest parse_manifest(const json& doc, const fs::path& baseDir, bool checkPaths) {
    const Node root{doc, ""};
    root.object({"studyId", "cases", "grid", "analysis"});
    StudyManifest m;
    if (!root.has("studyId")) {
        root.fail("missing required key studyId");
    }
    m.studyId = root.child("studyId").string();
    if (!root.has("cases")) {
        root.fail("missing required key cases");
    }
    const auto cases = root.child("cases");
    if (cases.array().empty()) {
        cases.fail("at least one case is required");
    }
    std::set<std::string> ids;
    for (std::size_t i = 0; i < cases.value.size(); ++i) {
        const auto node = cases.element(i);
        auto entry = parse_case(node, baseDir, checkPaths);
        if (node.has("maskPathsByThickness")) {
            const auto byT = node.child("maskPathsByThickness");
            if (!byT.value.is_object()) {
                byT.fail("expected an object");
            }
            for (const auto& item : byT.value.items()) {
                const Node p{item.value(), byT.pointer + "/" + item.key()};
                double t = 0.0;
                std::size_t used = 0;
                try {
                    t = std::stod(item.key(), &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used != item.key().size() || !(t > 0) || !std::isfinite(t)) {
                    p.fail("key must be a positive thickness in mm");
                }
                entry.maskPathsByThickness[t] = resolve(baseDir, p.string());
                check_exists(p, entry.maskPathsByThickness[t], checkPaths);
            }
        }
        if (!ids.insert(entry.caseId).second) {
            throw ValidationError(node.pointer + "/caseId: duplicate caseId \"" + entry.caseId + "\"");
        }
        m.cases.push_back(std::move(entry));
    }

    if (root.has("grid")) {
        const auto grid = root.child("grid");
        grid.object({"doses", "kernels", "thicknessesMm"});
        if (grid.has("doses")) {
            const auto n = grid.child("doses");
            m.grid.doses.clear();
            for (std::size_t i = 0; i < n.array().size(); ++i) {
                m.grid.doses.push_back(n.element(i).number());
            }
        }
        if (grid.has("kernels")) {
            const auto n = grid.child("kernels");
            m.grid.kernels.clear();
            for (std::size_t i = 0; i < n.array().size(); ++i) {
                const auto e = n.element(i);
                try {
                    m.grid.kernels.push_back(kernel_index(e.string()));
                } catch (const ConfigError& err) {
                    e.fail(err.what());
                }
            }
        }
        if (grid.has("thicknessesMm")) {
            const auto n = grid.child("thicknessesMm");
            m.grid.thicknessesMm.clear();
            for (std::size_t i = 0; i < n.array().size(); ++i) {
                m.grid.thicknessesMm.push_back(n.element(i).number());
            }
        }
        try {
            m.grid.validate();
        } catch (const ConfigError& err) {
            grid.fail(err.what());
        }
    }

    if (root.has("analysis")) {
        const auto analysis = root.child("analysis");
        analysis.object({"features", "statistics", "simulator", "ordering"});
        if (analysis.has("features")) {
            const auto f = analysis.child("features");
            f.object({"ng", "minSliceVoxels", "logBase", "directionMode"});
            auto& cfg = m.analysis.features;
            if (f.has("ng")) {
                const auto v = f.child("ng").unsigned_integer();
                if (v < 2 || v > 4096) {
                    f.child("ng").fail("ng must be in [2, 4096]");
                }
                cfg.ng = static_cast<int>(v);
            }
            if (f.has("minSliceVoxels")) {
                cfg.minSliceVoxels = f.child("minSliceVoxels").unsigned_integer();
            }
            if (f.has("logBase") && f.child("logBase").number() != 2.0) {
                f.child("logBase").fail("only base 2 is supported");
            }
            if (f.has("directionMode")) {
                cfg.directionMode = parse_direction_mode(f.child("directionMode"));
            }
            try {
                cfg.validate();
            } catch (const ConfigError& err) {
                f.fail(err.what());
            }
        }
        if (analysis.has("statistics")) {
            const auto s = analysis.child("statistics");
            s.object({"tThreshold", "pValue"});
            if (s.has("tThreshold")) {
                const double t = s.child("tThreshold").number();
                if (!(t > 0)) {
                    s.child("tThreshold").fail("must be > 0");
                }
                m.analysis.statistics.tThreshold = t;
            }
            if (s.has("pValue")) {
                const auto p = s.child("pValue");
                const auto v = p.string();
                if (v == "normal") {
                    m.analysis.statistics.pValueMode = volumetry::PValueMode::Normal;
                } else if (v == "student") {
                    m.analysis.statistics.pValueMode = volumetry::PValueMode::Student;
                } else {
                    p.fail("expected \"normal\" or \"student\"");
                }
            }
        }
        if (analysis.has("simulator")) {
            const auto s = analysis.child("simulator");
            s.object({"refNoiseHU", "kernelKappa", "blurSigmaMaxMm", "unsharpAmountMax", "unsharpSigmaMm", "seed"});
            auto& cfg = m.analysis.simulator;
            if (s.has("refNoiseHU")) {
                cfg.refNoiseHU = s.child("refNoiseHU").number();
            }
            if (s.has("kernelKappa")) {
                const auto k = s.child("kernelKappa");
                if (k.array().size() != cfg.kernelKappa.size()) {
                    k.fail("expected 10 values");
                }
                for (std::size_t i = 0; i < cfg.kernelKappa.size(); ++i) {
                    cfg.kernelKappa[i] = k.element(i).number();
                }
            }
            if (s.has("blurSigmaMaxMm")) {
                cfg.blurSigmaMaxMm = s.child("blurSigmaMaxMm").number();
            }
            if (s.has("unsharpAmountMax")) {
                cfg.unsharpAmountMax = s.child("unsharpAmountMax").number();
            }
            if (s.has("unsharpSigmaMm")) {
                cfg.unsharpSigmaMm = s.child("unsharpSigmaMm").number();
            }
            if (s.has("seed")) {
                cfg.seed = s.child("seed").unsigned_integer();
            }
            try {
                cfg.validate();
            } catch (const ConfigError& err) {
                s.fail(err.what());
            }
        }
        if (analysis.has("ordering")) {
            const auto o = analysis.child("ordering");
            const auto v = o.string();
            if (v == "canonical") {
                m.analysis.ordering = compat::Ordering::Canonical;
            } else if (v == "total-compatibility") {
                m.analysis.ordering = compat::Ordering::ByTotalCompatibility;
            } else {
                o.fail("expected \"canonical\" or \"total-compatibility\"");
            }
        }
    }
    return m;
}

StudyManifest load_manifest(const fs::path& path) {
    const auto text = read_file(path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": invalid JSON: " + e.what());
    }
    const auto base = fs::absolute(path).parent_path();
    return parse_manifest(doc, base);
}

json manifest_to_json(const StudyManifest& m) {
    json doc;
    doc["studyId"] = m.studyId;
    doc["cases"] = json::array();
    for (const auto& c : m.cases) {
        json e;
        e["caseId"] = c.caseId;
        e["volumePath"] = c.volumePath.generic_string();
        e["maskPath"] = c.maskPath.generic_string();
        if (!c.maskPathsByThickness.empty()) {
            json byT = json::object();
            for (const auto& [t, p] : c.maskPathsByThickness) {
                byT[format_minimal(t)] = p.generic_string();
            }
            e["maskPathsByThickness"] = byT;
        }
        if (c.spacingOverride) {
            e["spacingOverride"] = {c.spacingOverride->sx, c.spacingOverride->sy, c.spacingOverride->sz};
        }
        doc["cases"].push_back(e);
    }
    json kernels = json::array();
    for (int k : m.grid.kernels) {
        kernels.push_back(std::string(kernel_name(k)));
    }
    doc["grid"] = {{"doses", m.grid.doses}, {"kernels", kernels}, {"thicknessesMm", m.grid.thicknessesMm}};
    const auto& a = m.analysis;
    doc["analysis"] = {
        {"features",
         {{"ng", a.features.ng},
          {"minSliceVoxels", a.features.minSliceVoxels},
          {"logBase", 2},
          {"directionMode", direction_mode_name(a.features.directionMode)}}},
        {"statistics", {{"tThreshold", a.statistics.tThreshold}, {"pValue", p_value_mode_name(a.statistics.pValueMode)}}},
        {"simulator",
         {{"refNoiseHU", a.simulator.refNoiseHU},
          {"kernelKappa", a.simulator.kernelKappa},
          {"blurSigmaMaxMm", a.simulator.blurSigmaMaxMm},
          {"unsharpAmountMax", a.simulator.unsharpAmountMax},
          {"unsharpSigmaMm", a.simulator.unsharpSigmaMm},
          {"seed", a.simulator.seed}}},
        {"ordering", ordering_name(a.ordering)}};
    return doc;
}

CaseRecord load_case(const CaseEntry& entry, const std::vector<double>& thicknessesMm) {
    auto volume = read_volume(entry.volumePath);
    auto mask = read_mask(entry.maskPath);
    if (entry.spacingOverride) {
        volume = ScalarVolume(volume.dims(), *entry.spacingOverride,
                              std::vector<float>(volume.voxels().begin(), volume.voxels().end()));
    } else if (!(mask.spacing == volume.spacing())) {
        throw ValidationError(entry.caseId + ": mask spacing differs from volume spacing");
    }
    check_congruent(volume, mask.mask);
    std::vector<double> derived;
    for (double t : thicknessesMm) {
        if (!entry.maskPathsByThickness.contains(t)) {
            derived.push_back(t);
        }
    }
    auto record = sim::make_case_record(entry.caseId, std::move(volume), std::move(mask.mask), derived);
    for (const auto& [t, path] : entry.maskPathsByThickness) {
        record.baseMasksByThickness[t] = read_mask(path).mask;
    }
    return record;
}

} // namespace radcompat::io
