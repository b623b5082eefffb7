#include "radcompat/io/serialize.hpp"

#include "radcompat/core/error.hpp"

#include <cmath>
#include <limits>

namespace radcompat::io {

using nlohmann::json;

namespace {

json number(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

double read_number(const json& j) {
    if (j.is_null()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    if (!j.is_number()) {
        throw FormatError("expected a number, got " + j.dump());
    }
    return j.get<double>();
}

json vector_to_json(const features::FeatureVector& v) {
    json a = json::array();
    for (double x : v) {
        a.push_back(number(x));
    }
    return a;
}

features::FeatureVector vector_from_json(const json& j) {
    if (!j.is_array() || j.size() != features::kFeatureCount) {
        throw FormatError("feature vector must have " + std::to_string(features::kFeatureCount) + " entries");
    }
    features::FeatureVector v{};
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = read_number(j[i]);
    }
    return v;
}

template <typename F>
auto guarded(const char* what, F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw FormatError(std::string(what) + ": " + e.what());
    }
}

} // namespace

json condition_to_json(const ReconCondition& c) {
    return {{"label", condition_label(c)},
            {"doseFraction", c.doseFraction},
            {"kernel", std::string(kernel_name(c.kernelIndex))},
            {"thicknessMm", c.thicknessMm}};
}

ReconCondition condition_from_json(const json& j) {
    return guarded("condition", [&] {
        ReconCondition c;
        c.doseFraction = j.at("doseFraction").get<double>();
        try {
            c.kernelIndex = kernel_index(j.at("kernel").get<std::string>());
        } catch (const ConfigError& e) {
            throw FormatError(e.what());
        }
        c.thicknessMm = j.at("thicknessMm").get<double>();
        return c;
    });
}

json sample_to_json(const features::FeatureSample& s) {
    json j;
    j["caseId"] = s.caseId;
    j["condition"] = condition_to_json(s.condition);
    j["usable"] = s.usable;
    j["reason"] = s.reason;
    j["n"] = s.n();
    j["sliceIndices"] = s.sliceIndices;
    j["mean"] = vector_to_json(s.mean);
    j["sd"] = vector_to_json(s.sd);
    json per = json::array();
    for (const auto& v : s.perSlice) {
        per.push_back(vector_to_json(v));
    }
    j["perSlice"] = per;
    if (s.wholeRoi) {
        j["wholeRoi"] = vector_to_json(*s.wholeRoi);
    }
    return j;
}

features::FeatureSample sample_from_json(const json& j) {
    return guarded("feature sample", [&] {
        features::FeatureSample s;
        s.caseId = j.at("caseId").get<std::string>();
        s.condition = condition_from_json(j.at("condition"));
        s.usable = j.at("usable").get<bool>();
        s.reason = j.at("reason").get<std::string>();
        s.sliceIndices = j.at("sliceIndices").get<std::vector<std::size_t>>();
        s.mean = vector_from_json(j.at("mean"));
        s.sd = vector_from_json(j.at("sd"));
        for (const auto& v : j.at("perSlice")) {
            s.perSlice.push_back(vector_from_json(v));
        }
        if (j.contains("wholeRoi")) {
            s.wholeRoi = vector_from_json(j.at("wholeRoi"));
        }
        if (s.perSlice.size() != s.sliceIndices.size() || j.at("n").get<std::size_t>() != s.n()) {
            throw FormatError("feature sample slice count is inconsistent");
        }
        return s;
    });
}

json study_to_json(const compat::StudyResults& r) {
    json j;
    json conditions = json::array();
    for (const auto& c : r.conditions) {
        conditions.push_back(condition_to_json(c));
    }
    j["conditions"] = conditions;
    j["caseIds"] = r.caseIds;
    j["featureCount"] = r.featureCount;
    j["comparisons"] = r.comparisons();
    j["usableComparisons"] = r.usable_comparisons();
    json cells = json::array();
    const auto C = r.conditions.size();
    for (std::size_t a = 0; a < C; ++a) {
        for (std::size_t b = a; b < C; ++b) {
            const auto& c = r.at(a, b);
            cells.push_back({a, b, c.compatible, c.total, c.excluded});
        }
    }
    j["cells"] = cells;
    return j;
}

compat::StudyResults study_from_json(const json& j) {
    return guarded("study cells", [&] {
        compat::StudyResults r;
        for (const auto& c : j.at("conditions")) {
            r.conditions.push_back(condition_from_json(c));
        }
        r.caseIds = j.at("caseIds").get<std::vector<std::string>>();
        r.featureCount = j.at("featureCount").get<std::size_t>();
        const auto C = r.conditions.size();
        r.cells.assign(C * C, {});
        std::vector<std::uint8_t> seen(C * C, 0);
        for (const auto& cell : j.at("cells")) {
            const auto a = cell.at(0).get<std::size_t>();
            const auto b = cell.at(1).get<std::size_t>();
            if (a >= C || b >= C) {
                throw FormatError("cell index out of range");
            }
            compat::CompatCounts counts{cell.at(2).get<std::size_t>(), cell.at(3).get<std::size_t>(),
                                        cell.at(4).get<std::size_t>()};
            r.cells[a * C + b] = counts;
            r.cells[b * C + a] = counts;
            seen[a * C + b] = seen[b * C + a] = 1;
        }
        for (auto s : seen) {
            if (!s) {
                throw FormatError("study cells are incomplete");
            }
        }
        return r;
    });
}

std::string dump(const json& j) {
    return j.dump(2) + "\n";
}

} // namespace radcompat::io
