#pragma once

#include "radcompat/core/volume.hpp"

#include <map>
#include <string>

namespace radcompat {

/// One examination: the native-resolution image plus its thickness-specific ROI stacks.
struct CaseRecord {
    std::string caseId;
    ScalarVolume baseVolume;
    RoiMask baseMask;
    std::map<double, RoiMask> baseMasksByThickness;
};

} // namespace radcompat
