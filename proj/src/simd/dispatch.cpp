#include "radcompat/core/error.hpp"
#include "radcompat/simd/kernels.hpp"

#include <cstdlib>
#include <string>

namespace radcompat::simd {

bool cpu_has_avx2(); // kernels_avx2.cpp

std::string_view isa_name(Isa isa) {
    switch (isa) {
    case Isa::Scalar:
        return "scalar";
    case Isa::Avx2:
        return "avx2";
    }
    return "unknown";
}

bool cpu_supports(Isa isa) {
    switch (isa) {
    case Isa::Scalar:
        return true;
    case Isa::Avx2:
        return avx2_kernels() != nullptr && cpu_has_avx2();
    }
    return false;
}

const KernelTable& kernels_for(Isa isa) {
    if (!cpu_supports(isa)) {
        throw DomainError(std::string("SIMD variant '") + std::string(isa_name(isa)) +
                          "' unavailable on this CPU or build");
    }
    return isa == Isa::Avx2 ? *avx2_kernels() : scalar_kernels();
}

const KernelTable& kernels() {
    static const KernelTable& active = [] () -> const KernelTable& {
        const char* forced = std::getenv("RADCOMPAT_SIMD");
        if (forced != nullptr && std::string(forced) == "scalar") {
            return scalar_kernels();
        }
        return cpu_supports(Isa::Avx2) ? *avx2_kernels() : scalar_kernels();
    }();
    return active;
}

} // namespace radcompat::simd
