#include "radcompat/io/nrrd.hpp"

#include "radcompat/core/error.hpp"
#include "radcompat/io/file.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <optional>
#include <sstream>
#include <string>

namespace radcompat::io {

namespace {

static_assert(std::endian::native == std::endian::little, "raw payloads are decoded in host order");

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_line(std::size_t lineNo, const std::string& line, const std::string& what) {
    throw FormatError("NRRD line " + std::to_string(lineNo) + " \"" + line + "\": " + what);
}

std::vector<double> parse_numbers(const std::string& text, std::size_t lineNo, const std::string& line) {
    std::istringstream in(text);
    std::vector<double> out;
    std::string token;
    while (in >> token) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception&) {
            bad_line(lineNo, line, "not a number: " + token);
        }
        if (used != token.size()) {
            bad_line(lineNo, line, "not a number: " + token);
        }
        out.push_back(v);
    }
    return out;
}

/// "(a,b,c) (d,e,f) (g,h,i)" -> diagonal, rejecting off-diagonal terms.
Spacing parse_directions(const std::string& text, std::size_t lineNo, const std::string& line) {
    std::vector<double> values;
    std::string cleaned;
    for (char ch : text) {
        cleaned += (ch == '(' || ch == ')' || ch == ',') ? ' ' : ch;
    }
    values = parse_numbers(cleaned, lineNo, line);
    if (values.size() != 9) {
        bad_line(lineNo, line, "expected three 3-vectors");
    }
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            if (r != c && values[r * 3 + c] != 0.0) {
                bad_line(lineNo, line, "only diagonal space directions are supported");
            }
        }
    }
    return {std::fabs(values[0]), std::fabs(values[4]), std::fabs(values[8])};
}

std::optional<NrrdType> parse_type(const std::string& t) {
    if (t == "int16" || t == "short" || t == "short int" || t == "signed short" || t == "int16_t") {
        return NrrdType::Int16;
    }
    if (t == "uint8" || t == "uchar" || t == "unsigned char" || t == "uint8_t") {
        return NrrdType::UInt8;
    }
    if (t == "float" || t == "float32") {
        return NrrdType::Float32;
    }
    return std::nullopt;
}

std::size_t type_size(NrrdType t) {
    switch (t) {
    case NrrdType::Int16:
        return 2;
    case NrrdType::UInt8:
        return 1;
    case NrrdType::Float32:
        return 4;
    }
    return 0;
}

const char* type_name(NrrdType t) {
    switch (t) {
    case NrrdType::Int16:
        return "int16";
    case NrrdType::UInt8:
        return "uint8";
    case NrrdType::Float32:
        return "float";
    }
    return "";
}

std::string header(NrrdType type, const Dims& d, const Spacing& s) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "NRRD0004\ntype: %s\ndimension: 3\nsizes: %zu %zu %zu\nspacings: %.17g %.17g %.17g\n"
                  "encoding: raw\nendian: little\n\n",
                  type_name(type), d.nx, d.ny, d.nz, s.sx, s.sy, s.sz);
    return buf;
}

} // namespace

NrrdImage parse_nrrd(std::string_view bytes) {
    std::size_t pos = 0;
    std::size_t lineNo = 0;
    const auto next_line = [&]() -> std::optional<std::string> {
        if (pos >= bytes.size()) {
            return std::nullopt;
        }
        auto end = bytes.find('\n', pos);
        if (end == std::string_view::npos) {
            end = bytes.size();
        }
        std::string line(bytes.substr(pos, end - pos));
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        pos = end + 1;
        ++lineNo;
        return line;
    };

    const auto magic = next_line();
    if (!magic || magic->rfind("NRRD000", 0) != 0) {
        throw FormatError("NRRD line 1: missing NRRD magic");
    }

    std::optional<NrrdType> type;
    std::optional<Dims> dims;
    std::optional<Spacing> spacing;
    bool sawEncoding = false;
    bool sawEndian = false;
    bool sawDimension = false;
    bool endOfHeader = false;
    while (auto line = next_line()) {
        if (line->empty()) {
            endOfHeader = true;
            break;
        }
        if ((*line)[0] == '#') {
            continue;
        }
        const auto colon = line->find(':');
        if (colon == std::string::npos) {
            bad_line(lineNo, *line, "not a field");
        }
        const std::string key = trim(std::string_view(*line).substr(0, colon));
        std::string value = trim(std::string_view(*line).substr(colon + 1));
        if (!value.empty() && value[0] == '=') {
            continue; // key/value pair, ignored
        }
        if (key == "dimension") {
            if (value != "3") {
                bad_line(lineNo, *line, "unsupported dimension");
            }
            sawDimension = true;
        } else if (key == "type") {
            type = parse_type(value);
            if (!type) {
                bad_line(lineNo, *line, "unsupported type");
            }
        } else if (key == "encoding") {
            if (value != "raw") {
                bad_line(lineNo, *line, "unsupported encoding");
            }
            sawEncoding = true;
        } else if (key == "endian") {
            if (value != "little") {
                bad_line(lineNo, *line, "unsupported endian");
            }
            sawEndian = true;
        } else if (key == "sizes") {
            const auto n = parse_numbers(value, lineNo, *line);
            if (n.size() != 3) {
                bad_line(lineNo, *line, "expected three sizes");
            }
            for (double v : n) {
                if (v < 1 || v != std::floor(v)) {
                    bad_line(lineNo, *line, "sizes must be positive integers");
                }
            }
            dims = Dims{static_cast<std::size_t>(n[0]), static_cast<std::size_t>(n[1]),
                        static_cast<std::size_t>(n[2])};
        } else if (key == "spacings") {
            const auto n = parse_numbers(value, lineNo, *line);
            if (n.size() != 3) {
                bad_line(lineNo, *line, "expected three spacings");
            }
            spacing = Spacing{n[0], n[1], n[2]};
        } else if (key == "space directions") {
            spacing = parse_directions(value, lineNo, *line);
        } else if (key == "space" || key == "space origin" || key == "kinds" || key == "content" ||
                   key == "space units") {
            continue;
        } else {
            bad_line(lineNo, *line, "unsupported field");
        }
    }
    if (!endOfHeader) {
        throw FormatError("NRRD header is not terminated by a blank line");
    }
    if (!sawDimension || !type || !dims || !spacing || !sawEncoding) {
        throw FormatError("NRRD header lacks one of dimension, type, sizes, spacings, encoding");
    }
    if (!sawEndian && *type != NrrdType::UInt8) {
        throw FormatError("NRRD header lacks endian for a multi-byte type");
    }
    if (!(spacing->sx > 0 && spacing->sy > 0 && spacing->sz > 0)) {
        throw FormatError("NRRD spacing must be positive");
    }

    const auto payload = bytes.substr(std::min(pos, bytes.size()));
    const auto count = dims->count();
    const auto expected = count * type_size(*type);
    if (payload.size() != expected) {
        throw TruncationError("NRRD payload is " + std::to_string(payload.size()) + " bytes, header implies " +
                              std::to_string(expected));
    }
    NrrdImage image{*dims, *spacing, *type, std::vector<float>(count)};
    for (std::size_t i = 0; i < count; ++i) {
        switch (*type) {
        case NrrdType::Int16: {
            std::int16_t v;
            std::memcpy(&v, payload.data() + 2 * i, 2);
            image.values[i] = static_cast<float>(v);
            break;
        }
        case NrrdType::UInt8:
            image.values[i] = static_cast<float>(static_cast<std::uint8_t>(payload[i]));
            break;
        case NrrdType::Float32: {
            float v;
            std::memcpy(&v, payload.data() + 4 * i, 4);
            image.values[i] = v;
            break;
        }
        }
    }
    return image;
}

NrrdImage read_nrrd(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    try {
        return parse_nrrd(bytes);
    } catch (const TruncationError& e) {
        throw TruncationError(path.string() + ": " + e.what());
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

ScalarVolume read_volume(const std::filesystem::path& path) {
    auto image = read_nrrd(path);
    try {
        return ScalarVolume(image.dims, image.spacing, std::move(image.values));
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

MaskImage read_mask(const std::filesystem::path& path) {
    const auto image = read_nrrd(path);
    if (image.type != NrrdType::UInt8) {
        throw FormatError(path.string() + ": masks must be uint8");
    }
    std::vector<std::uint8_t> bits(image.values.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (image.values[i] != 0.0f && image.values[i] != 1.0f) {
            throw FormatError(path.string() + ": mask values must be 0 or 1");
        }
        bits[i] = static_cast<std::uint8_t>(image.values[i]);
    }
    return {RoiMask(image.dims, std::move(bits)), image.spacing};
}

std::string encode_nrrd(const ScalarVolume& v, NrrdType type) {
    std::string out = header(type, v.dims(), v.spacing());
    const auto voxels = v.voxels();
    out.reserve(out.size() + voxels.size() * type_size(type));
    for (float x : voxels) {
        switch (type) {
        case NrrdType::Float32: {
            char b[4];
            std::memcpy(b, &x, 4);
            out.append(b, 4);
            break;
        }
        case NrrdType::Int16: {
            if (x != std::floor(x) || x < -32768.0f || x > 32767.0f) {
                throw ValidationError("intensity " + std::to_string(x) + " is not representable as int16");
            }
            const auto s = static_cast<std::int16_t>(x);
            char b[2];
            std::memcpy(b, &s, 2);
            out.append(b, 2);
            break;
        }
        case NrrdType::UInt8:
            if (x != std::floor(x) || x < 0.0f || x > 255.0f) {
                throw ValidationError("intensity " + std::to_string(x) + " is not representable as uint8");
            }
            out.push_back(static_cast<char>(static_cast<std::uint8_t>(x)));
            break;
        }
    }
    return out;
}

std::string encode_nrrd(const RoiMask& m, const Spacing& spacing) {
    std::string out = header(NrrdType::UInt8, m.dims(), spacing);
    const auto bits = m.bits();
    out.append(reinterpret_cast<const char*>(bits.data()), bits.size());
    return out;
}

void write_nrrd(const ScalarVolume& v, const std::filesystem::path& path, NrrdType type) {
    write_file_atomic(path, encode_nrrd(v, type));
}

void write_nrrd(const RoiMask& m, const Spacing& spacing, const std::filesystem::path& path) {
    write_file_atomic(path, encode_nrrd(m, spacing));
}

} // namespace radcompat::io
