#include "radcompat/core/error.hpp"
#include "radcompat/io/file.hpp"
#include "radcompat/io/nrrd.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <random>

using namespace radcompat;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
    auto p = fs::temp_directory_path() / ("radcompat_nrrd_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string int16_file(const std::string& extraHeader = "", std::size_t payloadValues = 8) {
    std::string s = "NRRD0004\n# comment\ntype: int16\ndimension: 3\nsizes: 2 2 2\nspacings: 1 1 1\n"
                    "encoding: raw\nendian: little\n" +
                    extraHeader + "\n";
    for (std::int16_t i = 0; i < static_cast<std::int16_t>(payloadValues); ++i) {
        char b[2];
        std::memcpy(b, &i, 2);
        s.append(b, 2);
    }
    return s;
}

} // namespace

TEST(Nrrd, DecodesInt16RowMajor) {
    const auto img = io::parse_nrrd(int16_file());
    EXPECT_EQ(img.type, io::NrrdType::Int16);
    const ScalarVolume v(img.dims, img.spacing, img.values);
    EXPECT_EQ(v.at(1, 1, 1), 7.0f);
    EXPECT_EQ(v.at(1, 0, 0), 1.0f);
    EXPECT_EQ(v.at(0, 0, 1), 4.0f);
}

TEST(Nrrd, GzipEncodingIsRejectedWithTheLine) {
    std::string s = int16_file();
    s.replace(s.find("encoding: raw"), 13, "encoding: gzip");
    try {
        (void)io::parse_nrrd(s);
        FAIL();
    } catch (const FormatError& e) {
        EXPECT_NE(std::string(e.what()).find("unsupported encoding"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("encoding: gzip"), std::string::npos);
    }
}

TEST(Nrrd, UnknownFieldNamesTheLine) {
    try {
        (void)io::parse_nrrd(int16_file("block size: 4\n"));
        FAIL();
    } catch (const FormatError& e) {
        EXPECT_NE(std::string(e.what()).find("block size: 4"), std::string::npos);
    }
}

TEST(Nrrd, BigEndianAndOtherTypesRejected) {
    std::string s = int16_file();
    s.replace(s.find("endian: little"), 14, "endian: big");
    EXPECT_THROW((void)io::parse_nrrd(s), FormatError);
    s = int16_file();
    s.replace(s.find("type: int16"), 11, "type: double");
    EXPECT_THROW((void)io::parse_nrrd(s), FormatError);
    s = int16_file();
    s.replace(s.find("dimension: 3"), 12, "dimension: 4");
    EXPECT_THROW((void)io::parse_nrrd(s), FormatError);
}

TEST(Nrrd, PayloadSizeMismatchIsTruncation) {
    EXPECT_THROW((void)io::parse_nrrd(int16_file("", 7)), TruncationError);
    EXPECT_THROW((void)io::parse_nrrd(int16_file("", 9)), TruncationError);
}

TEST(Nrrd, DiagonalSpaceDirections) {
    std::string s = int16_file();
    s.replace(s.find("spacings: 1 1 1"), 15, "space: left-posterior-superior\nspace directions: (0.7,0,0) (0,0.7,0) (0,0,2.5)");
    const auto img = io::parse_nrrd(s);
    EXPECT_EQ(img.spacing, (Spacing{0.7, 0.7, 2.5}));
    s.replace(s.find("(0,0.7,0)"), 9, "(0.1,0.7,0)");
    EXPECT_THROW((void)io::parse_nrrd(s), FormatError);
}

TEST(Nrrd, MaskFromUint8) {
    std::string s = "NRRD0004\ntype: uint8\ndimension: 3\nsizes: 3 3 1\nspacings: 1 1 1\nencoding: raw\n\n";
    s += std::string("\1\0\1\0\1\0\0\0\1", 9);
    const auto dir = temp_dir("mask");
    io::write_file_atomic(dir / "m.nrrd", s);
    const auto m = io::read_mask(dir / "m.nrrd");
    EXPECT_EQ(m.mask.count(), 4u);
}

TEST(Nrrd, RoundTripsFloatInt16AndMask) {
    const auto dir = temp_dir("roundtrip");
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<float> u(-1000.0f, 1000.0f);
    std::vector<float> f(3 * 4 * 5);
    std::vector<float> ints(f.size());
    std::vector<std::uint8_t> bits(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        f[i] = u(rng);
        ints[i] = std::floor(u(rng));
        bits[i] = static_cast<std::uint8_t>(rng() & 1);
    }
    const Spacing sp{0.6, 0.7, 1.25};
    const ScalarVolume vf({3, 4, 5}, sp, f);
    const ScalarVolume vi({3, 4, 5}, sp, ints);
    const RoiMask m({3, 4, 5}, bits);
    io::write_nrrd(vf, dir / "f.nrrd");
    io::write_nrrd(vi, dir / "i.nrrd", io::NrrdType::Int16);
    io::write_nrrd(m, sp, dir / "m.nrrd");
    EXPECT_EQ(io::read_volume(dir / "f.nrrd"), vf);
    EXPECT_EQ(io::read_volume(dir / "i.nrrd"), vi);
    EXPECT_EQ(io::read_nrrd(dir / "i.nrrd").type, io::NrrdType::Int16);
    const auto back = io::read_mask(dir / "m.nrrd");
    EXPECT_EQ(back.mask, m);
    EXPECT_EQ(back.spacing, sp);
}

TEST(Nrrd, Int16RejectsFractionalValues) {
    const ScalarVolume v({1, 1, 2}, {}, {1.5f, 2.0f});
    EXPECT_THROW((void)io::encode_nrrd(v, io::NrrdType::Int16), ValidationError);
}

TEST(Nrrd, MissingFileIsIoErrorWithPath) {
    try {
        (void)io::read_volume("/nonexistent/x.nrrd");
        FAIL();
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find("/nonexistent/x.nrrd"), std::string::npos);
    }
}
