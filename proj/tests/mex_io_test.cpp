#include "fibpart/mex_io.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <random>

using namespace fibpart;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = fs::temp_directory_path() / ("fibpart_io_" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary | std::ios::trunc) << s; }

}  // namespace

TEST(Checksum, KnownValues) {
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(checksum_string(""), "fnv1a64:cbf29ce484222325");
}

TEST(RowFiles, RoundTrip) {
    TempDir dir;
    const auto m = generate(19, 20);
    save_rows(m, dir.path());
    EXPECT_EQ(load_rows(dir.path()), m);
    const auto header = nlohmann::json::parse(slurp(dir.path() / "row_3.json"));
    EXPECT_EQ(header["format"], "mexrow/1");
    EXPECT_EQ(header["row"], 3);
    EXPECT_EQ(header["count"], 20);
    EXPECT_EQ(fs::file_size(dir.path() / "row_3.bin"), 160u);
}

TEST(RowFiles, PayloadIsLittleEndian) {
    TempDir dir;
    save_rows(generate(2, 4), dir.path());
    const std::string bytes = slurp(dir.path() / "row_2.bin");
    ASSERT_EQ(bytes.size(), 32u);
    // row 2 is 0, 2, 1, 5
    EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 2);
    EXPECT_EQ(static_cast<unsigned char>(bytes[24]), 5);
    for (int k : {1, 2, 7, 9, 15}) EXPECT_EQ(bytes[k], 0);
}

TEST(RowFiles, ResumeFromDisk) {
    TempDir dir;
    save_rows(generate(4, 500), dir.path());
    auto m = load_rows(dir.path());
    m.generate_to(m.rows(), 1000);
    EXPECT_EQ(m, generate(4, 1000));
    save_rows(m, dir.path());
    EXPECT_EQ(load_rows(dir.path()).cols(), 1000u);
}

TEST(RowFiles, TruncatedPayloadRejected) {
    TempDir dir;
    save_rows(generate(3, 50), dir.path());
    const auto bin = dir.path() / "row_2.bin";
    spit(bin, slurp(bin).substr(0, 100));
    EXPECT_THROW(load_rows(dir.path()), ChecksumMismatch);
}

TEST(RowFiles, FlippedByteRejected) {
    TempDir dir;
    save_rows(generate(3, 50), dir.path());
    const auto bin = dir.path() / "row_1.bin";
    auto bytes = slurp(bin);
    bytes[17] ^= 1;
    spit(bin, bytes);
    EXPECT_THROW(load_row(dir.path(), 1), ChecksumMismatch);
}

TEST(RowFiles, VersionMismatchRejected) {
    TempDir dir;
    save_rows(generate(2, 10), dir.path());
    auto header = nlohmann::json::parse(slurp(dir.path() / "row_0.json"));
    header["format"] = "mexrow/2";
    spit(dir.path() / "row_0.json", header.dump());
    EXPECT_THROW(load_rows(dir.path()), VersionMismatch);
}

TEST(RowFiles, CountMismatchRejected) {
    TempDir dir;
    save_rows(generate(2, 10), dir.path());
    auto header = nlohmann::json::parse(slurp(dir.path() / "row_1.json"));
    header["count"] = 11;
    spit(dir.path() / "row_1.json", header.dump());
    EXPECT_THROW(load_row(dir.path(), 1), RowFileError);
    spit(dir.path() / "row_1.json", "{not json");
    EXPECT_THROW(load_row(dir.path(), 1), RowFileError);
}

TEST(RowFiles, EmptyDirectory) {
    TempDir dir;
    EXPECT_THROW(load_rows(dir.path()), RowFileError);
}

TEST(PlotData, ExportAndImport) {
    TempDir dir;
    const auto m = generate(3, 20);
    const auto path = dir.path() / "row2.csv";
    export_plot_data(m, 2, path);
    std::ifstream in(path);
    const auto back = import_row_csv(in);
    const std::vector<std::int64_t> want(m.row(2).begin(), m.row(2).end());
    EXPECT_EQ(back, want);
    EXPECT_EQ(std::vector<std::int64_t>(back.begin(), back.begin() + 6), (std::vector<std::int64_t>{0, 2, 1, 5, 7, 3}));

    export_plot_data(m, 0, path);
    std::ifstream in0(path);
    for (auto v : import_row_csv(in0)) EXPECT_EQ(v, 0);
}

TEST(PlotData, MalformedCsv) {
    std::istringstream no_header("0,0\n");
    EXPECT_THROW(import_row_csv(no_header), std::invalid_argument);
    std::istringstream gap("j,q\n0,0\n2,1\n");
    EXPECT_THROW(import_row_csv(gap), std::invalid_argument);
}
