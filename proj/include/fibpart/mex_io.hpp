#pragma once

// On-disk row files: for row i, `row_<i>.json` holds
//   {"format":"mexrow/1","row":i,"count":n,"checksum":"fnv1a64:<hex>"}
// and `row_<i>.bin` holds n little-endian signed 64-bit values.

#include "fibpart/mex_matrix.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fibpart {

inline constexpr const char* kRowFormat = "mexrow/1";

class RowFileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ChecksumMismatch : public RowFileError {
public:
    using RowFileError::RowFileError;
};

class VersionMismatch : public RowFileError {
public:
    using RowFileError::RowFileError;
};

inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string checksum_string(const std::string& bytes) {
    std::ostringstream os;
    os << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(bytes);
    return os.str();
}

namespace detail {

inline std::string encode_le64(std::span<const std::int64_t> values) {
    std::string out(values.size() * 8, '\0');
    for (std::size_t k = 0; k < values.size(); ++k) {
        auto u = static_cast<std::uint64_t>(values[k]);
        for (int b = 0; b < 8; ++b) out[k * 8 + b] = static_cast<char>((u >> (8 * b)) & 0xff);
    }
    return out;
}

inline std::vector<std::int64_t> decode_le64(const std::string& bytes) {
    std::vector<std::int64_t> out(bytes.size() / 8);
    for (std::size_t k = 0; k < out.size(); ++k) {
        std::uint64_t u = 0;
        for (int b = 0; b < 8; ++b) u |= std::uint64_t{static_cast<unsigned char>(bytes[k * 8 + b])} << (8 * b);
        out[k] = static_cast<std::int64_t>(u);
    }
    return out;
}

// Writes to a temporary name and renames, so readers never see a torn file.
inline void write_atomically(const std::filesystem::path& path, const std::string& bytes) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw RowFileError("cannot write " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw RowFileError("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RowFileError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::filesystem::path row_header_path(const std::filesystem::path& dir, std::size_t i) {
    return dir / ("row_" + std::to_string(i) + ".json");
}

inline std::filesystem::path row_payload_path(const std::filesystem::path& dir, std::size_t i) {
    return dir / ("row_" + std::to_string(i) + ".bin");
}

}  // namespace detail

/// Writes every row of `m` (first m.cols() entries) into directory `dir`.
inline void save_rows(const MexMatrix& m, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const std::size_t n = m.cols();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const std::string payload = detail::encode_le64(m.row(i).subspan(0, n));
        nlohmann::json header{{"format", kRowFormat},
                              {"row", i},
                              {"count", n},
                              {"checksum", checksum_string(payload)}};
        detail::write_atomically(detail::row_payload_path(dir, i), payload);
        detail::write_atomically(detail::row_header_path(dir, i), header.dump() + "\n");
    }
}

/// Reads one row, validating format, count and checksum.
inline std::vector<std::int64_t> load_row(const std::filesystem::path& dir, std::size_t i) {
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(detail::read_all(detail::row_header_path(dir, i)));
    } catch (const nlohmann::json::exception& e) {
        throw RowFileError("malformed header for row " + std::to_string(i) + ": " + e.what());
    }
    const auto format = header.value("format", std::string{});
    if (format != kRowFormat) {
        throw VersionMismatch("row " + std::to_string(i) + " has format '" + format + "', expected '" +
                              kRowFormat + "'");
    }
    if (header.value("row", std::size_t{i} + 1) != i) throw RowFileError("row index mismatch in header");
    const std::string payload = detail::read_all(detail::row_payload_path(dir, i));
    if (checksum_string(payload) != header.value("checksum", std::string{})) {
        throw ChecksumMismatch("checksum mismatch for row " + std::to_string(i));
    }
    const auto count = header.at("count").get<std::size_t>();
    if (payload.size() != count * 8) throw RowFileError("row " + std::to_string(i) + " payload length mismatch");
    return detail::decode_le64(payload);
}

/// Loads rows 0, 1, ... from `dir` until the next header is missing, and
/// rebuilds the generation state so the matrix can be extended.
inline MexMatrix load_rows(const std::filesystem::path& dir) {
    std::vector<std::vector<std::int64_t>> rows;
    for (std::size_t i = 0; std::filesystem::exists(detail::row_header_path(dir, i)); ++i) {
        rows.push_back(load_row(dir, i));
    }
    if (rows.empty()) throw RowFileError("no row files in " + dir.string());
    return MexMatrix::from_rows(std::move(rows));
}

/// Two-column plot data "j,q" for one row.
inline void export_row_csv(std::span<const std::int64_t> row, std::ostream& out) {
    out << "j,q\n";
    for (std::size_t j = 0; j < row.size(); ++j) out << j << ',' << row[j] << '\n';
}

inline void export_plot_data(const MexMatrix& m, std::size_t row, const std::filesystem::path& path) {
    std::ostringstream os;
    export_row_csv(m.row(row).subspan(0, m.cols()), os);
    detail::write_atomically(path, os.str());
}

/// Reads back a "j,q" CSV written by export_plot_data.
inline std::vector<std::int64_t> import_row_csv(std::istream& in) {
    std::string line;
    std::vector<std::int64_t> out;
    if (!std::getline(in, line) || line != "j,q") throw std::invalid_argument("expected 'j,q' header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("bad CSV line: " + line);
        const auto j = std::stoll(line.substr(0, comma));
        if (j != static_cast<long long>(out.size())) throw std::invalid_argument("non-consecutive column index");
        out.push_back(std::stoll(line.substr(comma + 1)));
    }
    return out;
}

}  // namespace fibpart
