#pragma once

// OEIS b-file cache and prefix cross-checks of generated sequences.

#include "fibpart/gbs.hpp"
#include "fibpart/mex_matrix.hpp"
#include "fibpart/permutations.hpp"
#include "fibpart/wythoff.hpp"

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace fibpart::oeis {

class BfileParseError : public std::runtime_error {
public:
    BfileParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class CacheMiss : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FetchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Bfile {
    std::string id;
    std::vector<std::pair<Int, Int>> terms;  // (index, value)

    std::vector<Int> values() const {
        std::vector<Int> v;
        v.reserve(terms.size());
        for (const auto& t : terms) v.push_back(t.second);
        return v;
    }
};

/// "A000201", "a201" and "201" all normalize to "A000201".
inline std::string normalize_id(const std::string& raw) {
    std::string digits = raw;
    if (!digits.empty() && (digits[0] == 'A' || digits[0] == 'a')) digits.erase(0, 1);
    if (digits.empty() || digits.size() > 6) throw std::invalid_argument("bad OEIS id '" + raw + "'");
    for (char c : digits) {
        if (!std::isdigit(static_cast<unsigned char>(c))) throw std::invalid_argument("bad OEIS id '" + raw + "'");
    }
    return "A" + std::string(6 - digits.size(), '0') + digits;
}

/// "index value" per line; '#' starts a comment line; blank lines are ignored.
/// Indices must increase by one.
inline Bfile parse_bfile(std::istream& in, const std::string& id = {}) {
    Bfile b;
    b.id = id;
    std::string line;
    for (std::size_t no = 1; std::getline(in, line); ++no) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::string idx, val, extra;
        if (!(ls >> idx >> val)) throw BfileParseError(no, "expected 'index value'");
        if (ls >> extra) throw BfileParseError(no, "trailing text '" + extra + "'");
        Int i = 0, v = 0;
        try {
            i = parse_int(idx);
            v = parse_int(val);
        } catch (const std::exception& e) {
            throw BfileParseError(no, e.what());
        }
        if (!b.terms.empty() && i != b.terms.back().first + 1) {
            throw BfileParseError(no, "index " + idx + " does not follow " + to_string(b.terms.back().first));
        }
        b.terms.emplace_back(i, v);
    }
    return b;
}

inline Bfile parse_bfile(const std::string& text, const std::string& id = {}) {
    std::istringstream in(text);
    return parse_bfile(in, id);
}

enum class FetchPolicy { OfflineOnly, FetchIfMissing };

/// Returns the b-file text for an id, e.g. by downloading
/// https://oeis.org/A000201/b000201.txt. Throws FetchError on failure.
using Fetcher = std::function<std::string(const std::string& id)>;

/// True when FIBPART_OFFLINE is set to a non-empty value other than "0";
/// such runs never call a fetcher whatever policy is requested.
inline bool offline_forced() {
    const char* v = std::getenv("FIBPART_OFFLINE");
    return v != nullptr && *v != '\0' && std::string(v) != "0";
}

class BfileCache {
public:
    BfileCache(std::filesystem::path dir, FetchPolicy policy = FetchPolicy::OfflineOnly, Fetcher fetcher = {})
        : dir_(std::move(dir)), policy_(policy), fetcher_(std::move(fetcher)) {}

    const std::filesystem::path& dir() const { return dir_; }
    FetchPolicy policy() const { return offline_forced() ? FetchPolicy::OfflineOnly : policy_; }

    std::filesystem::path path_for(const std::string& id) const {
        return dir_ / ("b" + normalize_id(id).substr(1) + ".txt");
    }

    bool has(const std::string& id) const { return std::filesystem::exists(path_for(id)); }

    Bfile get(const std::string& raw_id) {
        const std::string id = normalize_id(raw_id);
        const auto path = path_for(id);
        if (std::filesystem::exists(path)) {
            std::ifstream in(path);
            try {
                return parse_bfile(in, id);
            } catch (const BfileParseError& e) {
                throw BfileParseError(e.line(), path.string() + ": " + e.what());
            }
        }
        if (policy() == FetchPolicy::OfflineOnly) throw CacheMiss(id + " is not cached in " + dir_.string());
        if (!fetcher_) throw FetchError("no fetcher configured for " + id);
        const std::string text = fetcher_(id);
        Bfile b = parse_bfile(text, id);
        // cached files are never rewritten; write-then-rename keeps concurrent readers safe
        std::filesystem::create_directories(dir_);
        auto tmp = path;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::trunc);
            out << text;
            if (!out) throw FetchError("cannot write " + tmp.string());
        }
        if (!std::filesystem::exists(path)) std::filesystem::rename(tmp, path);
        else std::filesystem::remove(tmp);
        return b;
    }

private:
    std::filesystem::path dir_;
    FetchPolicy policy_;
    Fetcher fetcher_;
};

// Generators

struct GbsGenerator {
    GbsBlock block;  // f_{i,j}(n), n = 1, 2, ...
};
struct Row2Generator {};  // third mex row q_j, j = 0, 1, ...
struct PermGenerator {
    std::string name;  // named permutation, n = 1, 2, ...
};
using Generator = std::variant<GbsGenerator, Row2Generator, PermGenerator>;

inline std::vector<Int> generate(const Generator& g, std::size_t count) {
    std::vector<Int> out;
    out.reserve(count);
    if (const auto* gb = std::get_if<GbsGenerator>(&g)) {
        for (std::size_t n = 1; n <= count; ++n) out.push_back(gbs_eval(gb->block, static_cast<Int>(n)));
    } else if (std::holds_alternative<Row2Generator>(g)) {
        for (std::size_t j = 0; j < count; ++j) out.push_back(row2_closed_form(static_cast<std::int64_t>(j)));
    } else {
        const auto& p = builtin_perm(std::get<PermGenerator>(g).name);
        for (std::size_t n = 1; n <= count; ++n) out.push_back(p(static_cast<Int>(n)));
    }
    return out;
}

inline std::string describe(const Generator& g) {
    if (const auto* gb = std::get_if<GbsGenerator>(&g)) return "f" + to_string(gb->block).substr(1);
    if (std::holds_alternative<Row2Generator>(g)) return "row2";
    return "perm " + std::get<PermGenerator>(g).name;
}

struct Transform {
    enum class Kind { Identity, Prepend, DropFirst, AddConstant };
    Kind kind = Kind::Identity;
    std::vector<Int> values;  // Prepend
    std::size_t count = 0;    // DropFirst
    Int constant = 0;         // AddConstant

    static Transform identity() { return {}; }
    static Transform prepend(std::vector<Int> v) { return {Kind::Prepend, std::move(v), 0, 0}; }
    static Transform drop_first(std::size_t c) { return {Kind::DropFirst, {}, c, 0}; }
    static Transform add_constant(Int c) { return {Kind::AddConstant, {}, 0, c}; }

    /// Raw terms needed to produce `length` transformed ones.
    std::size_t source_length(std::size_t length) const {
        if (kind == Kind::Prepend) return length > values.size() ? length - values.size() : 0;
        if (kind == Kind::DropFirst) return length + count;
        return length;
    }

    std::vector<Int> apply(std::vector<Int> seq) const {
        switch (kind) {
            case Kind::Identity: break;
            case Kind::Prepend: seq.insert(seq.begin(), values.begin(), values.end()); break;
            case Kind::DropFirst: seq.erase(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(std::min(count, seq.size()))); break;
            case Kind::AddConstant:
                for (auto& v : seq) v += constant;
                break;
        }
        return seq;
    }

    std::string describe() const {
        switch (kind) {
            case Kind::Identity: return "identity";
            case Kind::Prepend: {
                std::string s = "prepend(";
                for (std::size_t k = 0; k < values.size(); ++k) s += (k ? "," : "") + to_string(values[k]);
                return s + ")";
            }
            case Kind::DropFirst: return "drop_first(" + std::to_string(count) + ")";
            case Kind::AddConstant: return "add_constant(" + to_string(constant) + ")";
        }
        return {};
    }
};

struct CrossCheckCase {
    std::string id;
    Generator generator;
    Transform transform;
    std::size_t length = 100;
};

enum class Status { Pass, Mismatch, Shortfall };

inline std::string status_name(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Mismatch: return "mismatch";
        case Status::Shortfall: return "shortfall";
    }
    return {};
}

struct CrossCheckResult {
    std::string id;
    Status status = Status::Pass;
    std::size_t compared = 0;
    std::size_t available = 0;      // terms in the b-file
    std::size_t mismatch_index = 0; // 0-based position after alignment on the first term
    Int expected = 0;               // b-file value
    Int got = 0;                    // generated value

    bool ok() const { return status == Status::Pass; }
};

/// Compares the transformed generated prefix with the first `length` b-file
/// terms. A b-file shorter than `length` is a shortfall, checked before values.
inline CrossCheckResult crosscheck(const CrossCheckCase& c, const Bfile& b) {
    CrossCheckResult r;
    r.id = normalize_id(c.id);
    r.available = b.terms.size();
    if (b.terms.size() < c.length) {
        r.status = Status::Shortfall;
        return r;
    }
    const auto ours = c.transform.apply(generate(c.generator, c.transform.source_length(c.length)));
    for (std::size_t k = 0; k < c.length; ++k) {
        if (k >= ours.size() || ours[k] != b.terms[k].second) {
            r.status = Status::Mismatch;
            r.mismatch_index = k;
            r.expected = b.terms[k].second;
            r.got = k < ours.size() ? ours[k] : 0;
            r.compared = k;
            return r;
        }
    }
    r.compared = c.length;
    return r;
}

inline CrossCheckResult crosscheck(const CrossCheckCase& c, BfileCache& cache) { return crosscheck(c, cache.get(c.id)); }

// Manifest JSON:
// {"cases": [{"id": "A026351", "generator": {"kind": "gbs", "block": [0, -1]},
//             "transform": {"kind": "prepend", "values": [1]}, "length": 100}, ...]}

inline Generator generator_from_json(const nlohmann::json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "gbs") {
        const auto& blk = j.at("block");
        return GbsGenerator{GbsBlock{blk.at(0).get<int>(), blk.at(1).get<long long>()}};
    }
    if (kind == "row2") return Row2Generator{};
    if (kind == "perm") return PermGenerator{j.at("name").get<std::string>()};
    throw std::invalid_argument("unknown generator kind '" + kind + "'");
}

inline nlohmann::json to_json(const Generator& g) {
    if (const auto* gb = std::get_if<GbsGenerator>(&g)) {
        return {{"kind", "gbs"}, {"block", {gb->block.i, static_cast<long long>(gb->block.j)}}};
    }
    if (std::holds_alternative<Row2Generator>(g)) return {{"kind", "row2"}};
    return {{"kind", "perm"}, {"name", std::get<PermGenerator>(g).name}};
}

inline Transform transform_from_json(const nlohmann::json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "identity") return Transform::identity();
    if (kind == "prepend") {
        std::vector<Int> v;
        for (const auto& x : j.at("values")) v.push_back(x.get<long long>());
        return Transform::prepend(std::move(v));
    }
    if (kind == "drop_first") return Transform::drop_first(j.at("count").get<std::size_t>());
    if (kind == "add_constant") return Transform::add_constant(j.at("value").get<long long>());
    throw std::invalid_argument("unknown transform kind '" + kind + "'");
}

inline nlohmann::json to_json(const Transform& t) {
    switch (t.kind) {
        case Transform::Kind::Identity: return {{"kind", "identity"}};
        case Transform::Kind::Prepend: {
            std::vector<long long> v;
            for (auto x : t.values) v.push_back(static_cast<long long>(x));
            return {{"kind", "prepend"}, {"values", v}};
        }
        case Transform::Kind::DropFirst: return {{"kind", "drop_first"}, {"count", t.count}};
        case Transform::Kind::AddConstant: return {{"kind", "add_constant"}, {"value", static_cast<long long>(t.constant)}};
    }
    return {};
}

inline std::vector<CrossCheckCase> manifest_from_json(const nlohmann::json& j) {
    std::vector<CrossCheckCase> out;
    for (const auto& c : j.at("cases")) {
        out.push_back({normalize_id(c.at("id").get<std::string>()), generator_from_json(c.at("generator")),
                       transform_from_json(c.value("transform", nlohmann::json{{"kind", "identity"}})),
                       c.value("length", std::size_t{100})});
    }
    return out;
}

inline std::vector<CrossCheckCase> load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest " + path.string());
    return manifest_from_json(nlohmann::json::parse(in));
}

inline nlohmann::json to_json(const CrossCheckResult& r) {
    nlohmann::json j{{"id", r.id}, {"status", status_name(r.status)}, {"compared", r.compared}, {"available", r.available}};
    if (r.status == Status::Mismatch) {
        j["mismatch_index"] = r.mismatch_index;
        j["expected"] = fibpart::to_string(r.expected);
        j["got"] = fibpart::to_string(r.got);
    }
    return j;
}

}  // namespace fibpart::oeis
