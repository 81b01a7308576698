#pragma once

// Orthogonal arrays, cyclic difference matrices over Z_n, the DM -> OA
// construction, and a prefix check of the mex matrix as a difference matrix
// over Z (evidence only: a finite prefix can never certify the infinite case).

#include "fibpart/mex_matrix.hpp"

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

namespace fibpart {

using Array2D = std::vector<std::vector<std::int64_t>>;

struct OrthogonalArray {
    std::size_t runs = 0;     // N
    std::size_t factors = 0;  // k
    std::int64_t levels = 0;  // s
    int strength = 0;         // t
    std::int64_t index = 0;   // lambda
    Array2D entries;          // N x k over 0..s-1
};

struct OaViolation {
    std::vector<std::size_t> columns;
    std::vector<std::int64_t> tuple;
    std::int64_t count = 0;
};

struct OaReport {
    bool size_ok = false;  // N = lambda * s^t
    std::size_t subsets_checked = 0;
    std::size_t violation_count = 0;
    std::size_t cap = 10;
    std::vector<OaViolation> violations;

    bool ok() const { return size_ok && violation_count == 0; }
};

namespace detail {

inline void require_rectangular(const Array2D& a, const char* what) {
    if (a.empty()) throw std::invalid_argument(std::string(what) + " has no rows");
    const std::size_t k = a.front().size();
    for (const auto& row : a) {
        if (row.size() != k) throw std::invalid_argument(std::string(what) + " rows have unequal length");
    }
}

inline void require_symbols(const Array2D& a, std::int64_t s, const char* what) {
    for (std::size_t r = 0; r < a.size(); ++r) {
        for (std::size_t c = 0; c < a[r].size(); ++c) {
            if (a[r][c] < 0 || a[r][c] >= s) {
                throw std::domain_error(std::string(what) + " entry (" + std::to_string(r) + "," + std::to_string(c) +
                                        ") = " + std::to_string(a[r][c]) + " is outside 0.." +
                                        std::to_string(s - 1));
            }
        }
    }
}

inline std::int64_t mod(std::int64_t x, std::int64_t n) {
    const std::int64_t r = x % n;
    return r < 0 ? r + n : r;
}

inline void combinations(std::size_t k, std::size_t t, std::vector<std::size_t>& cur, std::size_t from,
                         std::vector<std::vector<std::size_t>>& out) {
    if (cur.size() == t) {
        out.push_back(cur);
        return;
    }
    for (std::size_t c = from; c + (t - cur.size()) <= k; ++c) {
        cur.push_back(c);
        combinations(k, t, cur, c + 1, out);
        cur.pop_back();
    }
}

inline void count_subsets(const Array2D& a, std::int64_t s, std::int64_t lambda,
                          const std::vector<std::vector<std::size_t>>& subsets, std::size_t lo, std::size_t hi,
                          OaReport& rep) {
    const std::size_t t = subsets.empty() ? 0 : subsets.front().size();
    std::size_t cells = 1;
    for (std::size_t q = 0; q < t; ++q) cells *= static_cast<std::size_t>(s);
    std::vector<std::int64_t> counts(cells);
    for (std::size_t idx = lo; idx < hi; ++idx) {
        const auto& cols = subsets[idx];
        std::fill(counts.begin(), counts.end(), 0);
        for (const auto& row : a) {
            std::size_t code = 0;
            for (auto c : cols) code = code * static_cast<std::size_t>(s) + static_cast<std::size_t>(row[c]);
            ++counts[code];
        }
        for (std::size_t code = 0; code < cells; ++code) {
            if (counts[code] == lambda) continue;
            ++rep.violation_count;
            if (rep.violations.size() < rep.cap) {
                std::vector<std::int64_t> tuple(t);
                std::size_t rest = code;
                for (std::size_t q = t; q-- > 0;) {
                    tuple[q] = static_cast<std::int64_t>(rest % static_cast<std::size_t>(s));
                    rest /= static_cast<std::size_t>(s);
                }
                rep.violations.push_back({cols, std::move(tuple), counts[code]});
            }
        }
        ++rep.subsets_checked;
    }
}

}  // namespace detail

/// Checks that every choice of t columns of `array` (symbols 0..s-1) contains
/// each t-tuple exactly lambda times. The size condition N = lambda * s^t is
/// checked first; when it fails nothing is counted.
inline OaReport verify_oa(const Array2D& array, std::int64_t s, int t, std::int64_t lambda, unsigned threads = 1) {
    detail::require_rectangular(array, "orthogonal array");
    const std::size_t k = array.front().size();
    if (s < 1) throw std::invalid_argument("orthogonal array needs s >= 1");
    if (t < 0 || static_cast<std::size_t>(t) > k) throw std::invalid_argument("strength must satisfy 0 <= t <= k");
    if (lambda < 1) throw std::invalid_argument("index must be >= 1");
    detail::require_symbols(array, s, "orthogonal array");

    OaReport rep;
    Int expected = lambda;
    for (int q = 0; q < t; ++q) expected = detail::checked_mul(expected, Int{s});
    rep.size_ok = expected == static_cast<Int>(array.size());
    if (!rep.size_ok) return rep;

    std::vector<std::vector<std::size_t>> subsets;
    std::vector<std::size_t> cur;
    detail::combinations(k, static_cast<std::size_t>(t), cur, 0, subsets);
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(subsets.size())));
    if (threads == 1) {
        detail::count_subsets(array, s, lambda, subsets, 0, subsets.size(), rep);
        return rep;
    }
    std::vector<OaReport> parts(threads);
    std::vector<std::thread> pool;
    const std::size_t chunk = (subsets.size() + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
        const std::size_t lo = std::min(subsets.size(), w * chunk);
        const std::size_t hi = std::min(subsets.size(), lo + chunk);
        pool.emplace_back([&, lo, hi, w] { detail::count_subsets(array, s, lambda, subsets, lo, hi, parts[w]); });
    }
    for (auto& th : pool) th.join();
    for (auto& p : parts) {
        rep.subsets_checked += p.subsets_checked;
        rep.violation_count += p.violation_count;
        for (auto& v : p.violations) {
            if (rep.violations.size() < rep.cap) rep.violations.push_back(std::move(v));
        }
    }
    return rep;
}

inline OaReport verify_oa(const OrthogonalArray& oa, unsigned threads = 1) {
    if (oa.entries.size() != oa.runs || (!oa.entries.empty() && oa.entries.front().size() != oa.factors)) {
        throw std::invalid_argument("orthogonal array dimensions disagree with its entries");
    }
    return verify_oa(oa.entries, oa.levels, oa.strength, oa.index, threads);
}

/// The 9 x 4 strength-2 array over {0,1,2} printed as an OA(4,3) example.
inline OrthogonalArray example_oa_4_3() {
    OrthogonalArray oa;
    oa.entries = {{0, 0, 0, 0}, {0, 1, 1, 2}, {0, 2, 2, 1}, {1, 0, 2, 2}, {1, 1, 0, 1},
                  {1, 2, 1, 0}, {2, 0, 1, 1}, {2, 1, 2, 0}, {2, 2, 0, 2}};
    oa.runs = 9;
    oa.factors = 4;
    oa.levels = 3;
    oa.strength = 2;
    oa.index = 1;
    return oa;
}

struct PairDifferences {
    std::size_t r = 0;
    std::size_t s = 0;
    // finite mode: group elements whose multiplicity is not lambda, with that multiplicity
    std::vector<std::pair<std::int64_t, std::int64_t>> wrong_counts;
    // prefix mode over Z
    bool distinct = false;
    std::int64_t radius = -1;

    bool ok(bool prefix_mode) const { return prefix_mode ? distinct : wrong_counts.empty(); }
};

struct DifferenceMatrixReport {
    std::string group;  // "Z_n", or "Z" in prefix mode
    bool prefix_mode = false;
    std::size_t rows_checked = 0;
    std::size_t cols_checked = 0;
    std::int64_t lambda = 1;
    std::vector<PairDifferences> pairs;

    bool ok() const {
        return std::all_of(pairs.begin(), pairs.end(), [&](const auto& p) { return p.ok(prefix_mode); });
    }

    /// Prefix mode can only ever produce evidence.
    std::string verdict() const {
        if (prefix_mode) return ok() ? "evidence: all pair differences distinct on prefix" : "refuted on prefix";
        return ok() ? "difference matrix" : "not a difference matrix";
    }

    const PairDifferences& pair(std::size_t r, std::size_t s) const {
        for (const auto& p : pairs) {
            if (p.r == r && p.s == s) return p;
        }
        throw std::out_of_range("no such row pair");
    }
};

/// For each row pair r < s, checks that {d[r][l] - d[s][l]} hits every
/// element of Z_n exactly lambda times. D must be m x (lambda * n).
inline DifferenceMatrixReport verify_difference_matrix(const Array2D& D, std::int64_t n, std::int64_t lambda = 1) {
    detail::require_rectangular(D, "difference matrix");
    if (D.size() < 2) throw std::invalid_argument("difference matrix needs at least two rows");
    if (n < 1 || lambda < 1) throw std::invalid_argument("difference matrix needs n, lambda >= 1");
    if (static_cast<Int>(D.front().size()) != Int{lambda} * n) {
        throw std::invalid_argument("difference matrix has " + std::to_string(D.front().size()) +
                                    " columns, expected lambda*n = " + std::to_string(lambda * n));
    }
    detail::require_symbols(D, n, "difference matrix");
    DifferenceMatrixReport rep;
    rep.group = "Z_" + std::to_string(n);
    rep.rows_checked = D.size();
    rep.cols_checked = D.front().size();
    rep.lambda = lambda;
    std::vector<std::int64_t> counts(static_cast<std::size_t>(n));
    for (std::size_t r = 0; r < D.size(); ++r) {
        for (std::size_t s = r + 1; s < D.size(); ++s) {
            std::fill(counts.begin(), counts.end(), 0);
            for (std::size_t l = 0; l < D[r].size(); ++l) ++counts[static_cast<std::size_t>(detail::mod(D[r][l] - D[s][l], n))];
            PairDifferences pd;
            pd.r = r;
            pd.s = s;
            for (std::int64_t g = 0; g < n; ++g) {
                if (counts[static_cast<std::size_t>(g)] != lambda) pd.wrong_counts.emplace_back(g, counts[static_cast<std::size_t>(g)]);
            }
            rep.pairs.push_back(std::move(pd));
        }
    }
    return rep;
}

/// a_{(j,g), i} = d_{ij} + g over Z_n. Runs are ordered by column j, then g.
/// Entries of D must already lie in 0..n-1; unbounded data is rejected.
inline OrthogonalArray dm_to_oa(const Array2D& D, std::int64_t n) {
    detail::require_rectangular(D, "difference matrix");
    if (n < 1) throw std::invalid_argument("group order must be >= 1");
    detail::require_symbols(D, n, "difference matrix");
    const std::size_t m = D.size();
    const std::size_t cols = D.front().size();
    if (cols == 0 || cols % static_cast<std::size_t>(n) != 0) {
        throw std::invalid_argument("difference matrix column count must be a positive multiple of n");
    }
    OrthogonalArray oa;
    oa.levels = n;
    oa.factors = m;
    oa.strength = m >= 2 ? 2 : 1;
    oa.runs = cols * static_cast<std::size_t>(n);
    Int per_cell = 1;
    for (int q = 0; q < oa.strength; ++q) per_cell *= n;
    oa.index = static_cast<std::int64_t>(static_cast<Int>(oa.runs) / per_cell);
    oa.entries.reserve(oa.runs);
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::int64_t g = 0; g < n; ++g) {
            std::vector<std::int64_t> run(m);
            for (std::size_t i = 0; i < m; ++i) run[i] = detail::mod(D[i][j] + g, n);
            oa.entries.push_back(std::move(run));
        }
    }
    return oa;
}

inline bool is_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t d = 2; d * d <= p; ++d) {
        if (p % d == 0) return false;
    }
    return true;
}

/// d_{ij} = i * j mod p for rows i in 0..size-1 and columns j in 0..p-1.
inline Array2D field_dm(std::int64_t p, std::int64_t size) {
    if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
    if (size < 1 || size > p) throw std::invalid_argument("field_dm size must be in 1..p");
    Array2D D(static_cast<std::size_t>(size), std::vector<std::int64_t>(static_cast<std::size_t>(p)));
    for (std::int64_t i = 0; i < size; ++i) {
        for (std::int64_t j = 0; j < p; ++j) D[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = (i * j) % p;
    }
    return D;
}

inline Array2D field_dm(std::int64_t p) { return field_dm(p, p); }

/// Adds g to every symbol mod s.
inline OrthogonalArray translate_symbols(OrthogonalArray oa, std::int64_t g) {
    for (auto& run : oa.entries) {
        for (auto& v : run) v = detail::mod(v + g, oa.levels);
    }
    return oa;
}

inline bool same_runs(const OrthogonalArray& a, const OrthogonalArray& b) {
    auto x = a.entries;
    auto y = b.entries;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    return x == y;
}

/// Treats the first `cols` columns of the mex matrix as a difference matrix
/// over Z: every row pair must have pairwise distinct differences; the
/// symmetric radius D with -D..D all present is reported per pair.
inline DifferenceMatrixReport prefix_dm_check(const MexMatrix& matrix, std::size_t cols) {
    if (matrix.rows() < 2) throw std::invalid_argument("prefix_dm_check needs at least two rows");
    if (cols > matrix.cols()) throw std::invalid_argument("prefix_dm_check: matrix has fewer columns than requested");
    DifferenceMatrixReport rep;
    rep.group = "Z";
    rep.prefix_mode = true;
    rep.rows_checked = matrix.rows();
    rep.cols_checked = cols;
    std::vector<std::int64_t> d(cols);
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
        const auto qr = matrix.row(r);
        for (std::size_t s = r + 1; s < matrix.rows(); ++s) {
            const auto qs = matrix.row(s);
            for (std::size_t l = 0; l < cols; ++l) d[l] = qr[l] - qs[l];
            PairDifferences pd;
            pd.r = r;
            pd.s = s;
            pd.radius = symmetric_radius(d);
            auto sorted = d;
            std::sort(sorted.begin(), sorted.end());
            pd.distinct = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
            rep.pairs.push_back(std::move(pd));
        }
    }
    return rep;
}

inline nlohmann::json to_json(const OaReport& r) {
    nlohmann::json j{{"ok", r.ok()},
                     {"size_ok", r.size_ok},
                     {"subsets_checked", r.subsets_checked},
                     {"violation_count", r.violation_count}};
    auto& vs = j["violations"] = nlohmann::json::array();
    for (const auto& v : r.violations) vs.push_back({{"columns", v.columns}, {"tuple", v.tuple}, {"count", v.count}});
    return j;
}

inline nlohmann::json to_json(const DifferenceMatrixReport& r) {
    nlohmann::json j{{"ok", r.ok()},
                     {"verdict", r.verdict()},
                     {"group", r.group},
                     {"rows_checked", r.rows_checked},
                     {"cols_checked", r.cols_checked},
                     {"lambda", r.lambda}};
    auto& ps = j["pairs"] = nlohmann::json::array();
    for (const auto& p : r.pairs) {
        nlohmann::json pj{{"rows", {p.r, p.s}}};
        if (r.prefix_mode) {
            pj["distinct"] = p.distinct;
            pj["radius"] = p.radius;
        } else {
            pj["wrong_counts"] = p.wrong_counts;
        }
        ps.push_back(std::move(pj));
    }
    return j;
}

// CSV interchange. Header lines: "# oa N k s t lambda" and "# dm n m lambda group".

namespace detail {

inline void write_rows_csv(const Array2D& a, std::ostream& out) {
    for (const auto& row : a) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
        out << '\n';
    }
}

inline Array2D read_rows_csv(std::istream& in, std::size_t expected_rows, std::size_t expected_cols) {
    Array2D a;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::int64_t> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stoll(cell, &used));
                if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
            } catch (const std::logic_error&) {
                throw std::invalid_argument("CSV line " + std::to_string(a.size() + 2) + ": bad cell '" + cell + "'");
            }
        }
        if (row.size() != expected_cols) {
            throw std::invalid_argument("CSV line " + std::to_string(a.size() + 2) + ": expected " +
                                        std::to_string(expected_cols) + " cells");
        }
        a.push_back(std::move(row));
    }
    if (a.size() != expected_rows) {
        throw std::invalid_argument("CSV has " + std::to_string(a.size()) + " rows, header says " +
                                    std::to_string(expected_rows));
    }
    return a;
}

}  // namespace detail

inline void write_oa_csv(const OrthogonalArray& oa, std::ostream& out) {
    out << "# oa " << oa.runs << ' ' << oa.factors << ' ' << oa.levels << ' ' << oa.strength << ' ' << oa.index << '\n';
    detail::write_rows_csv(oa.entries, out);
}

inline OrthogonalArray read_oa_csv(std::istream& in) {
    std::string header, tag, kind;
    std::getline(in, header);
    std::istringstream hs(header);
    OrthogonalArray oa;
    if (!(hs >> tag >> kind >> oa.runs >> oa.factors >> oa.levels >> oa.strength >> oa.index) || tag != "#" ||
        kind != "oa") {
        throw std::invalid_argument("expected header '# oa N k s t lambda'");
    }
    oa.entries = detail::read_rows_csv(in, oa.runs, oa.factors);
    return oa;
}

struct DifferenceMatrixFile {
    std::int64_t n = 0;
    std::int64_t lambda = 1;
    std::string group;
    Array2D entries;
};

inline void write_dm_csv(const Array2D& D, std::int64_t n, std::int64_t lambda, std::ostream& out) {
    out << "# dm " << n << ' ' << D.size() << ' ' << lambda << " Z_" << n << '\n';
    detail::write_rows_csv(D, out);
}

inline DifferenceMatrixFile read_dm_csv(std::istream& in) {
    std::string header, tag, kind;
    std::getline(in, header);
    std::istringstream hs(header);
    DifferenceMatrixFile f;
    std::size_t m = 0;
    if (!(hs >> tag >> kind >> f.n >> m >> f.lambda >> f.group) || tag != "#" || kind != "dm") {
        throw std::invalid_argument("expected header '# dm n m lambda group'");
    }
    if (f.group != "Z_" + std::to_string(f.n)) throw std::invalid_argument("only cyclic groups Z_n are supported");
    f.entries = detail::read_rows_csv(in, m, static_cast<std::size_t>(f.n * f.lambda));
    return f;
}

}  // namespace fibpart
