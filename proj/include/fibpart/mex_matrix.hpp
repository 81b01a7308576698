#pragma once

// The greedy mex matrix: q[i][j] = mex({q[i][k] + q[l][j] - q[l][k] : l < i, k < j} ∩ Z>=0).
//
// For every ordered row pair (l, i) the engine keeps the difference set
// D(l,i) = {q[i][k] - q[l][k] : k < current column} as an offset bitset.
// Candidate v is avoided iff v - q[l][j] is in D(l,i) for some l < i, so the
// next cell is found by OR-ing 64-bit windows of every D(l,i) and taking the
// first clear bit. The scan starts at the row's own mex (the pair l = 0 is the
// row's value set, since row 0 is identically zero).

#include "fibpart/gbs.hpp"
#include "fibpart/report.hpp"
#include "fibpart/wythoff.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fibpart {

/// Dynamically growing bitset over a window of int64 values.
class OffsetBitset {
public:
    bool test(std::int64_t v) const {
        const std::int64_t idx = v - base_;
        if (idx < 0 || idx >= static_cast<std::int64_t>(words_.size()) * 64) return false;
        return (words_[static_cast<std::size_t>(idx >> 6)] >> (idx & 63)) & 1U;
    }

    void set(std::int64_t v) {
        if (words_.empty() || v < base_ || v >= base_ + static_cast<std::int64_t>(words_.size()) * 64) grow_to(v);
        const std::int64_t idx = v - base_;
        words_[static_cast<std::size_t>(idx >> 6)] |= std::uint64_t{1} << (idx & 63);
    }

    /// Bits v, v+1, ..., v+63 packed into one word (bit t is value v+t).
    std::uint64_t window(std::int64_t v) const {
        const std::int64_t idx = v - base_;
        const std::int64_t w = idx >> 6;  // floor division
        const int sh = static_cast<int>(idx & 63);
        std::uint64_t out = word(w) >> sh;
        if (sh != 0) out |= word(w + 1) << (64 - sh);
        return out;
    }

    template <typename F>
    void for_each(F&& fn) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits != 0) {
                const int t = __builtin_ctzll(bits);
                fn(base_ + static_cast<std::int64_t>(w) * 64 + t);
                bits &= bits - 1;
            }
        }
    }

private:
    std::uint64_t word(std::int64_t w) const {
        return (w >= 0 && w < static_cast<std::int64_t>(words_.size())) ? words_[static_cast<std::size_t>(w)] : 0;
    }

    static std::int64_t floor64(std::int64_t v) { return v >= 0 ? v / 64 * 64 : -((-v + 63) / 64) * 64; }

    void grow_to(std::int64_t v) {
        if (words_.empty()) {
            base_ = floor64(v) - 64 * 8;
            words_.assign(32, 0);
            return;
        }
        std::int64_t lo = base_;
        std::int64_t hi = base_ + static_cast<std::int64_t>(words_.size()) * 64;  // exclusive
        const std::int64_t span = hi - lo;
        if (v < lo) lo = std::min(floor64(v), lo - span);
        if (v >= hi) hi = std::max(floor64(v) + 64, hi + span);
        std::vector<std::uint64_t> grown(static_cast<std::size_t>((hi - lo) / 64), 0);
        std::copy(words_.begin(), words_.end(), grown.begin() + (base_ - lo) / 64);
        words_ = std::move(grown);
        base_ = lo;
    }

    std::int64_t base_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Least non-negative integer absent from `s`; negative members are ignored.
template <typename Range>
std::int64_t mex(const Range& s) {
    std::vector<std::int64_t> v;
    for (auto x : s) {
        if (x >= 0) v.push_back(static_cast<std::int64_t>(x));
    }
    std::sort(v.begin(), v.end());
    std::int64_t m = 0;
    for (auto x : v) {
        if (x == m) {
            ++m;
        } else if (x > m) {
            break;
        }
    }
    return m;
}

inline std::int64_t mex(std::initializer_list<std::int64_t> s) { return mex<std::initializer_list<std::int64_t>>(s); }

/// Greedy mex matrix together with the state needed to keep extending it.
class MexMatrix {
public:
    MexMatrix() = default;

    /// Rebuilds generation state from stored rows (all rows must have equal length).
    static MexMatrix from_rows(std::vector<std::vector<std::int64_t>> rows) {
        MexMatrix m;
        const std::size_t n = rows.empty() ? 0 : rows.front().size();
        for (const auto& r : rows) {
            if (r.size() != n) throw std::invalid_argument("mex matrix rows must have equal length");
        }
        for (std::size_t i = 0; i < rows.size(); ++i) {
            m.add_row();
            for (std::size_t j = 0; j < n; ++j) m.push_cell(i, rows[i][j]);
        }
        return m;
    }

    std::size_t rows() const { return rows_.size(); }

    /// Columns present in every row.
    std::size_t cols() const {
        if (rows_.empty()) return 0;
        std::size_t c = rows_.front().size();
        for (const auto& r : rows_) c = std::min(c, r.size());
        return c;
    }

    std::int64_t at(std::size_t i, std::size_t j) const { return rows_.at(i).at(j); }
    std::span<const std::int64_t> row(std::size_t i) const { return rows_.at(i); }
    const std::vector<std::vector<std::int64_t>>& data() const { return rows_; }

    void add_row() {
        const std::size_t i = rows_.size();
        rows_.emplace_back();
        pairs_.emplace_back(i == 0 ? 1 : i);  // row 0 keeps a value set for coverage bookkeeping
        row_mex_.push_back(0);
    }

    /// Computes and appends the next cell of row i. Rows above i must already
    /// hold that column.
    std::int64_t extend_row(std::size_t i) {
        const std::size_t j = rows_.at(i).size();
        for (std::size_t l = 0; l < i; ++l) {
            if (rows_[l].size() <= j) throw std::logic_error("row " + std::to_string(l) + " must be generated first");
        }
        const std::int64_t v = next_value(i, j);
        push_cell(i, v);
        return v;
    }

    /// The avoided set S ∩ Z>=0 for the next cell of row i, read from the incremental state.
    std::vector<std::int64_t> avoided_set(std::size_t i) const {
        const std::size_t j = rows_.at(i).size();
        std::set<std::int64_t> out;
        for (std::size_t l = 0; l < i; ++l) {
            const std::int64_t shift = rows_[l].at(j);
            pairs_[i][l].for_each([&](std::int64_t d) {
                if (d + shift >= 0) out.insert(d + shift);
            });
        }
        return {out.begin(), out.end()};
    }

    /// Grows to `row_count` rows and `col_count` columns; existing cells are kept.
    void generate_to(std::size_t row_count, std::size_t col_count) {
        const std::size_t have_cols = cols();
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (rows_[i].size() != have_cols) throw std::logic_error("ragged mex matrix cannot be extended");
        }
        while (rows_.size() < row_count) {
            add_row();
            const std::size_t i = rows_.size() - 1;
            for (std::size_t j = 0; j < have_cols; ++j) extend_row(i);
        }
        for (std::size_t j = have_cols; j < col_count; ++j) {
            for (std::size_t i = 0; i < rows_.size(); ++i) extend_row(i);
        }
    }

    /// Top-left `row_count` x `col_count` block.
    MexMatrix truncated(std::size_t row_count, std::size_t col_count) const {
        if (row_count > rows() || col_count > cols()) throw std::out_of_range("truncation larger than matrix");
        std::vector<std::vector<std::int64_t>> r;
        for (std::size_t i = 0; i < row_count; ++i) r.emplace_back(rows_[i].begin(), rows_[i].begin() + col_count);
        return from_rows(std::move(r));
    }

    friend bool operator==(const MexMatrix& a, const MexMatrix& b) { return a.rows_ == b.rows_; }

private:
    static constexpr std::int64_t kValueLimit = std::int64_t{1} << 62;

    std::int64_t next_value(std::size_t i, std::size_t j) const {
        if (i == 0) return 0;  // S is empty on row 0
        std::int64_t v = row_mex_[i];
        const auto& diffs = pairs_[i];
        for (;;) {
            std::uint64_t taken = 0;
            for (std::size_t l = 0; l < i; ++l) taken |= diffs[l].window(v - rows_[l][j]);
            if (~taken != 0) return v + __builtin_ctzll(~taken);
            v += 64;
            if (v > kValueLimit) throw OverflowError("mex matrix value exceeds 62 bits");
        }
    }

    void push_cell(std::size_t i, std::int64_t v) {
        const std::size_t j = rows_[i].size();
        if (v < 0) throw std::invalid_argument("mex matrix values are non-negative");
        if (i == 0) {
            pairs_[0][0].set(v);
        } else {
            for (std::size_t l = 0; l < i; ++l) pairs_[i][l].set(v - rows_[l].at(j));
        }
        rows_[i].push_back(v);
        auto& pres = pairs_[i][0];  // q[0][k] = 0, so D(0,i) is row i's value set
        while (pres.test(row_mex_[i])) ++row_mex_[i];
    }

    std::vector<std::vector<std::int64_t>> rows_;
    std::vector<std::vector<OffsetBitset>> pairs_;  // pairs_[i][l] = D(l,i)
    std::vector<std::int64_t> row_mex_;
};

/// Greedy matrix with rows 0..m and n columns, optionally extending a previous run.
inline MexMatrix generate(std::size_t m, std::size_t n, const MexMatrix* resume_from = nullptr) {
    MexMatrix out;
    if (resume_from != nullptr) {
        const std::size_t r = std::min(m + 1, resume_from->rows());
        const std::size_t c = std::min(n, resume_from->cols());
        out = (r == resume_from->rows() && c == resume_from->cols()) ? *resume_from : resume_from->truncated(r, c);
    }
    out.generate_to(m + 1, n);
    return out;
}

/// The literal avoided set of the algorithm for cell (i, j), negatives included.
/// Quadratic; meant as an independent test oracle.
inline std::set<std::int64_t> avoided_set_oracle(const MexMatrix& prefix, std::size_t i, std::size_t j) {
    if (j > 1000) throw std::out_of_range("avoided_set_oracle is limited to j <= 1000");
    if (i >= prefix.rows() || prefix.row(i).size() < j) throw std::out_of_range("row i lacks columns 0..j-1");
    std::set<std::int64_t> s;
    for (std::size_t l = 0; l < i; ++l) {
        if (prefix.row(l).size() <= j) throw std::out_of_range("row l lacks column j");
        for (std::size_t k = 0; k < j; ++k) s.insert(prefix.at(i, k) + prefix.at(l, j) - prefix.at(l, k));
    }
    return s;
}

/// Third-row closed form: 0, floor(phi*j) + 1 on A, floor((phi-1)*j) on B.
inline std::int64_t row2_closed_form(std::int64_t j) {
    if (j < 0) throw std::domain_error("row2_closed_form needs j >= 0");
    if (j == 0) return 0;
    const Int a = floor_phi_mul(j);
    if (range_contains(GbsBlock{0, 0}, j)) return static_cast<std::int64_t>(a + 1);
    return static_cast<std::int64_t>(a - j);
}

/// Largest C with 0..C all present in `values` (-1 if 0 is absent).
template <typename Range>
std::int64_t consecutive_prefix(const Range& values) {
    OffsetBitset seen;
    for (auto v : values) seen.set(static_cast<std::int64_t>(v));
    std::int64_t c = -1;
    while (seen.test(c + 1)) ++c;
    return c;
}

/// Largest D with -D..D all present in `values` (-1 if 0 is absent).
template <typename Range>
std::int64_t symmetric_radius(const Range& values) {
    OffsetBitset seen;
    for (auto v : values) seen.set(static_cast<std::int64_t>(v));
    if (!seen.test(0)) return -1;
    std::int64_t d = 0;
    while (seen.test(d + 1) && seen.test(-(d + 1))) ++d;
    return d;
}

struct PairCoverage {
    std::size_t lower = 0;  // l
    std::size_t upper = 0;  // i > l
    std::int64_t radius = -1;
    bool distinct = false;
};

struct CoverageReport {
    std::size_t cols = 0;
    std::vector<std::int64_t> row_prefix;  // per row: largest C with 0..C present
    std::vector<bool> row_distinct;
    std::vector<PairCoverage> pairs;

    const PairCoverage& pair(std::size_t l, std::size_t i) const {
        for (const auto& p : pairs) {
            if (p.lower == l && p.upper == i) return p;
        }
        throw std::out_of_range("no such row pair");
    }
};

/// Consecutive coverage of every row and every row-pair difference sequence,
/// recomputed from the stored values (independent of the engine's bitsets).
inline CoverageReport coverage_report(const MexMatrix& m) {
    if (m.rows() < 2) throw std::invalid_argument("coverage_report needs at least two rows");
    CoverageReport rep;
    rep.cols = m.cols();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto r = m.row(i).subspan(0, rep.cols);
        rep.row_prefix.push_back(consecutive_prefix(r));
        std::vector<std::int64_t> sorted(r.begin(), r.end());
        std::sort(sorted.begin(), sorted.end());
        rep.row_distinct.push_back(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    }
    for (std::size_t i = 1; i < m.rows(); ++i) {
        for (std::size_t l = 0; l < i; ++l) {
            std::vector<std::int64_t> d(rep.cols);
            for (std::size_t k = 0; k < rep.cols; ++k) d[k] = m.at(i, k) - m.at(l, k);
            PairCoverage pc{l, i, symmetric_radius(d), false};
            std::sort(d.begin(), d.end());
            pc.distinct = std::adjacent_find(d.begin(), d.end()) == d.end();
            rep.pairs.push_back(pc);
        }
    }
    return rep;
}

struct Row2Analysis {
    std::int64_t j = 0;
    std::int64_t q = 0;
    std::int64_t n_of_j = 0;  // max k with 0..k contained in U_j
    std::int64_t m_of_j = 0;  // floor(phi*j) - j + 1
};

/// Structure of the third row (i = 2): closed form, the W_j / S_j / z_{j,i}
/// descriptions for j <= min(N, 1000), the n(j) - m(j) offsets on T1/T2/T3,
/// the involution q[q[j]] = j, and distinctness plus coverage of q[j] - j.
/// `row` may supply a precomputed third row with at least N+1 entries.
inline IdentityReport verify_row2_structure(std::int64_t N, std::span<const std::int64_t> row = {}) {
    if (N < 1) throw std::invalid_argument("verify_row2_structure needs N >= 1");
    std::vector<std::int64_t> owned;
    if (row.size() < static_cast<std::size_t>(N) + 1) {
        MexMatrix m = generate(2, static_cast<std::size_t>(N) + 1);
        owned.assign(m.row(2).begin(), m.row(2).end());
        row = owned;
    }
    const auto q = row.subspan(0, static_cast<std::size_t>(N) + 1);
    const auto a = [](std::int64_t x) { return static_cast<std::int64_t>(floor_phi_mul(x)); };
    const auto b = [&](std::int64_t x) { return a(x) + x; };
    const auto m_of = [&](std::int64_t j) { return a(j) - j + 1; };
    const GbsBlock T1{1, 0}, T2{1, 1}, T3{2, 0};

    IdentityReport r;
    r.checked_range = N;
    OffsetBitset in_u;  // U_j as j advances
    std::int64_t n_of_j = -1;
    const std::int64_t literal_limit = std::min<std::int64_t>(N, 1000);
    for (std::int64_t j = 0; j <= N; ++j) {
        const std::int64_t qj = q[static_cast<std::size_t>(j)];
        r.check(qj == row2_closed_form(j), "q_j equals closed form", j);
        if (qj <= N) r.check(q[static_cast<std::size_t>(qj)] == j, "q_{q_j} = j", j);

        if (j >= 1) {
            const std::int64_t mj = m_of(j);
            if (range_contains(T1, j)) {
                r.check(n_of_j == mj - 2, "j in T1 => n(j) = m(j) - 2", j);
            } else if (range_contains(T2, j)) {
                r.check(n_of_j == mj - 1, "j in T2 => n(j) = m(j) - 1", j);
            } else if (range_contains(T3, j)) {
                r.check(n_of_j == mj, "j in T3 => n(j) = m(j)", j);
            } else {
                r.fail("T1, T2, T3 cover N", j);
            }
        }

        if (j <= literal_limit) {
            std::set<std::int64_t> U, W;
            for (std::int64_t k = 0; k < j; ++k) {
                U.insert(q[static_cast<std::size_t>(k)]);
                W.insert(q[static_cast<std::size_t>(k)] + j - k);
            }
            std::set<std::int64_t> S = U;
            S.insert(W.begin(), W.end());
            if (j >= 1) {
                std::set<std::int64_t> expect_w;
                for (std::int64_t v = m_of(j); v <= a(j); ++v) expect_w.insert(v);
                r.check(W == expect_w, "W_j = {m(j), ..., floor(phi*j)}", j);

                std::vector<std::int64_t> z;
                for (auto u : U) {
                    if (u > n_of_j) z.push_back(u);
                }
                std::int64_t kj = 1;
                while (b(kj) <= n_of_j) ++kj;
                bool z_ok = true;
                for (std::size_t t = 0; t < z.size(); ++t) z_ok = z_ok && z[t] == b(kj + static_cast<std::int64_t>(t));
                r.check(z_ok, "z_{j,i} = b(k_j + i - 1)", j);
            }
            std::set<std::int64_t> expect_s;
            if (j >= 1) {
                for (std::int64_t v = 0; v <= a(j); ++v) expect_s.insert(v);
                if (!range_contains(GbsBlock{0, 0}, j)) expect_s.erase(a(j) - j);
            }
            r.check(S == expect_s, "S_j case split", j);
        }

        // advance U_j -> U_{j+1}
        in_u.set(qj);
        while (in_u.test(n_of_j + 1)) ++n_of_j;
    }

    std::vector<std::int64_t> shifted(q.size());
    for (std::size_t j = 0; j < q.size(); ++j) shifted[j] = q[j] - static_cast<std::int64_t>(j);
    r.metrics["q_minus_j_radius"] = symmetric_radius(shifted);
    r.metrics["row_prefix"] = consecutive_prefix(q);
    std::sort(shifted.begin(), shifted.end());
    r.check(std::adjacent_find(shifted.begin(), shifted.end()) == shifted.end(), "q_j - j pairwise distinct", N);
    std::vector<std::int64_t> sorted_q(q.begin(), q.end());
    std::sort(sorted_q.begin(), sorted_q.end());
    r.check(std::adjacent_find(sorted_q.begin(), sorted_q.end()) == sorted_q.end(), "q_j pairwise distinct", N);
    return r;
}

}  // namespace fibpart
