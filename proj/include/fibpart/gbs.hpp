#pragma once

// Generalized Beatty sequences f[i,j](n) = F(i+1)*a(n) + F(i)*n - j, their
// ranges R[i,j], bifurcation, and the two standard families of Fibonacci-like
// partitions.

#include "fibpart/report.hpp"
#include "fibpart/wythoff.hpp"

#include <algorithm>
#include <compare>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace fibpart {

/// Names the sequence f[i,j] and its range R[i,j]. `i = -1` is accepted and
/// gives f[-1,j](n) = n - j (F(-1) = 1), so R[-1,0] is all of N.
struct GbsBlock {
    int i = 0;
    Int j = 0;

    friend auto operator<=>(const GbsBlock&, const GbsBlock&) = default;
};

inline std::string to_string(const GbsBlock& b) {
    return "R[" + std::to_string(b.i) + "," + to_string(b.j) + "]";
}

namespace detail {

// Fibonacci extended one step to the left: F(-1) = 1.
inline Int fib_ext(int n) { return n == -1 ? Int{1} : fib(n); }

inline void require_block(const GbsBlock& b) {
    if (b.i < -1) throw std::invalid_argument("block index i must be >= -1, got " + std::to_string(b.i));
    if (b.i + 1 > kMaxFibIndex) throw OverflowError("block index i too large for 128-bit Fibonacci");
}

}  // namespace detail

inline Int gbs_eval(const GbsBlock& block, Int n) {
    using namespace detail;
    require_block(block);
    if (n < 1) throw std::domain_error("gbs_eval needs n >= 1");
    return checked_sub(checked_add(checked_mul(fib_ext(block.i + 1), floor_phi_mul(n)),
                                   checked_mul(fib_ext(block.i), n)),
                       block.j);
}

namespace detail {

// f(n) when it fits, otherwise a value known to exceed any representable m.
inline Int gbs_eval_saturating(const GbsBlock& block, Int n) {
    try {
        return gbs_eval(block, n);
    } catch (const OverflowError&) {
        return kIntMax;
    }
}

// Largest n in [lo, hi] with f(n) <= m, given f(lo) <= m.
inline Int largest_at_most(const GbsBlock& block, Int m, Int lo, Int hi) {
    while (lo < hi) {
        const Int mid = lo + (hi - lo + 1) / 2;
        if (gbs_eval_saturating(block, mid) <= m) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    return lo;
}

// Bracket for the crossing index from phi's convergents F(40)/F(39) < phi < F(41)/F(40).
inline std::optional<std::pair<Int, Int>> crossing_bracket(const GbsBlock& block, Int m) {
    try {
        const Int p_lo = fib(40), q_lo = fib(39);
        const Int p_hi = fib(41), q_hi = fib(40);
        const Int fi1 = fib_ext(block.i + 1), fi = fib_ext(block.i);
        const Int shifted = checked_add(m, block.j);
        // slope c = F(i+1)*phi + F(i) lies in (c_lo_num/q_lo, c_hi_num/q_hi)
        const Int c_lo_num = checked_add(checked_mul(fi1, p_lo), checked_mul(fi, q_lo));
        const Int c_hi_num = checked_add(checked_mul(fi1, p_hi), checked_mul(fi, q_hi));
        const Int lo = checked_mul(shifted, q_hi) / c_hi_num - 1;
        const Int top = checked_mul(checked_add(shifted, fi1), q_lo);
        const Int hi = (top + c_lo_num - 1) / c_lo_num + 1;
        return std::pair{std::max<Int>(lo, 1), hi};
    } catch (const OverflowError&) {
        return std::nullopt;
    }
}

// Largest n >= 1 with f(n) <= m; requires f(1) <= m.
inline Int index_floor(const GbsBlock& block, Int m) {
    if (auto bracket = crossing_bracket(block, m)) {
        auto [lo, hi] = *bracket;
        if (gbs_eval_saturating(block, lo) <= m && gbs_eval_saturating(block, hi + 1) > m) {
            return largest_at_most(block, m, lo, hi);
        }
    }
    const Int abs_j = block.j < 0 ? -block.j : block.j;
    return largest_at_most(block, m, 1, checked_add(checked_add(m, abs_j), 1));
}

}  // namespace detail

/// The n with f[i,j](n) = m when m lies in R[i,j].
inline std::optional<Int> range_contains(const GbsBlock& block, Int m) {
    detail::require_block(block);
    if (m < gbs_eval(block, 1)) return std::nullopt;
    const Int n = detail::index_floor(block, m);
    if (gbs_eval(block, n) == m) return n;
    return std::nullopt;
}

/// R[i,j] = R[i+1, F(i+1)+j] disjoint-union R[i+2, j].
inline std::pair<GbsBlock, GbsBlock> bifurcate(const GbsBlock& block) {
    detail::require_block(block);
    return {GbsBlock{block.i + 1, detail::checked_add(detail::fib_ext(block.i + 1), block.j)},
            GbsBlock{block.i + 2, block.j}};
}

enum class PartitionKind { First, Second, Custom };

inline std::string to_string(PartitionKind k) {
    switch (k) {
        case PartitionKind::First: return "first";
        case PartitionKind::Second: return "second";
        case PartitionKind::Custom: return "custom";
    }
    return "custom";
}

/// A claimed partition of {m : m >= domain_start} into block ranges.
struct PartitionSpec {
    std::vector<GbsBlock> blocks;
    Int domain_start = 1;
    PartitionKind kind = PartitionKind::Custom;
    int k = 0;  // family parameter; 0 for custom specs

    std::set<GbsBlock> block_set() const { return {blocks.begin(), blocks.end()}; }
};

/// k-th standard Fibonacci-like partition of the first kind (F(k) blocks covering N).
inline PartitionSpec standard_partition_first(int k) {
    if (k < 1) throw std::invalid_argument("first-kind partition needs k >= 1");
    PartitionSpec spec;
    spec.kind = PartitionKind::First;
    spec.k = k;
    spec.domain_start = 1;
    if (k <= 2) {
        spec.blocks.push_back({-1, 0});
        return spec;
    }
    const int i = k - 3;
    for (Int j = 0; j <= fib(i + 2) - 1; ++j) spec.blocks.push_back({i, j});
    for (Int j = 0; j <= fib(i + 1) - 1; ++j) spec.blocks.push_back({i + 1, j});
    return spec;
}

/// k-th standard Fibonacci-like partition of the second kind (F(k) blocks covering m >= F(k)).
inline PartitionSpec standard_partition_second(int k) {
    if (k < 3) throw std::invalid_argument("second-kind partition needs k >= 3");
    PartitionSpec spec;
    spec.kind = PartitionKind::Second;
    spec.k = k;
    spec.domain_start = fib(k);
    for (int i = k - 3; i <= k - 2; ++i) {
        for (Int j = -fib(i + 1); j >= 1 - fib(k); --j) spec.blocks.push_back({i, j});
    }
    return spec;
}

/// Bifurcates every block of the lowest level i; maps P_{k-1} onto P_k.
inline PartitionSpec refine(const PartitionSpec& spec) {
    if (spec.blocks.empty()) return spec;
    int lowest = spec.blocks.front().i;
    for (const auto& b : spec.blocks) lowest = std::min(lowest, b.i);
    PartitionSpec out;
    out.domain_start = spec.domain_start;
    out.kind = PartitionKind::Custom;
    for (const auto& b : spec.blocks) {
        if (b.i == lowest) {
            auto [left, right] = bifurcate(b);
            out.blocks.push_back(left);
            out.blocks.push_back(right);
        } else {
            out.blocks.push_back(b);
        }
    }
    std::sort(out.blocks.begin(), out.blocks.end());
    return out;
}

namespace detail {

inline IdentityReport verify_partition_chunk(const PartitionSpec& spec, Int lo, Int hi, std::size_t cap) {
    IdentityReport r;
    r.cap = cap;
    r.checked_range = hi;
    if (lo > hi) return r;
    const auto width = static_cast<std::size_t>(hi - lo + 1);
    std::vector<std::uint8_t> counts(width, 0);
    for (const auto& block : spec.blocks) {
        const Int first = gbs_eval(block, 1);
        Int n = 1;
        if (first < lo) n = index_floor(block, lo - 1) + 1;
        // values below the domain are only reported by the chunk that owns domain_start
        if (lo == spec.domain_start && first < spec.domain_start) {
            r.fail("block inside domain", first, to_string(block) + " contains " + to_string(first) +
                                                      " below domain start " + to_string(spec.domain_start));
        }
        for (Int v = gbs_eval(block, n); v <= hi; v = gbs_eval(block, ++n)) {
            auto& c = counts[static_cast<std::size_t>(v - lo)];
            if (c < 255) ++c;
        }
    }
    for (std::size_t off = 0; off < width; ++off) {
        const Int m = lo + static_cast<Int>(off);
        if (counts[off] == 1) {
            r.pass("covered exactly once");
            continue;
        }
        std::string owners;
        for (const auto& block : spec.blocks) {
            if (range_contains(block, m)) owners += (owners.empty() ? "" : " ") + to_string(block);
        }
        r.fail("covered exactly once", m,
               "count " + std::to_string(counts[off]) + (owners.empty() ? "" : " in " + owners));
    }
    return r;
}

}  // namespace detail

/// Checks that every m in domain_start..N lies in exactly one block's range.
inline IdentityReport verify_partition(const PartitionSpec& spec, Int N, std::size_t cap = 10,
                                       unsigned threads = 1) {
    if (N < spec.domain_start) throw std::invalid_argument("verify_partition needs N >= domain_start");
    for (const auto& b : spec.blocks) detail::require_block(b);
    const Int lo = spec.domain_start;
    threads = std::max(1u, threads);
    const Int span = N - lo + 1;
    if (threads == 1 || span < 4096) {
        auto r = detail::verify_partition_chunk(spec, lo, N, cap);
        r.checked_range = N;
        return r;
    }
    std::vector<IdentityReport> parts(threads);
    std::vector<std::thread> pool;
    const Int step = (span + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const Int a = lo + step * t;
        const Int b = std::min(N, a + step - 1);
        pool.emplace_back([&, t, a, b] { parts[t] = detail::verify_partition_chunk(spec, a, b, cap); });
    }
    for (auto& th : pool) th.join();
    IdentityReport r;
    r.cap = cap;
    for (const auto& p : parts) r.merge(p);
    r.checked_range = N;
    return r;
}

/// Proposition-style successor identities of P_k (with i = k-3) and the
/// second-kind identities of P'_k, for n in 1..N.
inline IdentityReport verify_block_identities(int k, Int N) {
    if (k < 3) throw std::invalid_argument("verify_block_identities needs k >= 3");
    if (N < 1) throw std::invalid_argument("verify_block_identities needs N >= 1");
    const int i = k - 3;
    const auto f = [](int bi, Int bj, Int n) { return gbs_eval({bi, bj}, n); };
    const auto a = [](Int n) { return floor_phi_mul(n); };
    const auto b = [](Int n) { return floor_phi_mul(n) + n; };
    const Int Fi1 = fib(i + 1), Fi2 = fib(i + 2);
    const Int Fk = fib(k), Fk1 = fib(k - 1), Fk2 = fib(k - 2);

    IdentityReport r;
    r.checked_range = N;
    for (Int n = 1; n <= N; ++n) {
        for (Int j = 1; j <= Fi2; ++j) r.check(f(i, j, n) + 1 == f(i, j - 1, n), "first(i): f[i,j]+1 = f[i,j-1]", n);
        for (Int j = 1; j <= Fi1; ++j) {
            r.check(f(i + 1, j, n) + 1 == f(i + 1, j - 1, n), "first(ii): f[i+1,j]+1 = f[i+1,j-1]", n);
        }
        r.check(f(i, 0, a(n)) + 1 == f(i + 1, Fi1 - 1, n), "first(iii): f[i,0](a(n))+1 = f[i+1,F(i+1)-1](n)", n);
        r.check(f(i, 0, b(n)) + 1 == f(i, Fi2 - 1, b(n) + 1),
                "first(iv): f[i,0](b(n))+1 = f[i,F(i+2)-1](b(n)+1)", n);
        r.check(f(i + 1, 0, n) + 1 == f(i, Fi2 - 1, a(n) + 1),
                "first(v): f[i+1,0](n)+1 = f[i,F(i+2)-1](a(n)+1)", n);

        for (int si = k - 3; si <= k - 2; ++si) {
            for (Int j = -fib(si + 1); j >= 2 - Fk; --j) {
                r.check(f(si, j, n) + 1 == f(si, j - 1, n), "second(i): f[i,j]+1 = f[i,j-1]", n);
            }
        }
        r.check(f(k - 3, 1 - Fk, a(n)) + 1 == f(k - 2, -Fk1, n),
                "second(ii): f[k-3,1-F(k)](a(n))+1 = f[k-2,-F(k-1)](n)", n);
        r.check(f(k - 3, 1 - Fk, b(n)) + 1 == f(k - 3, -Fk2, b(n) + 1),
                "second(iii): f[k-3,1-F(k)](b(n))+1 = f[k-3,-F(k-2)](b(n)+1)", n);
        r.check(f(k - 2, 1 - Fk, n) + 1 == f(k - 3, -Fk2, a(n) + 1),
                "second(iv): f[k-2,1-F(k)](n)+1 = f[k-3,-F(k-2)](a(n)+1)", n);
    }
    return r;
}

inline nlohmann::json to_json(const PartitionSpec& spec) {
    nlohmann::json j;
    j["kind"] = to_string(spec.kind);
    if (spec.kind != PartitionKind::Custom) j["k"] = spec.k;
    auto& blocks = j["blocks"] = nlohmann::json::array();
    for (const auto& b : spec.blocks) blocks.push_back({b.i, static_cast<long long>(b.j)});
    j["domain_start"] = static_cast<long long>(spec.domain_start);
    return j;
}

inline PartitionSpec partition_from_json(const nlohmann::json& j) {
    PartitionSpec spec;
    const auto kind = j.value("kind", std::string("custom"));
    if (kind == "first") {
        spec.kind = PartitionKind::First;
    } else if (kind == "second") {
        spec.kind = PartitionKind::Second;
    } else if (kind == "custom") {
        spec.kind = PartitionKind::Custom;
    } else {
        throw std::invalid_argument("unknown partition kind '" + kind + "'");
    }
    spec.k = j.value("k", 0);
    spec.domain_start = j.value("domain_start", 1LL);
    for (const auto& b : j.at("blocks")) {
        if (!b.is_array() || b.size() != 2) throw std::invalid_argument("block must be [i, j]");
        spec.blocks.push_back({b[0].get<int>(), static_cast<Int>(b[1].get<long long>())});
    }
    return spec;
}

}  // namespace fibpart
