#pragma once

// Piecewise permutations of N: pi(n) = floor((a*phi + b)*n + c) on R[i,j].

#include "fibpart/gbs.hpp"
#include "fibpart/report.hpp"
#include "fibpart/wythoff.hpp"

#include <cctype>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace fibpart {

struct PieceTuple {
    Int a = 0;
    Int b = 0;
    Int c = 0;
    GbsBlock block;

    friend bool operator==(const PieceTuple&, const PieceTuple&) = default;
};

/// Thrown when a permutation cannot be evaluated at some n.
class MalformedPermutation : public std::runtime_error {
public:
    MalformedPermutation(const std::string& what, Int witness) : std::runtime_error(what), witness_(witness) {}
    Int witness() const { return witness_; }

private:
    Int witness_;
};

/// Parses "(1,0,1,0,0);(1,-1,0,1,0)". Tuples may also be separated by commas.
inline std::vector<PieceTuple> parse_tuples(std::string_view text) {
    std::vector<PieceTuple> out;
    std::size_t pos = 0;
    const auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    const auto fail = [&](const std::string& msg) {
        throw std::invalid_argument("tuple list, offset " + std::to_string(pos) + ": " + msg);
    };
    const auto expect = [&](char c) {
        skip_ws();
        if (pos >= text.size() || text[pos] != c) fail(std::string("expected '") + c + "'");
        ++pos;
    };
    const auto number = [&] {
        skip_ws();
        const std::size_t start = pos;
        if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start || !std::isdigit(static_cast<unsigned char>(text[pos - 1]))) fail("expected integer");
        return parse_int(std::string(text.substr(start, pos - start)));
    };
    skip_ws();
    while (pos < text.size()) {
        expect('(');
        Int v[5];
        for (int k = 0; k < 5; ++k) {
            if (k > 0) expect(',');
            v[k] = number();
        }
        expect(')');
        out.push_back({v[0], v[1], v[2], GbsBlock{static_cast<int>(v[3]), v[4]}});
        skip_ws();
        if (pos < text.size()) {
            if (text[pos] != ';' && text[pos] != ',') fail("expected ';' between tuples");
            ++pos;
            skip_ws();
        }
    }
    if (out.empty()) fail("empty tuple list");
    return out;
}

inline std::string format_tuples(const std::vector<PieceTuple>& pieces) {
    std::string s;
    for (const auto& p : pieces) {
        if (!s.empty()) s += ';';
        s += "(" + to_string(p.a) + "," + to_string(p.b) + "," + to_string(p.c) + "," + std::to_string(p.block.i) +
             "," + to_string(p.block.j) + ")";
    }
    return s;
}

class PiecewisePermutation {
public:
    /// Validates that the piece blocks partition 1..validate_upto.
    explicit PiecewisePermutation(std::vector<PieceTuple> pieces, std::string name = {}, Int validate_upto = 1000)
        : pieces_(std::move(pieces)), name_(std::move(name)) {
        if (pieces_.empty()) throw std::invalid_argument("permutation needs at least one piece");
        if (validate_upto > 0) {
            auto report = verify_partition(blocks(), validate_upto);
            if (!report.ok()) {
                const auto& v = *report.first_failure();
                throw MalformedPermutation("pieces of " + label() + " do not partition N: " + v.detail, v.witness);
            }
        }
    }

    const std::vector<PieceTuple>& pieces() const { return pieces_; }
    const std::string& name() const { return name_; }
    std::string label() const { return name_.empty() ? format_tuples(pieces_) : name_; }

    PartitionSpec blocks() const {
        PartitionSpec spec;
        for (const auto& p : pieces_) spec.blocks.push_back(p.block);
        return spec;
    }

    Int operator()(Int n) const {
        if (n < 1) throw MalformedPermutation(label() + " evaluated outside N", n);
        for (const auto& p : pieces_) {
            if (range_contains(p.block, n)) {
                const Int v = eval_affine_golden(p.a, p.b, p.c, n);
                if (v < 1) throw MalformedPermutation(label() + " maps " + to_string(n) + " outside N", n);
                return v;
            }
        }
        throw MalformedPermutation("no piece of " + label() + " contains " + to_string(n), n);
    }

private:
    std::vector<PieceTuple> pieces_;
    std::string name_;
};

inline Int perm_eval(const PiecewisePermutation& p, Int n) { return p(n); }

/// P(Q(n)), evaluated pointwise.
inline Int compose_eval(const PiecewisePermutation& p, const PiecewisePermutation& q, Int n) { return p(q(n)); }

/// The named permutations f, g, h, h2, h3, i, i2..i5, j, jinv with their tuple lists.
inline const std::map<std::string, PiecewisePermutation>& builtin_perms() {
    static const std::map<std::string, PiecewisePermutation> catalog = [] {
        const std::pair<const char*, const char*> table[] = {
            {"f", "(1,0,1,0,0);(1,-1,0,1,0)"},
            {"g", "(1,0,0,2,0);(1,0,-2,1,0);(1,-1,2,2,2);(1,-1,1,3,1)"},
            {"h", "(1,0,0,2,0);(1,0,0,1,0);(1,-1,2,2,2);(1,-1,-1,3,1)"},
            {"h2", "(1,1,-1,1,0);(0,1,2,2,2);(0,1,-2,2,0);(-1,2,1,3,1)"},
            {"h3", "(1,0,3,2,2);(1,0,-2,1,0);(1,-1,1,3,1);(1,-1,1,2,0)"},
            {"i", "(1,1,-2,1,0);(1,0,2,3,1);(1,-1,2,2,2);(1,-1,0,2,0)"},
            {"i2", "(1,0,2,2,2);(1,0,-2,1,0);(0,1,0,4,0);(0,1,0,3,1);(-1,2,1,3,2)"},
            {"i3", "(1,0,2,3,1);(1,-1,0,4,0);(0,1,0,3,2);(0,1,0,2,2);(0,1,0,1,0)"},
            {"i4", "(1,1,-2,1,0);(1,-1,2,2,2);(1,-1,0,3,2);(0,1,0,4,0);(0,1,0,3,1)"},
            {"i5", "(1,0,2,1,1);(1,0,-2,1,0);(1,-1,0,4,0);(-1,2,1,3,2)"},
            {"j", "(1,0,1,2,0);(1,0,-1,1,0);(1,-1,1,1,1)"},
            {"jinv", "(1,0,0,2,0);(1,0,0,1,1);(1,-1,1,2,1);(1,-1,0,3,0)"},
        };
        std::map<std::string, PiecewisePermutation> m;
        for (const auto& [name, tuples] : table) m.emplace(name, PiecewisePermutation(parse_tuples(tuples), name));
        return m;
    }();
    return catalog;
}

inline const PiecewisePermutation& builtin_perm(const std::string& name) {
    const auto& cat = builtin_perms();
    auto it = cat.find(name);
    if (it == cat.end()) throw std::invalid_argument("unknown permutation '" + name + "'");
    return it->second;
}

/// Injectivity of pi on 1..N, and surjectivity onto 1..bound where bound is the least per-piece
/// maximum over 1..N. Every piece with slope a*phi + b > 0 is non-decreasing, so a value <= bound
/// missed by 1..N is never attained. Metrics: "covered_prefix" (largest M with 1..M in the image)
/// and "surjectivity_bound" (0 when some piece is absent from 1..N or not increasing).
inline IdentityReport verify_bijection_prefix(const PiecewisePermutation& p, Int N) {
    if (N < 1) throw std::invalid_argument("verify_bijection_prefix needs N >= 1");
    IdentityReport r;
    r.checked_range = N;
    const auto& pieces = p.pieces();
    std::vector<Int> piece_max(pieces.size(), 0);
    std::vector<Int> image;
    image.reserve(static_cast<std::size_t>(N));
    Int max_image = 0;
    for (Int n = 1; n <= N; ++n) {
        const Int v = p(n);
        image.push_back(v);
        max_image = std::max(max_image, v);
        for (std::size_t k = 0; k < pieces.size(); ++k) {
            if (range_contains(pieces[k].block, n)) {
                piece_max[k] = std::max(piece_max[k], v);
                break;
            }
        }
    }
    Int bound = max_image;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        const auto& q = pieces[k];
        const bool increasing = q.a == 0 ? q.b > 0 : eval_affine_golden(q.a, q.b, 0, 1) >= 0;
        bound = (increasing && piece_max[k] > 0) ? std::min(bound, piece_max[k]) : 0;
        if (bound == 0) break;
    }
    std::vector<Int> first_source(static_cast<std::size_t>(max_image) + 1, 0);
    for (Int n = 1; n <= N; ++n) {
        const Int v = image[static_cast<std::size_t>(n - 1)];
        auto& src = first_source[static_cast<std::size_t>(v)];
        if (src != 0) {
            r.fail("injective", n, "pi(" + to_string(src) + ") = pi(" + to_string(n) + ") = " + to_string(v));
        } else {
            src = n;
            r.pass("injective");
        }
    }
    Int covered = 0;
    while (covered + 1 <= max_image && first_source[static_cast<std::size_t>(covered + 1)] != 0) ++covered;
    r.metrics["covered_prefix"] = covered;
    r.metrics["surjectivity_bound"] = bound;
    for (Int m = covered + 1; m <= bound; ++m) {
        if (first_source[static_cast<std::size_t>(m)] == 0) {
            r.fail("surjective", m, to_string(m) + " is not attained, though every piece exceeds it on 1.." + to_string(N));
        }
    }
    if (bound > 0) r.pass("surjective");
    return r;
}

struct OrderResult {
    std::optional<int> order;  // least k <= max_order with pi^k = id on the prefix
    int max_order = 0;
    Int prefix = 0;

    std::string label() const {
        if (order) return "order " + std::to_string(*order) + " on prefix 1.." + to_string(prefix);
        return "order > " + std::to_string(max_order) + " on prefix 1.." + to_string(prefix);
    }
};

inline OrderResult detect_order(const PiecewisePermutation& p, Int N, int max_order) {
    if (N < 1 || max_order < 1) throw std::invalid_argument("detect_order needs N, max_order >= 1");
    OrderResult res;
    res.max_order = max_order;
    res.prefix = N;
    long long order = 1;
    for (Int n = 1; n <= N; ++n) {
        Int x = p(n);
        int period = 1;
        while (x != n && period < max_order) {
            x = p(x);
            ++period;
        }
        if (x != n) return res;
        order = std::lcm(order, static_cast<long long>(period));
        if (order > max_order) return res;
    }
    res.order = static_cast<int>(order);
    return res;
}

/// j^n(3) = F(n+3) + 2 for n in 1..N, and on R[1,0] (n <= 10^4): j(n) in R[1,0]
/// and j^3(n) = j^2(n) + j(n) - 2.
inline IdentityReport verify_infinite_order_witness(Int N, Int lemma_range = 10000) {
    if (N < 1) throw std::invalid_argument("verify_infinite_order_witness needs N >= 1");
    const auto& j = builtin_perm("j");
    IdentityReport r;
    r.checked_range = N;
    Int x = 3;
    for (Int n = 1; n <= N; ++n) {
        if (n + 3 > kMaxFibIndex) throw OverflowError("j^n(3) beyond 128-bit Fibonacci range");
        x = j(x);
        const Int expected = fib(static_cast<int>(n + 3)) + 2;
        r.check(x == expected, "j^n(3) = F(n+3) + 2", n, "got " + to_string(x) + ", want " + to_string(expected));
    }
    const GbsBlock r10{1, 0};
    for (Int k = 1;; ++k) {
        const Int n = gbs_eval(r10, k);
        if (n > lemma_range) break;
        const Int j1 = j(n);
        const Int j2 = j(j1);
        const Int j3 = j(j2);
        r.check(range_contains(r10, j1).has_value(), "n in R[1,0] => j(n) in R[1,0]", n);
        r.check(j3 == j2 + j1 - 2, "n in R[1,0] => j^3(n) = j^2(n) + j(n) - 2", n);
    }
    return r;
}

}  // namespace fibpart
