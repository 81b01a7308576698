#pragma once

// A small language for floor-function identities, checked exactly over 1..N.
//
//   claim  := expr "=" expr [ "," "n" "in" set ]
//   set    := "A" | "B" | "R[" int "," int "]"
//   expr   := term (("+" | "-") term)*
//   term   := factor ("*" factor)*
//   factor := int | "n" | "-" factor | "(" expr ")"
//           | ("a" | "b" | "fib") "(" expr ")"
//           | "f[" int "," int "]" "(" expr ")"
//           | "floorphi(" int "," int "," int ";" expr ")"
//           | "perm[" name "]" "(" expr ")"
//
// a(t) = floor(phi t), b(t) = floor(phi^2 t), fib(t) = F(t),
// f[i,j](t) = F(i+1) a(t) + F(i) t - j, floorphi(p,q,r; t) = floor((p phi + q) t + r),
// perm[name](t) applies one of the named piecewise permutations.
// phi never appears on its own, so every value is an exact integer.
//
// Identities stated with 1/phi are written with floorphi(1,-1,0; t), since
// 1/phi = phi - 1.

#include "fibpart/gbs.hpp"
#include "fibpart/permutations.hpp"
#include "fibpart/report.hpp"
#include "fibpart/wythoff.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

namespace fibpart::dsl {

enum class Op { Lit, Var, Neg, Add, Sub, Mul, A, B, Fib, F, FloorPhi, Perm };

struct Expr {
    Op op = Op::Lit;
    Int value = 0;               // Lit
    int i = 0;                   // F: block index
    Int j = 0;                   // F: block shift
    Int p = 0, q = 0, r = 0;     // FloorPhi
    std::string name;            // Perm
    std::vector<Expr> args;

    friend bool operator==(const Expr&, const Expr&) = default;
};

enum class GuardKind { A, B, Range };

struct Guard {
    GuardKind kind = GuardKind::A;
    GbsBlock block;  // Range

    friend bool operator==(const Guard&, const Guard&) = default;
};

struct Claim {
    Expr lhs;
    Expr rhs;
    std::optional<Guard> guard;

    friend bool operator==(const Claim&, const Claim&) = default;
};

class ParseError : public std::invalid_argument {
public:
    ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& message)
        : std::invalid_argument("offset " + std::to_string(offset) + ": " + message),
          offset_(offset),
          expected_(std::move(expected)) {}

    std::size_t offset() const { return offset_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

/// Raised when evaluation leaves the 128-bit range or a function's domain.
class EvalError : public std::runtime_error {
public:
    EvalError(Int n, const std::string& what) : std::runtime_error("at n = " + to_string(n) + ": " + what), n_(n) {}
    Int n() const { return n_; }

private:
    Int n_;
};

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    Claim claim() {
        Claim c;
        c.lhs = expr();
        expect('=', {"'='", "operator"});
        c.rhs = expr();
        skip();
        if (peek() == ',') {
            ++pos_;
            keyword("n");
            keyword("in");
            c.guard = guard();
        }
        end();
        return c;
    }

    std::variant<Expr, Claim> expr_or_claim() {
        Expr e = expr();
        skip();
        if (pos_ >= s_.size()) return e;
        Claim c;
        c.lhs = std::move(e);
        expect('=', {"'='", "operator", "end of input"});
        c.rhs = expr();
        skip();
        if (peek() == ',') {
            ++pos_;
            keyword("n");
            keyword("in");
            c.guard = guard();
        }
        end();
        return c;
    }

    Expr expr_only() {
        Expr e = expr();
        end();
        return e;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    std::string found() const {
        if (pos_ >= s_.size()) return "end of input";
        return "'" + std::string(1, s_[pos_]) + "'";
    }

    [[noreturn]] void fail(std::vector<std::string> expected) const {
        std::string msg = "expected ";
        for (std::size_t k = 0; k < expected.size(); ++k) {
            msg += (k == 0 ? "" : k + 1 == expected.size() ? " or " : ", ") + expected[k];
        }
        throw ParseError(pos_, std::move(expected), msg + ", found " + found());
    }

    void expect(char c, std::vector<std::string> expected) {
        skip();
        if (peek() != c) fail(std::move(expected));
        ++pos_;
    }

    void end() {
        skip();
        if (pos_ < s_.size()) fail({"operator", "end of input"});
    }

    std::string ident() {
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        return std::string(s_.substr(start, pos_ - start));
    }

    void keyword(const char* word) {
        skip();
        const std::size_t at = pos_;
        if (ident() != word) {
            pos_ = at;
            fail({std::string("'") + word + "'"});
        }
    }

    Int integer() {
        skip();
        const std::size_t start = pos_;
        bool neg = false;
        if (peek() == '-' || peek() == '+') {
            neg = peek() == '-';
            ++pos_;
            skip();
        }
        const std::size_t digits = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == digits) {
            pos_ = start;
            fail({"integer"});
        }
        if (peek() == '.' || peek() == 'e' || peek() == 'E') {
            throw ParseError(start, {"integer"}, "non-integer coefficient");
        }
        try {
            const Int v = parse_int(std::string(s_.substr(digits, pos_ - digits)));
            return neg ? -v : v;
        } catch (const std::exception&) {
            throw ParseError(start, {"integer"}, "integer literal out of range");
        }
    }

    Guard guard() {
        skip();
        const std::size_t at = pos_;
        const std::string w = ident();
        if (w == "A") return {GuardKind::A, {}};
        if (w == "B") return {GuardKind::B, {}};
        if (w == "R") {
            expect('[', {"'['"});
            const Int i = integer();
            expect(',', {"','"});
            const Int j = integer();
            expect(']', {"']'"});
            if (i < -1 || i > 180) throw ParseError(at, {"block index"}, "block index out of range");
            return {GuardKind::Range, GbsBlock{static_cast<int>(i), j}};
        }
        pos_ = at;
        fail({"'A'", "'B'", "'R['"});
    }

    Expr expr() {
        Expr left = term();
        for (;;) {
            skip();
            const char c = peek();
            if (c != '+' && c != '-') return left;
            ++pos_;
            Expr e;
            e.op = c == '+' ? Op::Add : Op::Sub;
            e.args = {std::move(left), term()};
            left = std::move(e);
        }
    }

    Expr term() {
        Expr left = factor();
        for (;;) {
            skip();
            if (peek() != '*') return left;
            ++pos_;
            Expr e;
            e.op = Op::Mul;
            e.args = {std::move(left), factor()};
            left = std::move(e);
        }
    }

    Expr call_arg() {
        expect('(', {"'('"});
        Expr e = expr();
        expect(')', {"')'", "operator"});
        return e;
    }

    Expr factor() {
        skip();
        const char c = peek();
        if (c == '-') {
            ++pos_;
            Expr e;
            e.op = Op::Neg;
            e.args = {factor()};
            return e;
        }
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            expect(')', {"')'", "operator"});
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Expr e;
            e.op = Op::Lit;
            e.value = integer();
            return e;
        }
        if (!std::isalpha(static_cast<unsigned char>(c))) fail({"integer", "'n'", "function", "'('", "'-'"});
        const std::size_t at = pos_;
        const std::string w = ident();
        Expr e;
        if (w == "n") {
            e.op = Op::Var;
            return e;
        }
        if (w == "a" || w == "b" || w == "fib") {
            e.op = w == "a" ? Op::A : w == "b" ? Op::B : Op::Fib;
            e.args = {call_arg()};
            return e;
        }
        if (w == "f") {
            e.op = Op::F;
            expect('[', {"'['"});
            const std::size_t idx_at = pos_;
            const Int i = integer();
            if (i < -1 || i > 180) throw ParseError(idx_at, {"block index"}, "block index out of range");
            e.i = static_cast<int>(i);
            expect(',', {"','"});
            e.j = integer();
            expect(']', {"']'"});
            e.args = {call_arg()};
            return e;
        }
        if (w == "floorphi") {
            e.op = Op::FloorPhi;
            expect('(', {"'('"});
            e.p = integer();
            expect(',', {"','"});
            e.q = integer();
            expect(',', {"','"});
            e.r = integer();
            expect(';', {"';'"});
            e.args = {expr()};
            expect(')', {"')'", "operator"});
            return e;
        }
        if (w == "perm") {
            e.op = Op::Perm;
            expect('[', {"'['"});
            const std::size_t name_at = pos_;
            e.name = ident();
            if (e.name.empty()) {
                pos_ = name_at;
                fail({"permutation name"});
            }
            if (!builtin_perms().count(e.name)) {
                throw ParseError(name_at, {"permutation name"}, "unknown permutation '" + e.name + "'");
            }
            expect(']', {"']'"});
            e.args = {call_arg()};
            return e;
        }
        throw ParseError(at, {"'n'", "'a'", "'b'", "'fib'", "'f['", "'floorphi'", "'perm['"},
                         "unknown function '" + w + "'");
    }
};

inline int precedence(Op op) {
    switch (op) {
        case Op::Add:
        case Op::Sub: return 1;
        case Op::Mul: return 2;
        case Op::Neg: return 3;
        default: return 4;
    }
}

}  // namespace detail

inline Claim parse_claim(std::string_view text) { return detail::Parser(text).claim(); }
inline Expr parse_expr(std::string_view text) { return detail::Parser(text).expr_only(); }
inline std::variant<Expr, Claim> parse(std::string_view text) { return detail::Parser(text).expr_or_claim(); }

/// Canonical text: "+"/"-" spaced, "*" tight, parentheses only where needed.
inline std::string print(const Expr& e) {
    const auto wrap = [](const Expr& child, bool need) { return need ? "(" + print(child) + ")" : print(child); };
    switch (e.op) {
        case Op::Lit: return to_string(e.value);
        case Op::Var: return "n";
        case Op::Neg: return "-" + wrap(e.args[0], detail::precedence(e.args[0].op) < detail::precedence(Op::Neg));
        case Op::Add:
        case Op::Sub:
        case Op::Mul: {
            // left-associative: a right operand at the same level keeps its parentheses
            const int p = detail::precedence(e.op);
            const char* sym = e.op == Op::Add ? " + " : e.op == Op::Sub ? " - " : "*";
            return wrap(e.args[0], detail::precedence(e.args[0].op) < p) + sym +
                   wrap(e.args[1], detail::precedence(e.args[1].op) <= p);
        }
        case Op::A: return "a(" + print(e.args[0]) + ")";
        case Op::B: return "b(" + print(e.args[0]) + ")";
        case Op::Fib: return "fib(" + print(e.args[0]) + ")";
        case Op::F: return "f[" + std::to_string(e.i) + "," + to_string(e.j) + "](" + print(e.args[0]) + ")";
        case Op::FloorPhi:
            return "floorphi(" + to_string(e.p) + "," + to_string(e.q) + "," + to_string(e.r) + "; " +
                   print(e.args[0]) + ")";
        case Op::Perm: return "perm[" + e.name + "](" + print(e.args[0]) + ")";
    }
    return {};
}

inline std::string print(const Guard& g) {
    switch (g.kind) {
        case GuardKind::A: return "A";
        case GuardKind::B: return "B";
        case GuardKind::Range: return "R[" + std::to_string(g.block.i) + "," + to_string(g.block.j) + "]";
    }
    return {};
}

inline std::string print(const Claim& c) {
    std::string s = print(c.lhs) + " = " + print(c.rhs);
    if (c.guard) s += ", n in " + print(*c.guard);
    return s;
}

/// Exact value of e at n.
inline Int eval(const Expr& e, Int n) {
    using fibpart::detail::checked_add;
    using fibpart::detail::checked_mul;
    using fibpart::detail::checked_sub;
    try {
        switch (e.op) {
            case Op::Lit: return e.value;
            case Op::Var: return n;
            case Op::Neg: return checked_sub(0, eval(e.args[0], n));
            case Op::Add: return checked_add(eval(e.args[0], n), eval(e.args[1], n));
            case Op::Sub: return checked_sub(eval(e.args[0], n), eval(e.args[1], n));
            case Op::Mul: return checked_mul(eval(e.args[0], n), eval(e.args[1], n));
            case Op::A: return floor_phi_mul(eval(e.args[0], n));
            case Op::B: {
                const Int t = eval(e.args[0], n);
                return checked_add(floor_phi_mul(t), t);
            }
            case Op::Fib: {
                const Int t = eval(e.args[0], n);
                if (t < 0 || t > kMaxFibIndex) throw std::domain_error("fib argument " + to_string(t) + " out of range");
                return fib(static_cast<int>(t));
            }
            case Op::F: {
                const Int t = eval(e.args[0], n);
                const Int fi1 = e.i + 1 == -1 ? 1 : fib(e.i + 1);
                const Int fi = e.i == -1 ? 1 : fib(e.i);
                return checked_sub(checked_add(checked_mul(fi1, floor_phi_mul(t)), checked_mul(fi, t)), e.j);
            }
            case Op::FloorPhi: return eval_affine_golden(e.p, e.q, e.r, eval(e.args[0], n));
            case Op::Perm: return builtin_perm(e.name)(eval(e.args[0], n));
        }
    } catch (const EvalError&) {
        throw;
    } catch (const std::exception& ex) {
        throw EvalError(n, ex.what());
    }
    return 0;
}

inline bool guard_holds(const Guard& g, Int n) {
    switch (g.kind) {
        case GuardKind::A: return in_lower_wythoff(n);
        case GuardKind::B: return in_upper_wythoff(n);
        case GuardKind::Range: return range_contains(g.block, n).has_value();
    }
    return false;
}

/// Evaluates both sides for every n in 1..N that satisfies the guard. The
/// report is keyed by the claim's canonical text; metric "guarded_out"
/// counts skipped n. Throws EvalError on overflow.
inline IdentityReport check(const Claim& claim, Int N) {
    if (N < 1) throw std::invalid_argument("check needs N >= 1");
    const std::string name = print(claim);
    IdentityReport r;
    r.checked_range = N;
    r.pass_counts[name] = 0;
    Int skipped = 0;
    for (Int n = 1; n <= N; ++n) {
        if (claim.guard && !guard_holds(*claim.guard, n)) {
            ++skipped;
            continue;
        }
        const Int l = eval(claim.lhs, n);
        const Int rv = eval(claim.rhs, n);
        if (l == rv) {
            r.pass(name);
        } else {
            r.fail(name, n, "lhs = " + to_string(l) + ", rhs = " + to_string(rv));
        }
    }
    r.metrics[name + " guarded_out"] = skipped;
    return r;
}

struct CorpusEntry {
    std::size_t line = 0;
    std::string text;
    Claim claim;
};

/// One claim per line; blank lines and '#' comments are skipped.
inline std::vector<CorpusEntry> parse_corpus(std::istream& in) {
    std::vector<CorpusEntry> out;
    std::string line;
    for (std::size_t no = 1; std::getline(in, line); ++no) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto last = line.find_last_not_of(" \t\r");
        std::string text = line.substr(first, last - first + 1);
        try {
            out.push_back({no, text, parse_claim(text)});
        } catch (const ParseError& e) {
            throw std::invalid_argument("line " + std::to_string(no) + ", " + e.what());
        }
    }
    return out;
}

inline std::vector<CorpusEntry> load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open claim corpus " + path);
    return parse_corpus(in);
}

/// Checks every claim; claims are spread over `threads` workers.
inline IdentityReport check_corpus(const std::vector<CorpusEntry>& corpus, Int N, unsigned threads = 1) {
    IdentityReport total;
    total.checked_range = N;
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, corpus.size()))));
    std::vector<IdentityReport> parts(corpus.size());
    std::vector<std::string> errors(corpus.size());
    const auto work = [&](unsigned w) {
        for (std::size_t k = w; k < corpus.size(); k += threads) {
            try {
                parts[k] = check(corpus[k].claim, N);
            } catch (const EvalError& e) {
                errors[k] = e.what();
                parts[k].fail(print(corpus[k].claim), e.n(), std::string("evaluation error ") + e.what());
            }
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }
    for (const auto& p : parts) total.merge(p);
    return total;
}

}  // namespace fibpart::dsl
