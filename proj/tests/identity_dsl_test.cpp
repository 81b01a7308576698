#include "fibpart/identity_dsl.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace fibpart;
using namespace fibpart::dsl;

namespace {

std::size_t error_offset(const std::string& text) {
    try {
        parse_claim(text);
    } catch (const ParseError& e) {
        return e.offset();
    }
    ADD_FAILURE() << "parsed: " << text;
    return 0;
}

Expr lit(Int v) { return Expr{Op::Lit, v}; }

// Random well-formed expression of bounded depth.
Expr random_expr(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 11);
    std::uniform_int_distribution<int> small(-5, 9);
    Expr e;
    switch (pick(rng)) {
        case 0: return lit(std::uniform_int_distribution<int>(0, 9)(rng));  // negatives come from Neg
        case 1: e.op = Op::Var; return e;
        case 2: e.op = Op::Neg; break;
        case 3: e.op = Op::Add; break;
        case 4: e.op = Op::Sub; break;
        case 5: e.op = Op::Mul; break;
        case 6: e.op = Op::A; break;
        case 7: e.op = Op::B; break;
        case 8: e.op = Op::Fib; break;
        case 9:
            e.op = Op::F;
            e.i = std::uniform_int_distribution<int>(-1, 4)(rng);
            e.j = small(rng);
            break;
        case 10:
            e.op = Op::FloorPhi;
            e.p = small(rng);
            e.q = small(rng);
            e.r = small(rng);
            break;
        default:
            e.op = Op::Perm;
            e.name = "jinv";
            break;
    }
    const int arity = (e.op == Op::Add || e.op == Op::Sub || e.op == Op::Mul) ? 2 : 1;
    for (int k = 0; k < arity; ++k) e.args.push_back(random_expr(rng, depth - 1));
    return e;
}

}  // namespace

TEST(Parse, Examples) {
    const auto c = parse_claim("a(a(n)) = a(n) + n - 1");
    EXPECT_EQ(c.lhs.op, Op::A);
    EXPECT_EQ(c.rhs.op, Op::Sub);
    EXPECT_FALSE(c.guard);
    const auto d = parse_claim("f[1,1](n) + 1 = f[1,0](n)");
    EXPECT_EQ(d.lhs.args.at(0).op, Op::F);
    EXPECT_EQ(d.lhs.args.at(0).i, 1);
    EXPECT_EQ(d.lhs.args.at(0).j, 1);
    const auto g = parse_claim("perm[j](perm[j](perm[j](n))) = n + 1, n in R[1,0]");
    ASSERT_TRUE(g.guard);
    EXPECT_EQ(g.guard->kind, GuardKind::Range);
    EXPECT_EQ(g.guard->block, (GbsBlock{1, 0}));
    EXPECT_EQ(std::get<Expr>(parse("2*n - 1")).op, Op::Sub);
    EXPECT_TRUE(std::holds_alternative<Claim>(parse("n = n")));
}

TEST(Parse, Precedence) {
    EXPECT_EQ(eval(parse_expr("2 + 3*n"), 4), 14);
    EXPECT_EQ(eval(parse_expr("(2 + 3)*n"), 4), 20);
    EXPECT_EQ(eval(parse_expr("10 - 3 - 2"), 1), 5);
    EXPECT_EQ(eval(parse_expr("-n*2"), 3), -6);
    EXPECT_EQ(eval(parse_expr("- -n"), 3), 3);
}

TEST(Parse, ErrorsCarryOffsets) {
    EXPECT_EQ(error_offset("a(n = 3"), 4u);
    EXPECT_EQ(error_offset("g(n) = n"), 0u);
    EXPECT_EQ(error_offset("f[1,x](n) = n"), 4u);
    EXPECT_EQ(error_offset("n = "), 4u);
    EXPECT_EQ(error_offset("n = n, n in C"), 12u);
    try {
        parse_claim("a(n = 3");
    } catch (const ParseError& e) {
        EXPECT_FALSE(e.expected().empty());
        EXPECT_NE(std::string(e.what()).find("offset 4"), std::string::npos);
    }
    EXPECT_THROW(parse_expr("n = n"), ParseError);
}

TEST(Eval, MatchesLibraryFunctions) {
    const auto a = parse_expr("a(n)"), b = parse_expr("b(n)"), f = parse_expr("f[2,3](n)"), fl = parse_expr("floorphi(2,-1,3; n)");
    for (Int n = 1; n <= 2000; ++n) {
        ASSERT_EQ(eval(a, n), lower_wythoff(n));
        ASSERT_EQ(eval(b, n), upper_wythoff(n));
        ASSERT_EQ(eval(f, n), gbs_eval({2, 3}, n));
        ASSERT_EQ(eval(fl, n), eval_affine_golden(2, -1, 3, n));
    }
    EXPECT_EQ(eval(parse_expr("fib(n)"), 10), 55);
    EXPECT_EQ(eval(parse_expr("perm[h](n)"), 4), 1);
}

TEST(Eval, ErrorsAreReported) {
    EXPECT_THROW(eval(parse_expr("fib(n)"), 500), EvalError);
    EXPECT_THROW(eval(parse_expr("fib(n - 5)"), 1), EvalError);
    EXPECT_THROW(eval(parse_expr("perm[f](n - 3)"), 1), EvalError);
    EXPECT_THROW(parse_expr("perm[zz](n)"), ParseError);  // unknown names are caught at parse time
    try {
        eval(parse_expr("fib(n)*fib(n)*fib(n)"), 150);
        FAIL();
    } catch (const EvalError& e) {
        EXPECT_EQ(e.n(), 150);
    }
}

TEST(Check, PassAndCounterexample) {
    EXPECT_TRUE(check(parse_claim("a(b(n)) = 2*a(n) + n"), 100000).ok());
    const auto r = check(parse_claim("a(n) = n"), 10);
    ASSERT_FALSE(r.ok());
    EXPECT_EQ(r.first_failure()->witness, 2);
    EXPECT_EQ(r.violation_count, 9u);
}

TEST(Check, GuardedClaims) {
    const std::string body = "perm[j](perm[j](perm[j](n))) = perm[j](perm[j](n)) + perm[j](n) - 2";
    const auto guarded = check(parse_claim(body + ", n in R[1,0]"), 10000);
    EXPECT_TRUE(guarded.ok());
    EXPECT_GT(guarded.metrics.at(body + ", n in R[1,0] guarded_out"), 0);
    EXPECT_FALSE(check(parse_claim(body), 10000).ok());
    EXPECT_TRUE(check(parse_claim("floorphi(1,-1,0; n) + 1 = floorphi(1,-1,0; n + 1), n in A"), 10000).ok());
    EXPECT_FALSE(check(parse_claim("floorphi(1,-1,0; n) + 1 = floorphi(1,-1,0; n + 1)"), 10000).ok());
}

TEST(Print, CanonicalForms) {
    EXPECT_EQ(print(parse_claim("a( a(n) )=a(n)+n-1")), "a(a(n)) = a(n) + n - 1");
    EXPECT_EQ(print(parse_expr("(n - 1) - (2 - n)")), "n - 1 - (2 - n)");
    EXPECT_EQ(print(parse_expr("2*(n + 1)")), "2*(n + 1)");
    EXPECT_EQ(print(parse_expr("floorphi(1, -1, 0; b(n))")), "floorphi(1,-1,0; b(n))");
    EXPECT_EQ(print(parse_claim("n = n,n in R[2,-3]")), "n = n, n in R[2,-3]");
}

TEST(Print, RandomRoundTrip) {
    std::mt19937_64 rng(23);
    for (int k = 0; k < 2000; ++k) {
        const Expr e = random_expr(rng, 4);
        const std::string text = print(e);
        const Expr back = parse_expr(text);
        ASSERT_EQ(print(back), text);
        ASSERT_EQ(back, e) << text;
    }
}

TEST(Corpus, ShippedClaimsHold) {
    const auto corpus = load_corpus(std::string(FIBPART_SOURCE_DIR) + "/data/identities.txt");
    EXPECT_GE(corpus.size(), 60u);
    for (const auto& entry : corpus) {
        EXPECT_EQ(parse_claim(print(entry.claim)), entry.claim) << "line " << entry.line;
        EXPECT_EQ(print(entry.claim), entry.text) << "line " << entry.line << " is not in canonical form";
    }
    const auto r = check_corpus(corpus, 20000, 2);
    EXPECT_TRUE(r.ok()) << to_json(r).dump();
}

TEST(Corpus, ParseErrorsNameTheLine) {
    std::istringstream in("# ok\nn = n\n\na(n = 3\n");
    try {
        parse_corpus(in);
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
    }
}
