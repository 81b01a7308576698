#include "fibpart/permutations.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace fibpart;

namespace {

const PiecewisePermutation& P(const char* name) { return builtin_perm(name); }

std::vector<Int> values(const PiecewisePermutation& p, int count) {
    std::vector<Int> v;
    for (Int n = 1; n <= count; ++n) v.push_back(p(n));
    return v;
}

Int power(const PiecewisePermutation& p, int k, Int n) {
    for (int s = 0; s < k; ++s) n = p(n);
    return n;
}

constexpr Int kRange = 100000;

}  // namespace

TEST(PermEval, Examples) {
    EXPECT_EQ(values(P("f"), 5), (std::vector<Int>{2, 1, 5, 7, 3}));
    EXPECT_EQ(P("h")(4), 1);
    EXPECT_EQ(P("i")(7), 16);
    EXPECT_EQ(values(P("g"), 6), (std::vector<Int>{2, 1, 4, 3, 6, 5}));
    EXPECT_EQ(values(P("h3"), 4), (std::vector<Int>{4, 1, 2, 3}));
    EXPECT_EQ(values(P("jinv"), 5), (std::vector<Int>{1, 2, 4, 6, 3}));
    EXPECT_THROW(P("f")(0), MalformedPermutation);
    EXPECT_THROW(builtin_perm("nope"), std::invalid_argument);
}

TEST(PermEval, Compositions) {
    std::vector<Int> hh, iii;
    for (Int n = 1; n <= 5; ++n) hh.push_back(compose_eval(P("h"), P("h"), n));
    for (Int n = 1; n <= 4; ++n) iii.push_back(power(P("i"), 3, n));
    EXPECT_EQ(hh, (std::vector<Int>{3, 4, 1, 2, 12}));
    EXPECT_EQ(iii, (std::vector<Int>{1, 2, 3, 8}));
}

TEST(PermEval, PrintedPrefixes) {
    std::ifstream in(std::string(FIBPART_SOURCE_DIR) + "/tests/golden/perm_prefixes.txt");
    ASSERT_TRUE(in);
    std::string line;
    int seen = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string name;
        ls >> name;
        std::vector<Int> want;
        for (long long v; ls >> v;) want.push_back(v);
        EXPECT_EQ(values(builtin_perm(name), 20), want) << name;
        ++seen;
    }
    EXPECT_EQ(seen, 12);
}

TEST(Catalog, BlocksPartition) {
    for (const auto& [name, p] : builtin_perms()) EXPECT_TRUE(verify_partition(p.blocks(), kRange, 10, 2).ok()) << name;
}

TEST(Catalog, TupleRoundTrip) {
    for (const auto& [name, p] : builtin_perms()) {
        const auto text = format_tuples(p.pieces());
        EXPECT_EQ(format_tuples(parse_tuples(text)), text) << name;
    }
    EXPECT_THROW(parse_tuples("(1,0,1,0)"), std::invalid_argument);
    EXPECT_THROW(parse_tuples(""), std::invalid_argument);
}

TEST(Catalog, MalformedPiecesRejected) {
    // the two f pieces on overlapping blocks
    EXPECT_THROW(PiecewisePermutation(parse_tuples("(1,0,1,0,0);(1,-1,0,0,0)")), MalformedPermutation);
    // A alone leaves B uncovered
    EXPECT_THROW(PiecewisePermutation(parse_tuples("(1,0,1,0,0)")), MalformedPermutation);
}

TEST(Relations, InvolutionsAndOrders) {
    for (Int n = 1; n <= kRange; ++n) {
        ASSERT_EQ(power(P("f"), 2, n), n);
        ASSERT_EQ(power(P("g"), 2, n), n);
        ASSERT_EQ(power(P("h"), 4, n), n);
        ASSERT_EQ(power(P("i"), 6, n), n);
    }
}

TEST(Relations, PowersMatchComposition) {
    for (Int n = 1; n <= kRange; ++n) {
        ASSERT_EQ(P("h2")(n), power(P("h"), 2, n)) << to_string(n);
        ASSERT_EQ(P("h3")(n), power(P("h"), 3, n)) << to_string(n);
        ASSERT_EQ(P("i2")(n), power(P("i"), 2, n)) << to_string(n);
        ASSERT_EQ(P("i3")(n), power(P("i"), 3, n)) << to_string(n);
        ASSERT_EQ(P("i4")(n), power(P("i"), 4, n)) << to_string(n);
        ASSERT_EQ(P("i5")(n), power(P("i"), 5, n)) << to_string(n);
    }
}

TEST(Relations, Dihedral) {
    for (Int n = 1; n <= kRange; ++n) {
        ASSERT_EQ(P("f")(P("j")(n)), P("jinv")(P("f")(n))) << to_string(n);
        ASSERT_EQ(P("j")(P("jinv")(n)), n);
        ASSERT_EQ(P("jinv")(P("j")(n)), n);
    }
}

TEST(DetectOrder, Examples) {
    EXPECT_EQ(detect_order(P("f"), 10000, 10).order, 2);
    EXPECT_EQ(detect_order(P("g"), 10000, 10).order, 2);
    EXPECT_EQ(detect_order(P("h"), 10000, 10).order, 4);
    EXPECT_EQ(detect_order(P("i"), 10000, 10).order, 6);
    const auto j = detect_order(P("j"), 10000, 10);
    EXPECT_FALSE(j.order);
    EXPECT_NE(j.label().find("> 10"), std::string::npos);
}

TEST(Bijection, Prefix) {
    const auto r = verify_bijection_prefix(P("f"), kRange);
    EXPECT_TRUE(r.ok());
    EXPECT_GE(r.metrics.at("covered_prefix"), 61000);
    for (Int n = 1; n <= 1000; ++n) EXPECT_EQ(power(P("f"), 2, n), n);
    // f with the constant of its second piece shifted by one
    const PiecewisePermutation bad(parse_tuples("(1,0,1,0,0);(1,-1,1,1,0)"), "bad", 0);
    EXPECT_FALSE(verify_bijection_prefix(bad, 1000).ok());
}

TEST(Bijection, MissedValuesAreCaught) {
    for (const auto& [name, perm] : builtin_perms()) {
        const auto r = verify_bijection_prefix(perm, 5000);
        EXPECT_TRUE(r.ok()) << name;
        EXPECT_GT(r.metrics.at("surjectivity_bound"), 1000) << name;
    }
    // injective, but 1, 2, 5, 6, 7 and 10 are never hit
    const PiecewisePermutation shifted(parse_tuples("(1,0,1,1,0);(1,1,1,0,0)"), "shifted");
    const auto r = verify_bijection_prefix(shifted, 1000);
    EXPECT_EQ(r.pass_counts.at("injective"), 1000);
    ASSERT_FALSE(r.ok());
    EXPECT_EQ(r.first_failure()->identity, "surjective");
    EXPECT_EQ(r.first_failure()->witness, 1);
    EXPECT_EQ(r.metrics.at("covered_prefix"), 0);
}

TEST(InfiniteOrder, OrbitOfThree) {
    EXPECT_TRUE(verify_infinite_order_witness(80).ok());
    Int x = 3;
    for (int n = 1; n <= 40; ++n) x = P("j")(x);
    EXPECT_EQ(x, fib(43) + 2);
}
