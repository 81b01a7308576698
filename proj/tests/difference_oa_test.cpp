#include "fibpart/difference_oa.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <sstream>

using namespace fibpart;

namespace {

// Strength-t check by brute force: count tuples per column subset in a map.
bool oa_oracle(const Array2D& a, std::int64_t s, int t, std::int64_t lambda) {
    const std::size_t k = a.front().size();
    std::int64_t cells = 1;
    for (int q = 0; q < t; ++q) cells *= s;
    if (static_cast<std::int64_t>(a.size()) != lambda * cells) return false;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
        if (__builtin_popcountll(mask) != t) continue;
        std::map<std::vector<std::int64_t>, std::int64_t> counts;
        for (const auto& row : a) {
            std::vector<std::int64_t> key;
            for (std::size_t c = 0; c < k; ++c) {
                if (mask >> c & 1) key.push_back(row[c]);
            }
            ++counts[key];
        }
        if (static_cast<std::int64_t>(counts.size()) != cells) return false;
        for (const auto& [key, c] : counts) {
            if (c != lambda) return false;
        }
    }
    return true;
}

// Random m x n matrices over Z_n that happen to be difference matrices.
Array2D random_dm(std::mt19937_64& rng, std::int64_t n, std::size_t m) {
    std::uniform_int_distribution<std::int64_t> sym(0, n - 1);
    for (;;) {
        Array2D D(m, std::vector<std::int64_t>(static_cast<std::size_t>(n)));
        for (auto& row : D) {
            for (auto& x : row) x = sym(rng);
        }
        if (verify_difference_matrix(D, n).ok()) return D;
    }
}

}  // namespace

TEST(VerifyOa, PrintedExample) {
    const auto oa = example_oa_4_3();
    const auto r = verify_oa(oa);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.subsets_checked, 6u);
    EXPECT_TRUE(oa_oracle(oa.entries, 3, 2, 1));
}

TEST(VerifyOa, PerturbedEntryFails) {
    auto oa = example_oa_4_3();
    oa.entries[4][2] = 2;
    const auto r = verify_oa(oa);
    EXPECT_FALSE(r.ok());
    ASSERT_FALSE(r.violations.empty());
    EXPECT_FALSE(oa_oracle(oa.entries, 3, 2, 1));
    const auto& v = r.violations.front();
    EXPECT_EQ(v.columns.size(), 2u);
    EXPECT_NE(v.count, 1);
}

TEST(VerifyOa, StrengthZeroAndSizeGuard) {
    EXPECT_TRUE(verify_oa(Array2D{{0, 0, 0}}, 1, 0, 1).ok());
    const auto r = verify_oa(Array2D{{0, 0}, {1, 1}, {0, 1}}, 2, 2, 1);
    EXPECT_FALSE(r.size_ok);
    EXPECT_EQ(r.subsets_checked, 0u);
    EXPECT_THROW(verify_oa(Array2D{{0, 3}}, 2, 1, 1), std::domain_error);
    EXPECT_THROW(verify_oa(Array2D{{0, 1}, {0}}, 2, 1, 1), std::invalid_argument);
}

TEST(VerifyOa, ThreadedMatchesSerial) {
    const auto oa = dm_to_oa(field_dm(7), 7);
    const auto serial = verify_oa(oa, 1);
    const auto threaded = verify_oa(oa, 4);
    EXPECT_TRUE(serial.ok());
    EXPECT_EQ(serial.subsets_checked, threaded.subsets_checked);
    EXPECT_EQ(serial.violation_count, threaded.violation_count);
}

TEST(DifferenceMatrix, Examples) {
    const Array2D z3{{0, 0, 0}, {0, 1, 2}, {0, 2, 1}};
    EXPECT_TRUE(verify_difference_matrix(z3, 3).ok());
    EXPECT_EQ(verify_difference_matrix(z3, 3).verdict(), "difference matrix");
    const auto bad = verify_difference_matrix(Array2D{{0, 0, 0}, {0, 0, 0}}, 3);
    EXPECT_FALSE(bad.ok());
    EXPECT_EQ(bad.pair(0, 1).wrong_counts.front(), (std::pair<std::int64_t, std::int64_t>{0, 3}));
    EXPECT_THROW(verify_difference_matrix(Array2D{{0, 1}, {0, 1}}, 3), std::invalid_argument);
    EXPECT_THROW(verify_difference_matrix(Array2D{{0, 1, 2}}, 3), std::invalid_argument);
}

TEST(FieldDm, Examples) {
    EXPECT_EQ(field_dm(3), (Array2D{{0, 0, 0}, {0, 1, 2}, {0, 2, 1}}));
    EXPECT_EQ(field_dm(2), (Array2D{{0, 0}, {0, 1}}));
    EXPECT_EQ(field_dm(5, 3).size(), 3u);
    for (std::int64_t p : {2, 3, 5, 7, 11, 13}) {
        EXPECT_TRUE(verify_difference_matrix(field_dm(p), p).ok()) << p;
        const auto oa = dm_to_oa(field_dm(p), p);
        EXPECT_EQ(oa.runs, static_cast<std::size_t>(p * p));
        EXPECT_EQ(oa.strength, 2);
        EXPECT_EQ(oa.index, 1);
        EXPECT_TRUE(verify_oa(oa).ok()) << p;
    }
    EXPECT_THROW(field_dm(6), std::invalid_argument);
    EXPECT_THROW(field_dm(5, 6), std::invalid_argument);
}

TEST(DmToOa, SingleRowAndUnboundedInput) {
    const auto oa = dm_to_oa(Array2D{{0, 1, 2}}, 3);
    EXPECT_EQ(oa.factors, 1u);
    EXPECT_TRUE(verify_oa(oa).ok());
    // rows of the mex matrix prefix are unbounded integers, not elements of Z_n
    const Array2D mex_rows{{0, 1, 2, 3}, {0, 2, 1, 5}, {0, 3, 5, 1}};
    for (std::int64_t n : {2, 3, 4, 5}) EXPECT_THROW(dm_to_oa(mex_rows, n), std::domain_error);
}

TEST(DmToOa, RandomDifferenceMatricesGiveArrays) {
    std::mt19937_64 rng(7);
    int trials = 0;
    for (std::int64_t n = 2; n <= 5; ++n) {
        // Z_n of even order has no three-row difference matrix
        for (std::size_t m = 2; m <= (n % 2 ? 3u : 2u); ++m) {
            for (int rep = 0; rep < 25; ++rep) {
                const auto D = random_dm(rng, n, m);
                const auto oa = dm_to_oa(D, n);
                ASSERT_TRUE(verify_oa(oa).ok());
                ASSERT_TRUE(oa_oracle(oa.entries, n, 2, 1));
                ++trials;
            }
        }
    }
    EXPECT_EQ(trials, 150);
}

TEST(DmToOa, SymbolTranslationPreservesRuns) {
    std::mt19937_64 rng(11);
    for (std::int64_t n : {3, 4, 5}) {
        const auto oa = dm_to_oa(random_dm(rng, n, 2), n);
        for (std::int64_t g = 0; g < n; ++g) EXPECT_TRUE(same_runs(translate_symbols(oa, g), oa));
    }
    auto oa = example_oa_4_3();
    auto other = oa;
    other.entries[0][0] = 1;
    EXPECT_FALSE(same_runs(oa, other));
}

TEST(PrefixMode, MexMatrixRows) {
    const auto r = prefix_dm_check(generate(6, 2000), 2000);
    EXPECT_TRUE(r.prefix_mode);
    EXPECT_EQ(r.group, "Z");
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.verdict().rfind("evidence", 0), 0u);
    EXPECT_GT(r.pair(1, 2).radius, 0);
}

TEST(Csv, OaRoundTrip) {
    const auto oa = example_oa_4_3();
    std::stringstream ss;
    write_oa_csv(oa, ss);
    const auto back = read_oa_csv(ss);
    EXPECT_EQ(back.entries, oa.entries);
    EXPECT_EQ(back.levels, 3);
    EXPECT_EQ(back.strength, 2);
    std::stringstream bad("# oa 9 4 3 2 1\n0,0,0,0\n");
    EXPECT_THROW(read_oa_csv(bad), std::invalid_argument);
}

TEST(Csv, DmRoundTrip) {
    const auto D = field_dm(5);
    std::stringstream ss;
    write_dm_csv(D, 5, 1, ss);
    const auto back = read_dm_csv(ss);
    EXPECT_EQ(back.entries, D);
    EXPECT_EQ(back.n, 5);
    EXPECT_EQ(back.group, "Z_5");
    std::stringstream other("# dm 5 2 1 S_3\n0,0,0,0,0\n0,1,2,3,4\n");
    EXPECT_THROW(read_dm_csv(other), std::invalid_argument);
}

TEST(Json, Reports) {
    const auto j = to_json(verify_difference_matrix(field_dm(3), 3));
    EXPECT_EQ(j["group"], "Z_3");
    EXPECT_EQ(to_json(verify_oa(example_oa_4_3()))["size_ok"], true);
}
