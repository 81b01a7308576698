#include "fibpart/mex_matrix.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>

using namespace fibpart;

namespace {

using Rows = std::vector<std::vector<std::int64_t>>;

// The algorithm as written: q[i][j] = mex{ q[i][k] + q[l][j] - q[l][k] : l < i, k < j }.
Rows naive(std::size_t rows, std::size_t cols) {
    Rows q(rows, std::vector<std::int64_t>(cols, 0));
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 1; i < rows; ++i) {
            std::set<std::int64_t> s;
            for (std::size_t l = 0; l < i; ++l) {
                for (std::size_t k = 0; k < j; ++k) s.insert(q[i][k] + q[l][j] - q[l][k]);
            }
            q[i][j] = mex(s);
        }
    }
    return q;
}

Rows read_golden(const std::string& name) {
    std::ifstream in(std::string(FIBPART_SOURCE_DIR) + "/tests/golden/" + name);
    Rows rows;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<std::int64_t> r;
        for (std::int64_t v; ls >> v;) r.push_back(v);
        if (!r.empty()) rows.push_back(r);
    }
    return rows;
}

}  // namespace

TEST(Mex, Examples) {
    EXPECT_EQ(mex(std::vector<std::int64_t>{}), 0);
    EXPECT_EQ(mex({0, 1, 2, 3, 4}), 5);
    EXPECT_EQ(mex({0, 3, 5, 6, 9}), 1);
    EXPECT_EQ(mex({-3, -1, 1}), 0);
    EXPECT_EQ(mex({2, 0, 1, 1, 4}), 3);
}

TEST(Generate, SmallExamples) {
    EXPECT_EQ(generate(3, 4).data(), (Rows{{0, 0, 0, 0}, {0, 1, 2, 3}, {0, 2, 1, 5}, {0, 3, 5, 1}}));
    EXPECT_EQ(generate(3, 4).data(), read_golden("matrix_4x4.txt"));
    EXPECT_EQ(generate(19, 20).data(), read_golden("matrix_20x20.txt"));
}

TEST(Generate, MatchesNaiveAlgorithm) {
    EXPECT_EQ(generate(7, 160).data(), naive(8, 160));
    EXPECT_EQ(generate(24, 40).data(), naive(25, 40));
}

TEST(Generate, MonotoneExtension) {
    const auto small = generate(3, 50);
    const auto big = generate(6, 100);
    EXPECT_EQ(big.truncated(4, 50), small);
}

TEST(Generate, ResumeAgreesWithOneShot) {
    const auto one_shot = generate(5, 1000);
    const auto part = generate(5, 500);
    EXPECT_EQ(generate(5, 1000, &part), one_shot);
    const auto fewer_rows = generate(2, 700);
    EXPECT_EQ(generate(5, 1000, &fewer_rows), one_shot);
    EXPECT_EQ(MexMatrix::from_rows(part.data()), part);
    auto resumed = MexMatrix::from_rows(part.data());
    resumed.generate_to(6, 1000);
    EXPECT_EQ(resumed, one_shot);
}

TEST(AvoidedSet, OracleExamples) {
    const auto m = generate(3, 4);
    EXPECT_EQ(avoided_set_oracle(m, 1, 1), (std::set<std::int64_t>{0}));
    EXPECT_EQ(avoided_set_oracle(m, 2, 2), (std::set<std::int64_t>{0, 2, 3}));
    EXPECT_EQ(avoided_set_oracle(m, 3, 3), (std::set<std::int64_t>{0, 3, 5, 6, 9}));
    EXPECT_TRUE(avoided_set_oracle(m, 0, 3).empty());
    EXPECT_THROW(avoided_set_oracle(m, 1, 2000), std::out_of_range);
}

TEST(AvoidedSet, IncrementalMatchesOracle) {
    MexMatrix eng;
    for (int i = 0; i < 6; ++i) eng.add_row();
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::int64_t>> seen;
    for (std::size_t j = 0; j <= 120; ++j) {
        for (std::size_t i = 0; i < 6; ++i) {
            seen[{i, j}] = eng.avoided_set(i);
            eng.extend_row(i);
        }
    }
    for (const auto& [cell, got] : seen) {
        std::vector<std::int64_t> want;
        for (auto v : avoided_set_oracle(eng, cell.first, cell.second)) {
            if (v >= 0) want.push_back(v);
        }
        ASSERT_EQ(got, want) << "cell " << cell.first << "," << cell.second;
        ASSERT_EQ(eng.at(cell.first, cell.second), mex(want));
    }
}

TEST(ExtendRow, RequiresRowsAbove) {
    MexMatrix m;
    m.add_row();
    m.add_row();
    EXPECT_THROW(m.extend_row(1), std::logic_error);
}

TEST(Row2, ClosedForm) {
    const std::vector<std::int64_t> head{0, 2, 1, 5, 7, 3};
    for (std::int64_t j = 0; j < 6; ++j) EXPECT_EQ(row2_closed_form(j), head[j]);
    EXPECT_EQ(row2_closed_form(19), 31);
    const auto m = generate(2, 10001);
    EXPECT_EQ(row2_closed_form(10000), m.at(2, 10000));
    for (std::int64_t j = 0; j <= 10000; ++j) ASSERT_EQ(row2_closed_form(j), m.at(2, j)) << j;
}

TEST(Row2, Structure) {
    const auto r = verify_row2_structure(100000);
    EXPECT_TRUE(r.ok()) << to_json(r).dump();
    EXPECT_GT(r.metrics.at("row_prefix"), 0);
    EXPECT_GT(r.metrics.at("q_minus_j_radius"), 0);
}

TEST(Coverage, DistinctRowsAndDifferences) {
    const auto m = generate(6, 3000);
    const auto rep = coverage_report(m);
    ASSERT_EQ(rep.row_prefix.size(), 7u);
    EXPECT_EQ(rep.row_prefix[0], 0);
    EXPECT_FALSE(rep.row_distinct[0]);
    EXPECT_EQ(rep.row_prefix[1], 2999);
    for (std::size_t i = 1; i < 7; ++i) EXPECT_TRUE(rep.row_distinct[i]) << i;
    EXPECT_EQ(rep.pairs.size(), 21u);
    for (const auto& p : rep.pairs) {
        EXPECT_TRUE(p.distinct) << p.lower << "," << p.upper;
        if (p.lower == 0) EXPECT_EQ(p.radius, 0);  // differences are -q, never positive
        else EXPECT_GT(p.radius, 0);
    }
}

TEST(Coverage, RadiusHelpers) {
    EXPECT_EQ(consecutive_prefix(std::vector<std::int64_t>{3, 0, 2, 1, 7}), 3);
    EXPECT_EQ(consecutive_prefix(std::vector<std::int64_t>{1, 2}), -1);
    EXPECT_EQ(symmetric_radius(std::vector<std::int64_t>{0, 1, -1, 2, -3}), 1);
    EXPECT_EQ(symmetric_radius(std::vector<std::int64_t>{0, 1, 2}), 0);
}
