#include "fibpart/oeis.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <random>

using namespace fibpart;
using namespace fibpart::oeis;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = fs::path(FIBPART_SOURCE_DIR) / "data" / "oeis";

Fetcher forbidden(bool& called) {
    return [&called](const std::string& id) -> std::string {
        called = true;
        throw FetchError("network use in an offline test (" + id + ")");
    };
}

class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = fs::temp_directory_path() / ("fibpart_oeis_" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

// Restores FIBPART_OFFLINE on scope exit.
class OfflineEnv {
public:
    explicit OfflineEnv(const char* value) {
        if (const char* v = std::getenv("FIBPART_OFFLINE")) saved_ = v;
        if (value) setenv("FIBPART_OFFLINE", value, 1);
        else unsetenv("FIBPART_OFFLINE");
    }
    ~OfflineEnv() {
        if (saved_) setenv("FIBPART_OFFLINE", saved_->c_str(), 1);
        else unsetenv("FIBPART_OFFLINE");
    }

private:
    std::optional<std::string> saved_;
};

}  // namespace

TEST(Bfile, ParsesCommentsAndBlanks) {
    const auto b = parse_bfile("# A000201 test\n\n1 1\n2 3\r\n  # another comment\n3 4\n", "A000201");
    ASSERT_EQ(b.terms.size(), 3u);
    EXPECT_EQ(b.terms[0], (std::pair<Int, Int>{1, 1}));
    EXPECT_EQ(b.values(), (std::vector<Int>{1, 3, 4}));
}

TEST(Bfile, RejectsMalformedLinesWithLineNumbers) {
    try {
        parse_bfile("1 1\n2 3\n4 6\n");
        FAIL() << "gap accepted";
    } catch (const BfileParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    try {
        parse_bfile("# header\n1 x\n");
        FAIL() << "junk accepted";
    } catch (const BfileParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    EXPECT_THROW(parse_bfile("1 1 1\n"), BfileParseError);
    EXPECT_THROW(parse_bfile("1\n"), BfileParseError);
}

TEST(Bfile, NormalizeId) {
    EXPECT_EQ(normalize_id("A201"), "A000201");
    EXPECT_EQ(normalize_id("19444"), "A019444");
    EXPECT_EQ(normalize_id("a002251"), "A002251");
    EXPECT_THROW(normalize_id("B12"), std::invalid_argument);
    EXPECT_THROW(normalize_id("A1234567"), std::invalid_argument);
}

TEST(Cache, ReadsCommittedFixture) {
    bool called = false;
    BfileCache cache(kFixtures, FetchPolicy::OfflineOnly, forbidden(called));
    const auto b = cache.get("A000201");
    ASSERT_GE(b.terms.size(), 5u);
    const auto v = b.values();
    EXPECT_EQ(std::vector<Int>(v.begin(), v.begin() + 5), (std::vector<Int>{1, 3, 4, 6, 8}));
    EXPECT_FALSE(called);
}

TEST(Cache, MissingIdOfflineIsCacheMiss) {
    bool called = false;
    BfileCache cache(kFixtures, FetchPolicy::OfflineOnly, forbidden(called));
    EXPECT_THROW(cache.get("A999999"), CacheMiss);
    EXPECT_FALSE(called);
}

TEST(Cache, OfflineGuardOverridesFetchPolicy) {
    OfflineEnv env("1");
    bool called = false;
    TempDir dir;
    BfileCache cache(dir.path(), FetchPolicy::FetchIfMissing, forbidden(called));
    EXPECT_EQ(cache.policy(), FetchPolicy::OfflineOnly);
    EXPECT_THROW(cache.get("A000045"), CacheMiss);
    EXPECT_FALSE(called);
}

TEST(Cache, FetchWritesOnceAndReuses) {
    OfflineEnv env(nullptr);
    TempDir dir;
    int calls = 0;
    BfileCache cache(dir.path(), FetchPolicy::FetchIfMissing, [&](const std::string& id) {
        ++calls;
        EXPECT_EQ(id, "A000045");
        return std::string("# fib\n0 0\n1 1\n2 1\n3 2\n");
    });
    EXPECT_EQ(cache.get("45").values(), (std::vector<Int>{0, 1, 1, 2}));
    EXPECT_TRUE(cache.has("A000045"));
    EXPECT_EQ(cache.get("A000045").values(), (std::vector<Int>{0, 1, 1, 2}));
    EXPECT_EQ(calls, 1);
    EXPECT_FALSE(fs::exists(cache.path_for("A000045").string() + ".tmp"));

    BfileCache no_fetcher(dir.path(), FetchPolicy::FetchIfMissing);
    EXPECT_THROW(no_fetcher.get("A000046"), FetchError);
}

TEST(Cache, FailedFetchLeavesNoFile) {
    OfflineEnv env(nullptr);
    TempDir dir;
    BfileCache cache(dir.path(), FetchPolicy::FetchIfMissing, [](const std::string&) -> std::string { return "1 1\n3 2\n"; });
    EXPECT_THROW(cache.get("A000001"), BfileParseError);
    EXPECT_FALSE(cache.has("A000001"));
}

TEST(Transforms, Apply) {
    const std::vector<Int> s{5, 6, 7};
    EXPECT_EQ(Transform::identity().apply(s), s);
    EXPECT_EQ(Transform::prepend({1, 2}).apply(s), (std::vector<Int>{1, 2, 5, 6, 7}));
    EXPECT_EQ(Transform::drop_first(1).apply(s), (std::vector<Int>{6, 7}));
    EXPECT_EQ(Transform::add_constant(1).apply(s), (std::vector<Int>{6, 7, 8}));
    EXPECT_EQ(Transform::prepend({1, 2}).source_length(10), 8u);
    EXPECT_EQ(Transform::drop_first(3).source_length(10), 13u);
    for (const auto& t : {Transform::identity(), Transform::prepend({1, 2}), Transform::drop_first(2), Transform::add_constant(-3)}) {
        EXPECT_EQ(transform_from_json(to_json(t)).describe(), t.describe());
    }
}

TEST(CrossCheck, Examples) {
    bool called = false;
    BfileCache cache(kFixtures, FetchPolicy::OfflineOnly, forbidden(called));
    EXPECT_TRUE(crosscheck({"A003622", GbsGenerator{{1, 1}}, Transform::identity(), 100}, cache).ok());
    EXPECT_TRUE(crosscheck({"A026351", GbsGenerator{{0, -1}}, Transform::prepend({1}), 100}, cache).ok());
    EXPECT_TRUE(crosscheck({"A019444", Row2Generator{}, Transform::add_constant(1), 100}, cache).ok());
    EXPECT_FALSE(called);
}

TEST(CrossCheck, MismatchAndShortfallAreDistinct) {
    const auto b = parse_bfile("1 1\n2 3\n3 4\n4 6\n5 9\n", "A000201");
    const auto bad = crosscheck({"A000201", GbsGenerator{{0, 0}}, Transform::identity(), 5}, b);
    EXPECT_EQ(bad.status, Status::Mismatch);
    EXPECT_EQ(bad.mismatch_index, 4u);
    EXPECT_EQ(bad.expected, 9);
    EXPECT_EQ(bad.got, 8);
    const auto short_ = crosscheck({"A000201", GbsGenerator{{0, 0}}, Transform::identity(), 50}, b);
    EXPECT_EQ(short_.status, Status::Shortfall);
    EXPECT_EQ(short_.available, 5u);
    EXPECT_TRUE(crosscheck({"A000201", GbsGenerator{{0, 0}}, Transform::identity(), 4}, b).ok());
    EXPECT_EQ(to_json(bad)["status"], "mismatch");
}

TEST(Manifest, AllCasesPassOffline) {
    bool called = false;
    BfileCache cache(kFixtures, FetchPolicy::OfflineOnly, forbidden(called));
    const auto cases = load_manifest(kFixtures / "manifest.json");
    std::set<std::string> ids;
    for (const auto& c : cases) {
        ids.insert(c.id);
        EXPECT_GE(c.length, 50u) << c.id;
        const auto r = crosscheck(c, cache);
        EXPECT_TRUE(r.ok()) << c.id << " " << to_json(r).dump();
    }
    EXPECT_FALSE(called);
    for (const char* id : {"A000201", "A001950", "A003622", "A026351", "A035336", "A101864", "A002251", "A019444"}) {
        EXPECT_TRUE(ids.count(id)) << id;
    }
    EXPECT_EQ(ids.size(), cases.size());
}

TEST(Manifest, RoundTripAndBadKinds) {
    const auto cases = load_manifest(kFixtures / "manifest.json");
    for (const auto& c : cases) {
        EXPECT_EQ(to_json(generator_from_json(to_json(c.generator))), to_json(c.generator));
    }
    EXPECT_THROW(generator_from_json({{"kind", "nope"}}), std::invalid_argument);
    EXPECT_THROW(transform_from_json({{"kind", "reverse"}}), std::invalid_argument);
    EXPECT_EQ(describe(Generator{PermGenerator{"f"}}).empty(), false);
    EXPECT_EQ(generate(Generator{PermGenerator{"f"}}, 5), (std::vector<Int>{2, 1, 5, 7, 3}));
}
