#pragma once

// Result record shared by every bounded verifier in the library.

#include "fibpart/wythoff.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace fibpart {

struct Violation {
    std::string identity;
    Int witness = 0;
    std::string detail;
};

/// Outcome of checking one or more named statements over a bounded range.
/// Every violation is counted; only the first `cap` are kept as witnesses.
struct IdentityReport {
    Int checked_range = 0;
    std::size_t cap = 10;
    std::size_t violation_count = 0;
    std::vector<Violation> failures;
    std::map<std::string, Int> pass_counts;
    std::map<std::string, Int> metrics;  // extra numbers a checker wants to surface

    bool ok() const { return violation_count == 0; }

    void pass(const std::string& identity, Int times = 1) { pass_counts[identity] += times; }

    void fail(const std::string& identity, Int witness, std::string detail = {}) {
        ++violation_count;
        pass_counts.try_emplace(identity, 0);
        if (failures.size() < cap) failures.push_back({identity, witness, std::move(detail)});
    }

    /// Records one evaluation of `identity` at `witness`.
    void check(bool holds, const std::string& identity, Int witness, const std::string& detail = {}) {
        if (holds) {
            pass(identity);
        } else {
            fail(identity, witness, detail);
        }
    }

    /// Associative combination of reports over disjoint sub-ranges.
    void merge(const IdentityReport& other) {
        checked_range = std::max(checked_range, other.checked_range);
        violation_count += other.violation_count;
        for (const auto& v : other.failures) {
            if (failures.size() < cap) failures.push_back(v);
        }
        for (const auto& [name, count] : other.pass_counts) pass_counts[name] += count;
        for (const auto& [name, value] : other.metrics) metrics[name] = value;
    }

    const Violation* first_failure() const { return failures.empty() ? nullptr : &failures.front(); }
};

inline nlohmann::json to_json(const IdentityReport& r) {
    nlohmann::json j;
    j["ok"] = r.ok();
    j["checked_range"] = to_string(r.checked_range);
    j["violation_count"] = r.violation_count;
    auto& fails = j["failures"] = nlohmann::json::array();
    for (const auto& v : r.failures) {
        fails.push_back({{"identity", v.identity}, {"witness", to_string(v.witness)}, {"detail", v.detail}});
    }
    auto& passes = j["pass_counts"] = nlohmann::json::object();
    for (const auto& [name, count] : r.pass_counts) passes[name] = to_string(count);
    auto& metrics = j["metrics"] = nlohmann::json::object();
    for (const auto& [name, value] : r.metrics) metrics[name] = to_string(value);
    return j;
}

}  // namespace fibpart
