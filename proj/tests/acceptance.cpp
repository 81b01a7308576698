// Runs the ten reproduction checks and prints one PASS/FAIL line per check.
// Usage: acceptance [--cols N] [--json PATH]

#include "fibpart/acceptance.hpp"

#include <cstring>
#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
    using namespace fibpart::acceptance;
    auto cfg = default_config();
    const char* json_path = nullptr;
    for (int k = 1; k < argc; ++k) {
        if (!std::strcmp(argv[k], "--cols") && k + 1 < argc) {
            cfg.coverage_cols = std::stoul(argv[++k]);
        } else if (!std::strcmp(argv[k], "--json") && k + 1 < argc) {
            json_path = argv[++k];
        } else {
            std::cerr << "usage: acceptance [--cols N] [--json PATH]\n";
            return 2;
        }
    }
    Context ctx(cfg);
    nlohmann::json all = nlohmann::json::array();
    int failed = 0;
    for (const auto& e : all_checks()) {
        const auto r = e.run(ctx);
        std::cout << r.line() << std::endl;
        failed += r.passed ? 0 : 1;
        all.push_back({{"number", r.number}, {"name", r.name}, {"passed", r.passed}, {"summary", r.summary}, {"details", r.details}});
    }
    std::cout << (failed ? std::to_string(failed) + " of 10 checks failed" : std::string("all 10 checks passed")) << std::endl;
    if (json_path) std::ofstream(json_path) << all.dump(2) << '\n';
    return failed ? 1 : 0;
}
