// Acceptance gate: runs every check suite once and prints one PASS/FAIL line
// per criterion. Exit code = number of failed checks (same convention as
// `hbargeo verify`).
#include <cstdio>
#include <filesystem>
#include <string>

#include "hbargeo/verify.hpp"

int main(int argc, char** argv) {
    std::uint64_t seed = 20240817ull;
    if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
    std::filesystem::path scratch = std::filesystem::temp_directory_path() / "hbargeo_acceptance";
    std::filesystem::create_directories(scratch);

    std::vector<hbargeo::CheckResult> checks;
    try {
        checks = hbargeo::run_suites({"all"}, seed, scratch.string());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance driver error: %s\n", e.what());
        return 125;
    }

    int failed = 0;
    for (const auto& c : checks) {
        if (!c.passed) ++failed;
        std::printf("[%s] criterion %2d (%s): %s — measured %.6g, required %s %.6g  (%.1fs)\n",
                    c.passed ? "PASS" : "FAIL", c.criterion, c.suite.c_str(), c.name.c_str(),
                    c.measured, c.cmp.c_str(), c.required, c.elapsed_s);
        if (!c.passed && !c.detail.empty()) std::printf("       %s\n", c.detail.c_str());
    }
    std::printf("%d/%zu acceptance checks passed\n", static_cast<int>(checks.size()) - failed,
                checks.size());
    return failed > 125 ? 125 : failed;
}
