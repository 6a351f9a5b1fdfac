// verify.hpp — the acceptance-criteria suites, shared by the CLI `verify`
// subcommand and the standalone acceptance binary.
//
// Each criterion is one check; a check may aggregate several sub-assertions
// (all must hold) and carries a headline measured-vs-required pair plus a
// human-readable detail string with the sub-measurements.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hbargeo {

struct CheckResult {
    int criterion{0};          // 1..10
    std::string suite;         // suite name (see available_suites)
    std::string name;          // short label
    bool passed{false};
    double measured{0.0};      // headline measurement
    double required{0.0};      // headline threshold
    std::string cmp;           // comparison direction, e.g. "<="
    std::string detail;        // sub-measurements / failure diagnostics
    double elapsed_s{0.0};
};

// Suite catalog: one suite per criterion plus "all".
std::vector<std::string> available_suites();

// Runs the named suites in criterion order. Unknown names throw
// ConfigError("UnknownSuite") whose message lists the catalog. scratch_dir is
// used by the determinism suite for artifact byte-comparison runs.
std::vector<CheckResult> run_suites(const std::vector<std::string>& suites, std::uint64_t seed,
                                    const std::string& scratch_dir);

}  // namespace hbargeo
