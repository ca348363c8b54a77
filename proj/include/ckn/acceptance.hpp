#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ckn {

// Options for the release-gate criteria suite (the `verify` verb).
struct SuiteOptions {
    // Fault-injection hook: flips the sign of the pressure-term exponent in
    // the scaled cylinder functional. The scale-invariance criterion must
    // fail when this is set; any other behavior is itself a defect.
    bool inject_m_defect = false;
    // Criterion ids (1-based) to execute; empty runs all. Unselected
    // criteria are still listed, marked SKIP.
    std::vector<int> only;
    // Path to the command-line binary, used by the determinism criterion to
    // drive end-to-end subprocess runs. Empty: $CKN_CLI_PATH, then the
    // current executable.
    std::string cli_path;
};

struct CriterionOutcome {
    int id = 0;
    std::string name;
    bool ran = false;
    bool pass = false;     // meaningful only when ran
    std::string detail;    // measured values against the pinned tolerances
    double seconds = 0.0;
};

struct SuiteReport {
    std::vector<CriterionOutcome> outcomes; // one entry per criterion, in id order
    int ran_count = 0;
    int pass_count = 0;
    bool all_pass = false; // every executed criterion passed
};

// Runs the criteria suite, printing exactly one line per criterion id plus a
// summary line to `out`. Never throws for criterion failures; infrastructure
// errors inside a criterion are caught and reported as that criterion's
// failure.
SuiteReport run_criteria(const SuiteOptions& opt, std::ostream& out);

} // namespace ckn
