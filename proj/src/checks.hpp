#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace omb {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;  // worst observed deviation and its tolerance
};

struct CheckReport {
    std::vector<CheckResult> rows;
    bool all_pass = false;
};

// Cross-route invariant suite: identities that hold for random parameter
// draws regardless of regime, plus oracle equivalences between independent
// implementations of the same quantity. `as_printed` switches the
// three-photon closed form to its uncorrected variant, which must keep the
// covariance checks green but break the equivalence check: the negative
// control demonstrating the suite can actually fail.
CheckReport run_checks(std::uint64_t seed, bool as_printed);

// Fixed-width pass/fail table, one line per check.
std::string format_table(const CheckReport& report);

}  // namespace omb
