#pragma once

#include <string>
#include <vector>

namespace eyesim {

enum class VerifyLevel { quick, full };

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Cross-checks of the generating-function pipeline against the brute-force
/// Fock oracle. `quick` runs the distribution equivalence, parity and
/// normalization suites at a reduced grid; `full` widens the grid and adds
/// the witness, superposition-mixture and phase-covariance suites.
///
/// `inject_failure` names a check to fail deliberately; it exists so the
/// failure path of the verify command can itself be tested.
std::vector<CheckResult> run_verification(VerifyLevel level, const std::string& inject_failure = "");

} // namespace eyesim
