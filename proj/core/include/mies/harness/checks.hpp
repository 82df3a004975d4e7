#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mies::harness {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Normal-CDF inequality checkers over dense log-spaced grids:
// the ratio inequality on 100x100 points of (theta, beta) in
// [1e-3, 10] x [1 + 1e-3, 50], and the quantile lower bound on 1e4 points
// of y in (1e-12, Phi(-1)(1 - 1e-9)). Deterministic.
std::vector<CheckResult> check_cdf_inequality_grids();

// Continuous drift floor: the mean log||m|| change over an i-step block
// stays >= -i/dco - 3 SE, for dco in {2, 10, 50} and i in {1, 5},
// 1e4 replications each from a normalized-step-size-1.5 start.
std::vector<CheckResult> check_drift_floor(std::uint64_t seed);

// Block variance: the empirical s-block variance of log(||m||/sigma) stays
// below the closed-form bound, for (dco, s) in {10, 50} x {3, 5} at
// alpha = 1.5, 1e4 replications each.
std::vector<CheckResult> check_variance_bound(std::uint64_t seed);

// Integer success probability: the closed form matches a 1e6-sample
// Monte-Carlo estimate within 3 binomial SE at the floor and one failure
// step above it, din in {10, 100} with p_mut = 1/(2 din); plus strict
// dominance of the floor value and decay of the raised value along
// din in {50, 100, 200, 400} at fixed p_mut din.
std::vector<CheckResult> check_integer_success_closed_form(std::uint64_t seed);

// All of the above in order.
std::vector<CheckResult> run_property_checks(std::uint64_t seed);

} // namespace mies::harness
