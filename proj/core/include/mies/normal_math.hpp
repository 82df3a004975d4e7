#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mies {

// Standard normal CDF Phi(x). Evaluated through erfc so the lower tail keeps
// full relative accuracy (about 1e-15 down to x ~ -37.5, below which the
// result is subnormal and relative precision is capped by the format).
// Non-finite x -> std::domain_error.
double std_normal_cdf(double x);

// log Phi(x). Switches to the Mills-ratio asymptotic series once Phi(x)
// underflows, so it stays finite and accurate for arbitrarily negative x.
double log_std_normal_cdf(double x);

// Standard normal quantile Phi^{-1}(p) for p in (0,1), else domain error.
// Initial estimate from Acklam's rational approximation (relative error
// < 1.15e-9 over (0,1), coefficients from P. J. Acklam, "An algorithm for
// computing the inverse normal cumulative distribution function", 2003),
// then polished with two Halley steps against the erfc-based CDF, giving
// |Phi(result) - p| <= 1e-14 * min(p, 1-p) over the normal double range.
double std_normal_quantile(double p);

// Smallest admissible integer mutation std: sigma_lb = -(2 Phi^{-1}(p/2))^{-1}.
// Requires 0 < p_mut < 1, else domain error. Monotone increasing in p_mut.
double sigma_lb_from_pmut(double p_mut);

// Componentwise rounding Int[v]_i = floor(v_i + 1/2); halves round toward
// +infinity (Int[0.5] = 1, Int[-0.5] = 0), never to even. Non-finite input
// -> domain error; |result| beyond 2^62 -> invalid_argument.
std::int64_t discretize_scalar(double v);
std::vector<std::int64_t> discretize(std::span<const double> v);

// Two-sided report for an analytic inequality check. The decision is taken
// in the log domain (log_lhs vs log_rhs); lhs/rhs are the linear values and
// may under- or overflow for extreme inputs without affecting the verdict.
struct InequalityReport {
    bool holds = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double log_lhs = 0.0;
    double log_rhs = 0.0;
};

// Checks Phi(-theta/beta) > Phi(-theta) * exp((theta^2/2)(1 - 1/beta^2)).
// Requires theta > 0, beta > 1, and theta small enough that theta^2 is
// finite; domain error otherwise.
InequalityReport check_cdf_ratio_inequality(double theta, double beta);

// Checks exp((Phi^{-1}(y))^2) >= (sqrt(8 pi / e) * y)^{-1} for
// 0 < y < Phi(-1); domain error outside that interval.
InequalityReport check_quantile_bound(double y);

} // namespace mies
