#include "mies/normal_math.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mies {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt2Pi = 2.5066282746310002;
constexpr double kLogSqrt2Pi = 0.91893853320467274; // log(sqrt(2 pi))

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw std::domain_error(std::string(what) + " must be finite");
    }
}

// Acklam's inverse normal CDF coefficients (2003). Max relative error of the
// raw approximation is 1.15e-9; refinement below removes the rest.
constexpr double kA[6] = {
    -3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
    1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00};
constexpr double kB[5] = {
    -5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
    6.680131188771972e+01, -1.328068155288572e+01};
constexpr double kC[6] = {
    -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
    -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00};
constexpr double kD[4] = {
    7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
    3.754408661907416e+00};

double acklam_estimate(double p) {
    constexpr double p_low = 0.02425;
    constexpr double p_high = 1.0 - p_low;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((kC[0] * q + kC[1]) * q + kC[2]) * q + kC[3]) * q + kC[4]) * q + kC[5]) /
               ((((kD[0] * q + kD[1]) * q + kD[2]) * q + kD[3]) * q + 1.0);
    }
    if (p > p_high) {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        return -(((((kC[0] * q + kC[1]) * q + kC[2]) * q + kC[3]) * q + kC[4]) * q + kC[5]) /
               ((((kD[0] * q + kD[1]) * q + kD[2]) * q + kD[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((kA[0] * r + kA[1]) * r + kA[2]) * r + kA[3]) * r + kA[4]) * r + kA[5]) * q /
           (((((kB[0] * r + kB[1]) * r + kB[2]) * r + kB[3]) * r + kB[4]) * r + 1.0);
}

// One Halley step for f(x) = Phi(x) - p. Safe while exp(x^2/2) is finite,
// i.e. |x| < 37.6, which covers every normalized double p.
double halley_step(double x, double p) {
    const double e = std_normal_cdf(x) - p;
    const double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

} // namespace

double std_normal_cdf(double x) {
    require_finite(x, "std_normal_cdf: x");
    return 0.5 * std::erfc(-x / kSqrt2);
}

double log_std_normal_cdf(double x) {
    require_finite(x, "log_std_normal_cdf: x");
    if (x > -37.0) {
        return std::log(std_normal_cdf(x));
    }
    // Phi(x) = phi(x)/|x| * (1 - 1/x^2 + 3/x^4 - 15/x^6 + 105/x^8 - ...);
    // truncation error below 1e-12 relative for x <= -37.
    const double r2 = 1.0 / (x * x);
    const double series = 1.0 + r2 * (-1.0 + r2 * (3.0 + r2 * (-15.0 + r2 * 105.0)));
    return -0.5 * x * x - kLogSqrt2Pi - std::log(-x) + std::log(series);
}

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("std_normal_quantile: p must lie in (0, 1)");
    }
    double x = acklam_estimate(p);
    x = halley_step(x, p);
    x = halley_step(x, p);
    return x;
}

double sigma_lb_from_pmut(double p_mut) {
    if (!(p_mut > 0.0 && p_mut < 1.0)) {
        throw std::domain_error("sigma_lb_from_pmut: p_mut must lie in (0, 1)");
    }
    return -0.5 / std_normal_quantile(0.5 * p_mut);
}

std::int64_t discretize_scalar(double v) {
    require_finite(v, "discretize: component");
    const double y = std::floor(v + 0.5);
    constexpr double kLimit = 4.611686018427387904e18; // 2^62
    if (std::fabs(y) > kLimit) {
        throw std::invalid_argument("discretize: component exceeds representable integer range");
    }
    return static_cast<std::int64_t>(y);
}

std::vector<std::int64_t> discretize(std::span<const double> v) {
    std::vector<std::int64_t> out;
    out.reserve(v.size());
    for (double c : v) out.push_back(discretize_scalar(c));
    return out;
}

InequalityReport check_cdf_ratio_inequality(double theta, double beta) {
    require_finite(theta, "check_cdf_ratio_inequality: theta");
    require_finite(beta, "check_cdf_ratio_inequality: beta");
    if (!(theta > 0.0) || !(beta > 1.0)) {
        throw std::domain_error("check_cdf_ratio_inequality: requires theta > 0 and beta > 1");
    }
    const double theta_sq = theta * theta;
    if (!std::isfinite(theta_sq)) {
        throw std::domain_error("check_cdf_ratio_inequality: theta too large");
    }
    // 1 - 1/beta^2 factors as (1 - 1/beta)(1 + 1/beta) to stay accurate near beta = 1.
    const double one_minus_inv_beta_sq = (1.0 - 1.0 / beta) * (1.0 + 1.0 / beta);
    InequalityReport rep;
    rep.log_lhs = log_std_normal_cdf(-theta / beta);
    rep.log_rhs = log_std_normal_cdf(-theta) + 0.5 * theta_sq * one_minus_inv_beta_sq;
    rep.lhs = std::exp(rep.log_lhs);
    rep.rhs = std::exp(rep.log_rhs);
    rep.holds = rep.log_lhs > rep.log_rhs;
    return rep;
}

InequalityReport check_quantile_bound(double y) {
    require_finite(y, "check_quantile_bound: y");
    const double upper = std_normal_cdf(-1.0);
    if (!(y > 0.0 && y < upper)) {
        throw std::domain_error("check_quantile_bound: requires 0 < y < Phi(-1)");
    }
    const double q = std_normal_quantile(y);
    // RHS = (sqrt(8 pi / e) y)^{-1}; log(sqrt(8 pi / e)) = (log(8 pi) - 1)/2.
    const double log_sqrt_8pi_e = 0.5 * (std::log(8.0 * M_PI) - 1.0);
    InequalityReport rep;
    rep.log_lhs = q * q;
    rep.log_rhs = -(log_sqrt_8pi_e + std::log(y));
    rep.lhs = std::exp(rep.log_lhs);
    rep.rhs = std::exp(rep.log_rhs);
    rep.holds = rep.log_lhs >= rep.log_rhs;
    return rep;
}

} // namespace mies
