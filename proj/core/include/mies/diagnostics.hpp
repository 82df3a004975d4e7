#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mies/strategies.hpp"

namespace mies {

// Monte-Carlo estimate with its standard error. std_error >= 0 always;
// deterministic observables report 0.
struct DriftReport {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t n_replications = 0;
    std::uint64_t block_len = 0;
};

// Sample variance implied by the standard error: SE^2 * n.
double empirical_variance(const DriftReport& report);

// Probability that a din-dimensional integer mutation with per-coordinate
// std sigma_in rounds back to the incumbent in every coordinate:
// (1 - 2 Phi(-1/(2 sigma_in)))^din, evaluated in the log domain.
// Requires sigma_in > 0.
double p_succ_in(double sigma_in, std::size_t din);

// Monte-Carlo estimate of Pr(||e_1 + (sigma_bar/dco) N|| <= 1 - r) with
// binomial standard error; N is a dco-dimensional standard normal.
// Requires dco >= 1 and n >= 1. r >= 1 gives estimate 0.
DriftReport p_succ_co_mc(double r, std::size_t dco, double sigma_bar,
                         std::uint64_t n, std::uint64_t seed);

// Parameters of the potential function
//   V = log||m|| + v log+max{ alpha ell ||m|| / (dco sigma),
//                             alpha^{1/(s-1)} dco sigma / (u ||m||) }
//       + v_in log(sigma <D> / sigma_lb),
// where log+max{a,b} = max{0, log a, log b}.
struct PotentialConfig {
    double v = 0.0;      // in (0, min{1, a_co / log(alpha)})
    double v_in = 0.0;   // > 0
    double ell = 0.0;    // > 0, with u/ell > alpha^{s/(s-1)}
    double u = 0.0;      // > 0
    double p_ell = 0.0;  // in (1/s, 1/2)
    double p_u = 0.0;    // in (0, 1/s)
    double a_co = 0.0;   // > 0
};

// Throws std::invalid_argument when the config violates its constraints
// for the given strategy parameters.
void validate_potential_config(const PotentialConfig& cfg,
                               const StrategyParams& params);

// Evaluates V at a state. The integer term uses coordinate 0 of
// log_sigma_d and vanishes when din = 0; params.sigma_lb must be > 0
// whenever the state has integer coordinates. ||m|| = 0 -> domain_error.
double potential_value(const StrategyState& state, const StrategyParams& params,
                       const PotentialConfig& cfg);

// Observable measured by block_drift_mc over one replicated block:
// change of log(sigma), of log||m||, of log(||m||/sigma), or the sum of
// per-step truncated potential changes max{dV, -A}.
enum class BlockObservable { log_sigma, log_norm_m, log_ratio, truncated_v };

struct BlockDriftSpec {
    BlockObservable observable = BlockObservable::log_norm_m;
    std::uint64_t block_len = 1;
    std::uint64_t n_replications = 1;
    std::uint64_t seed = 0;
    // Required for truncated_v; the truncation is
    // A = a_co + v_in log(alpha)/(s-1).
    std::optional<PotentialConfig> potential;
};

// Replicates block_len steps from template_state n_replications times with
// independent per-replication seeds and reports the sample mean and
// standard error of the observable's change over the block.
DriftReport block_drift_mc(const StrategyState& template_state,
                           const StrategyParams& params, const ProblemSpec& spec,
                           const BlockDriftSpec& drift_spec);

// E[log(min{||x||, ||m||} / ||m||)] for x ~ N(m, sigma^2 I_d) with
// ratio = ||m||/sigma, via adaptive quadrature of
// (1/2) log(z/lambda) against the noncentral chi-squared density with
// k = d degrees of freedom and noncentrality lambda = ratio^2 on (0, lambda).
// Requires ratio > 0 and d >= 4. Result is always <= 0.
// Throws std::runtime_error when the quadrature fails to converge.
double truncated_log_improvement_oracle(double ratio, std::size_t d);

// Rates and probabilities entering the drift-bound constants. All are
// consistent with one (alpha, s, p_mut, dco, din) setting:
//   gamma = (1/2)(1 - alpha^{-2/(s-1)}),
//   p_succ_in_lb = (1 - p_mut)^din,
//   r_star = 1 - exp(-a_co/(1 - v)),
//   r_prime = 1 - exp(-log(alpha)/(dco log(alpha) - 1)),
//   p_star / p_prime = min over sigma_bar in [ell, u] of the normalized
//   continuous success probability at rate r_star / r_prime.
struct DriftBoundConfig {
    double gamma = 0.0;         // > 0
    double p_succ_in_lb = 0.0;  // in (0, 1)
    double r_star = 0.0;        // in (0, 1)
    double r_prime = 0.0;       // in (0, 1)
    double p_star = 0.0;        // in (0, 1)
    double p_prime = 0.0;       // in (0, 1)
};

double gamma_exponent(double alpha, double s);
// Requires dco log(alpha) > 1; smaller dco makes the rate undefined.
double r_prime_rate(double alpha, std::size_t dco);
double r_star_rate(double a_co, double v);

// Drift-bound constants. b1's O(din^-gamma) remainder has no computable
// constant; only the finite part (v_in - v) log(alpha)/(s-1) is reported
// and b1_remainder_omitted records the omission.
struct DriftBoundReport {
    double a = 0.0;  // a_co + v_in log(alpha)/(s-1)
    double b1_finite_part = 0.0;
    bool b1_remainder_omitted = true;
    double b2 = 0.0;
    double b2_prime = 0.0;  // a_co p_star - s v log(alpha)/(s-1)
    double b3 = 0.0;
    double b3_prime = 0.0;  // v log(alpha)(s p_ell - 1)/(s-1)
    double b4 = 0.0;
    double b4_prime = 0.0;  // v log(alpha)(1 - s p_u)/(s-1)
};

// Evaluates the constants:
//   b2 = b2' p_in_lb,
//   b3 = v log(alpha)(s p_ell p_in_lb - 1)/(s-1),
//   b4 = b4' p_in_lb.
// Throws std::invalid_argument when cfg or bound violate their invariants.
DriftBoundReport drift_bound_B(const StrategyParams& params, std::size_t dco,
                               const PotentialConfig& cfg,
                               const DriftBoundConfig& bound);

// Smallest sigma_bar whose Monte-Carlo success probability at rate 0 falls
// to target, computed from n common draws; deterministic in seed.
// Requires target in (0, 1/2), dco >= 1, n >= 1.
double sigma_bar_for_success_rate(double target, std::size_t dco,
                                  std::uint64_t n, std::uint64_t seed);

// The potential and bound configuration induced by
//   a_co = 1/dco, v = p_prime/(2 dco log(alpha)), v_in = 2v,
//   p_u = 1/(2s), p_ell = (1/s + 1/2)/2,
// with ell, u from sigma_bar_for_success_rate and p_star, p_prime as
// grid minima over [ell, u] of the rate-r_star / rate-r_prime success
// probabilities, all sharing one batch of n_mc common draws.
struct CanonicalDriftSetup {
    PotentialConfig potential;
    DriftBoundConfig bound;
};

CanonicalDriftSetup canonical_drift_setup(const StrategyParams& params, std::size_t dco,
                             std::size_t din, double p_mut, std::uint64_t n_mc,
                             std::uint64_t seed);

// Wallis integral W_d = int_0^{pi/2} sin^d(x) dx by the recurrence
// W_d = (d-1)/d W_{d-2}, W_0 = pi/2, W_1 = 1.
double wallis_integral(std::size_t d);

// Upper bound (sqrt(V_m) + sqrt(V_sigma))^2 on the s-block variance of
// log(||m||/sigma), with
//   V_sigma = (1/4)(s^2 log(alpha)/(s-1))^2,
//   V_m = 2 s (dco - 1) W_{dco-2} + s(s-1)/dco^2.
// Requires dco >= 2.
double variance_upper_bound(std::size_t dco, double s, double alpha);

// One run's hitting-time outcome at a dimension.
struct HitObservation {
    std::size_t dco = 0;
    std::uint64_t t_eps = 0;  // meaningful only when hit
    bool hit = false;
};

struct DimensionScaling {
    std::size_t dco = 0;
    double mean_normalized = 0.0;  // mean T_eps / (dco ln(1/epsilon))
    std::uint64_t n_runs = 0;
};

struct HittingTimeReport {
    std::vector<DimensionScaling> per_dim;  // ascending dco
    double ratio_max_over_min = 0.0;
    std::uint64_t n_censored = 0;  // non-hitting runs, excluded
};

// Scaling fit of T_eps against dco ln(1/epsilon). Requires epsilon in
// (0, 1) and hitting observations at >= 3 distinct dco values after
// censoring; otherwise throws std::invalid_argument.
HittingTimeReport hitting_time_fit(const std::vector<HitObservation>& observations,
                                   double epsilon);

// Least-squares slope of y against x. Requires >= 2 points and
// non-constant x.
double lsq_slope(const std::vector<double>& x, const std::vector<double>& y);

struct StagnationReport {
    bool stagnated = false;
    double tail_slope = 0.0;       // log10||m|| per iteration over the window
    double log_ratio_final = 0.0;  // log10(||m||/sigma) at the last record
    double slope_threshold = -1e-6;
    double ratio_threshold = 6.0;
};

// Declares a run stagnated when log10||m|| is flat over the final
// window_fraction of records (least-squares slope against the recorded
// iteration indices >= -1e-6) while log10(||m||/sigma) ended >= 6.
// Requires >= 100 records and window_fraction in (0, 1].
StagnationReport stagnation_detector(const std::vector<IterationRecord>& records,
                                     double window_fraction);

} // namespace mies
