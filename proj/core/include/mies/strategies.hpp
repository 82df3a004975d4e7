#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mies/problems.hpp"

namespace mies {

enum class Variant { lb, lub };

struct StrategyParams {
    double alpha = 1.5;    // step-size multiplier, > 1
    double s = 5.0;        // inverse target success rate, > 1
    double sigma_lb = 0.0; // integer mutation std floor, >= 0
    Variant variant = Variant::lub;
};

// Throws std::invalid_argument on alpha <= 1, s <= 1, sigma_lb < 0, or
// non-finite values.
void validate_params(const StrategyParams& params);

// Elite state after t iterations. log_sigma is authoritative: the premature
// convergence regime drives sigma down exponentially for tens of thousands
// of iterations, far past double underflow. The same applies to the
// per-coordinate integer stds, so they are kept as log(sigma * <D>_i);
// the product is the quantity the floor rule constrains and it stays in
// representable range even when sigma and <D>_i separately do not.
struct StrategyState {
    std::vector<double> m;            // continuous mean
    std::vector<std::int64_t> m_int;  // integer mean
    double log_sigma = 0.0;
    std::vector<double> log_sigma_d;  // log(sigma * <D>_i), one per integer coordinate
    std::uint64_t t = 0;

    double sigma() const;                  // exp(log_sigma); may underflow to 0
    double sigma_d(std::size_t i) const;   // sigma * <D>_i
    double d_scale(std::size_t i) const;   // <D>_i; may overflow once sigma underflows
    double min_sigma_d() const;            // min_i sigma * <D>_i; +inf when din = 0
};

// Builds the t = 0 state from linear-domain inputs. The sigma_lb floor is
// not applied here; a sub-floor sigma0 * d0_i persists until the first step.
// Requires sigma0 > 0, d0_i > 0, matching m_int0/d0 lengths.
StrategyState init_state(std::vector<double> m0, std::vector<std::int64_t> m_int0,
                         double sigma0, std::vector<double> d0);

// Theory-mode initial step size sigma0 = sigma_lb^{K/(s-1)}; K = 0 gives 1.
double theory_sigma0(double sigma_lb, double s, int K);

// One iteration's standard normal draws, injected explicitly so that steps
// are pure transitions and tests can force any outcome.
struct NoiseDraw {
    std::vector<double> xi_co;
    std::vector<double> xi_in;
};

struct IterationRecord {
    std::uint64_t t = 0;
    bool success = false;
    bool z_changed_any = false;          // candidate z differed from the incumbent
    std::vector<bool> z_changed_mask;    // per integer coordinate
    double log_norm_m = 0.0;             // log ||m_t||
    double log_sigma = 0.0;
    double sigma_d_min = 0.0;            // min_i sigma <D>_i; +inf when din = 0
    double f_elite = 0.0;                // ||m||^2 + ||m_int||^2
};

struct StepResult {
    StrategyState state;
    IterationRecord record;
};

// One elitist iteration. Candidate: x = m + sigma xi_co,
// z = Int[m_int + sigma <D> xi_in]; acceptance via is_no_worse (ties accept);
// sigma update by the 1/s-success rule, so log_sigma changes by exactly
// +log(alpha) on success and -log(alpha)/(s-1) on failure.
//
// step_lb applies the lower-bound rule to every integer coordinate:
//   sigma'<D'>_i = max{sigma_lb, sigma'<D>_i}.
// step_lub additionally caps the std at its previous value on every failure
// and on success at coordinates whose integer value did not change:
//   sigma'<D'>_i = max{sigma_lb, min{sigma'<D>_i, sigma<D>_i}};
// successful integer mutations keep the plain lower-bound rule.
//
// The params.variant tag must match the function called.
StepResult step_lb(const StrategyState& state, const StrategyParams& params,
                   const ProblemSpec& spec, const NoiseDraw& noise);
StepResult step_lub(const StrategyState& state, const StrategyParams& params,
                    const ProblemSpec& spec, const NoiseDraw& noise);

// Dispatches on params.variant.
StepResult step(const StrategyState& state, const StrategyParams& params,
                const ProblemSpec& spec, const NoiseDraw& noise);

struct RunTrace {
    std::vector<IterationRecord> records;   // row per iteration, including t = 0
    std::optional<std::uint64_t> hit_t;     // first t with ||m_t|| <= epsilon
    StrategyState final_state;
};

// Runs up to budget iterations from state0, drawing noise from Rng(rng_seed)
// (xi_co before xi_in each step). Stops early when epsilon is given and
// ||m_t|| <= epsilon, checked at t = 0 as well. budget = 0 or a non-positive
// epsilon -> invalid_argument. Identical arguments give identical traces.
RunTrace run(const StrategyState& state0, const StrategyParams& params,
             const ProblemSpec& spec, std::uint64_t rng_seed,
             std::uint64_t budget, std::optional<double> epsilon);

} // namespace mies
