#include "mies/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "mies/normal_math.hpp"
#include "mies/rng.hpp"

namespace mies {

void validate_params(const StrategyParams& params) {
    if (!std::isfinite(params.alpha) || !(params.alpha > 1.0)) {
        throw std::invalid_argument("StrategyParams: alpha must be finite and > 1");
    }
    if (!std::isfinite(params.s) || !(params.s > 1.0)) {
        throw std::invalid_argument("StrategyParams: s must be finite and > 1");
    }
    if (!std::isfinite(params.sigma_lb) || params.sigma_lb < 0.0) {
        throw std::invalid_argument("StrategyParams: sigma_lb must be finite and >= 0");
    }
}

double StrategyState::sigma() const { return std::exp(log_sigma); }

double StrategyState::sigma_d(std::size_t i) const { return std::exp(log_sigma_d.at(i)); }

double StrategyState::d_scale(std::size_t i) const {
    return std::exp(log_sigma_d.at(i) - log_sigma);
}

double StrategyState::min_sigma_d() const {
    double lo = std::numeric_limits<double>::infinity();
    for (double lsd : log_sigma_d) lo = std::min(lo, lsd);
    return std::exp(lo);
}

StrategyState init_state(std::vector<double> m0, std::vector<std::int64_t> m_int0,
                         double sigma0, std::vector<double> d0) {
    if (m0.empty()) {
        throw std::invalid_argument("init_state: m0 must have at least one coordinate");
    }
    if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) {
        throw std::invalid_argument("init_state: sigma0 must be finite and > 0");
    }
    if (d0.size() != m_int0.size()) {
        throw std::invalid_argument("init_state: d0 and m_int0 lengths differ");
    }
    for (double c : m0) {
        if (!std::isfinite(c)) throw std::invalid_argument("init_state: m0 must be finite");
    }
    StrategyState st;
    st.m = std::move(m0);
    st.m_int = std::move(m_int0);
    st.log_sigma = std::log(sigma0);
    st.log_sigma_d.reserve(d0.size());
    for (double d : d0) {
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw std::invalid_argument("init_state: d0 components must be finite and > 0");
        }
        st.log_sigma_d.push_back(st.log_sigma + std::log(d));
    }
    st.t = 0;
    return st;
}

double theory_sigma0(double sigma_lb, double s, int K) {
    if (!(sigma_lb > 0.0) || !(s > 1.0)) {
        throw std::invalid_argument("theory_sigma0: requires sigma_lb > 0 and s > 1");
    }
    return std::pow(sigma_lb, static_cast<double>(K) / (s - 1.0));
}

namespace {

IterationRecord make_record(const StrategyState& st, bool success,
                            std::vector<bool> z_changed_mask) {
    IterationRecord rec;
    rec.t = st.t;
    rec.success = success;
    rec.z_changed_mask = std::move(z_changed_mask);
    rec.z_changed_any = std::any_of(rec.z_changed_mask.begin(), rec.z_changed_mask.end(),
                                    [](bool b) { return b; });
    rec.log_norm_m = 0.5 * std::log(norm_sq(st.m));
    rec.log_sigma = st.log_sigma;
    rec.sigma_d_min = st.min_sigma_d();
    rec.f_elite = norm_sq(st.m) + norm_sq_int(st.m_int);
    return rec;
}

StepResult step_impl(const StrategyState& state, const StrategyParams& params,
                     const ProblemSpec& spec, const NoiseDraw& noise) {
    validate_params(params);
    validate_problem_spec(spec);
    const auto dco = static_cast<std::size_t>(spec.dco);
    const auto din = static_cast<std::size_t>(spec.din);
    if (state.m.size() != dco || state.m_int.size() != din ||
        state.log_sigma_d.size() != din) {
        throw std::invalid_argument("step: state dimensions do not match the problem spec");
    }
    if (noise.xi_co.size() != dco || noise.xi_in.size() != din) {
        throw std::invalid_argument("step: noise dimensions do not match the problem spec");
    }

    const double sigma_t = std::exp(state.log_sigma);
    MixedSolution cand;
    cand.x.resize(dco);
    for (std::size_t i = 0; i < dco; ++i) {
        cand.x[i] = state.m[i] + sigma_t * noise.xi_co[i];
    }
    std::vector<double> y(din);
    for (std::size_t i = 0; i < din; ++i) {
        y[i] = static_cast<double>(state.m_int[i]) +
               std::exp(state.log_sigma_d[i]) * noise.xi_in[i];
    }
    cand.z = discretize(y);

    const MixedSolution incumbent{state.m, state.m_int};
    const bool success = is_no_worse(cand, incumbent, spec);

    std::vector<bool> changed(din);
    for (std::size_t i = 0; i < din; ++i) {
        changed[i] = cand.z[i] != state.m_int[i];
    }

    const double log_alpha = std::log(params.alpha);
    const double dlog = success ? log_alpha : -log_alpha / (params.s - 1.0);
    const double log_floor = params.sigma_lb > 0.0
                                 ? std::log(params.sigma_lb)
                                 : -std::numeric_limits<double>::infinity();

    StrategyState next;
    next.m = success ? std::move(cand.x) : state.m;
    next.m_int = success ? std::move(cand.z) : state.m_int;
    next.log_sigma = state.log_sigma + dlog;
    next.log_sigma_d.resize(din);
    for (std::size_t i = 0; i < din; ++i) {
        // sigma_{t+1} <D_t>_i in log domain; the lub variant caps it at
        // sigma_t <D_t>_i unless this coordinate's integer value mutated
        // successfully.
        double lsd = state.log_sigma_d[i] + dlog;
        const bool lb_rule =
            params.variant == Variant::lb || (success && changed[i]);
        if (!lb_rule) lsd = std::min(lsd, state.log_sigma_d[i]);
        next.log_sigma_d[i] = std::max(log_floor, lsd);
    }
    next.t = state.t + 1;

    IterationRecord rec = make_record(next, success, std::move(changed));
    return StepResult{std::move(next), std::move(rec)};
}

} // namespace

StepResult step_lb(const StrategyState& state, const StrategyParams& params,
                   const ProblemSpec& spec, const NoiseDraw& noise) {
    if (params.variant != Variant::lb) {
        throw std::invalid_argument("step_lb: params.variant is not lb");
    }
    return step_impl(state, params, spec, noise);
}

StepResult step_lub(const StrategyState& state, const StrategyParams& params,
                    const ProblemSpec& spec, const NoiseDraw& noise) {
    if (params.variant != Variant::lub) {
        throw std::invalid_argument("step_lub: params.variant is not lub");
    }
    return step_impl(state, params, spec, noise);
}

StepResult step(const StrategyState& state, const StrategyParams& params,
                const ProblemSpec& spec, const NoiseDraw& noise) {
    return step_impl(state, params, spec, noise);
}

RunTrace run(const StrategyState& state0, const StrategyParams& params,
             const ProblemSpec& spec, std::uint64_t rng_seed,
             std::uint64_t budget, std::optional<double> epsilon) {
    validate_params(params);
    validate_problem_spec(spec);
    if (budget == 0) {
        throw std::invalid_argument("run: budget must be >= 1");
    }
    if (epsilon && !(*epsilon > 0.0 && std::isfinite(*epsilon))) {
        throw std::invalid_argument("run: epsilon must be finite and > 0");
    }
    const double log_eps = epsilon ? std::log(*epsilon)
                                   : -std::numeric_limits<double>::infinity();

    RunTrace trace;
    StrategyState state = state0;
    trace.records.push_back(
        make_record(state, false, std::vector<bool>(state.m_int.size(), false)));
    if (epsilon && trace.records.back().log_norm_m <= log_eps) {
        trace.hit_t = 0;
        trace.final_state = std::move(state);
        return trace;
    }

    Rng rng(rng_seed);
    NoiseDraw noise;
    noise.xi_co.resize(static_cast<std::size_t>(spec.dco));
    noise.xi_in.resize(static_cast<std::size_t>(spec.din));
    for (std::uint64_t t = 1; t <= budget; ++t) {
        for (double& v : noise.xi_co) v = rng.normal();
        for (double& v : noise.xi_in) v = rng.normal();
        StepResult res = step_impl(state, params, spec, noise);
        state = std::move(res.state);
        trace.records.push_back(std::move(res.record));
        if (epsilon && trace.records.back().log_norm_m <= log_eps) {
            trace.hit_t = t;
            break;
        }
    }
    trace.final_state = std::move(state);
    return trace;
}

} // namespace mies
