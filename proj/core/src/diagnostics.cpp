#include "mies/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "mies/normal_math.hpp"
#include "mies/rng.hpp"

namespace mies {

namespace {

constexpr double kLn10 = 2.302585092994045684;

[[noreturn]] void fail_invariant(const std::string& what) {
    throw std::invalid_argument("diagnostics: " + what);
}

// Welford accumulator; std_error is 0 until two samples arrive.
struct MeanAccumulator {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }
    double std_error() const {
        if (n < 2) return 0.0;
        const double nd = static_cast<double>(n);
        return std::sqrt(m2 / (nd - 1.0) / nd);
    }
};

} // namespace

double empirical_variance(const DriftReport& report) {
    return report.std_error * report.std_error *
           static_cast<double>(report.n_replications);
}

double p_succ_in(double sigma_in, std::size_t din) {
    if (!(sigma_in > 0.0) || !std::isfinite(sigma_in)) {
        fail_invariant("p_succ_in requires sigma_in > 0");
    }
    if (din == 0) return 1.0;
    const double q = 2.0 * std_normal_cdf(-1.0 / (2.0 * sigma_in));
    if (q >= 1.0) return 0.0;
    return std::exp(static_cast<double>(din) * std::log1p(-q));
}

DriftReport p_succ_co_mc(double r, std::size_t dco, double sigma_bar,
                         std::uint64_t n, std::uint64_t seed) {
    if (dco < 1) fail_invariant("p_succ_co_mc requires dco >= 1");
    if (n < 1) fail_invariant("p_succ_co_mc requires n >= 1");
    if (!(sigma_bar > 0.0) || !std::isfinite(sigma_bar)) {
        fail_invariant("p_succ_co_mc requires sigma_bar > 0");
    }
    DriftReport report;
    report.n_replications = n;
    report.block_len = 1;
    if (r >= 1.0) return report;

    const double scale = sigma_bar / static_cast<double>(dco);
    const double threshold = (1.0 - r) * (1.0 - r);
    Rng rng(seed);
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        const double first = 1.0 + scale * rng.normal();
        double sum = first * first;
        for (std::size_t j = 1; j < dco; ++j) {
            const double c = scale * rng.normal();
            sum += c * c;
        }
        if (sum <= threshold) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    report.estimate = p;
    report.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    return report;
}

void validate_potential_config(const PotentialConfig& cfg,
                               const StrategyParams& params) {
    validate_params(params);
    const double log_alpha = std::log(params.alpha);
    for (double x : {cfg.v, cfg.v_in, cfg.ell, cfg.u, cfg.p_ell, cfg.p_u, cfg.a_co}) {
        if (!std::isfinite(x)) fail_invariant("potential config has a non-finite field");
    }
    if (!(cfg.a_co > 0.0)) fail_invariant("potential config requires a_co > 0");
    if (!(cfg.v > 0.0 && cfg.v < 1.0 && cfg.v < cfg.a_co / log_alpha)) {
        fail_invariant("potential config requires 0 < v < min{1, a_co/log(alpha)}");
    }
    if (!(cfg.v_in > 0.0)) fail_invariant("potential config requires v_in > 0");
    if (!(cfg.ell > 0.0 && cfg.u > 0.0)) {
        fail_invariant("potential config requires positive ell and u");
    }
    if (!(cfg.u / cfg.ell > std::pow(params.alpha, params.s / (params.s - 1.0)))) {
        fail_invariant("potential config requires u/ell > alpha^(s/(s-1))");
    }
    if (!(0.0 < cfg.p_u && cfg.p_u < 1.0 / params.s && 1.0 / params.s < cfg.p_ell &&
          cfg.p_ell < 0.5)) {
        fail_invariant("potential config requires 0 < p_u < 1/s < p_ell < 1/2");
    }
}

double potential_value(const StrategyState& state, const StrategyParams& params,
                       const PotentialConfig& cfg) {
    validate_potential_config(cfg, params);
    const double norm_sq_m = norm_sq(state.m);
    if (norm_sq_m == 0.0) {
        throw std::domain_error("diagnostics: potential undefined at ||m|| = 0");
    }
    const double log_norm_m = 0.5 * std::log(norm_sq_m);
    const double log_alpha = std::log(params.alpha);
    const double log_dco = std::log(static_cast<double>(state.m.size()));
    // Both mismatch arguments in the log domain; log_sigma is authoritative
    // and may lie far below double underflow in linear scale.
    const double low_side =
        log_alpha + std::log(cfg.ell) + log_norm_m - log_dco - state.log_sigma;
    const double high_side = log_alpha / (params.s - 1.0) + log_dco +
                             state.log_sigma - std::log(cfg.u) - log_norm_m;
    double value = log_norm_m + cfg.v * std::max({0.0, low_side, high_side});
    if (!state.log_sigma_d.empty()) {
        if (!(params.sigma_lb > 0.0)) {
            fail_invariant("potential with integer coordinates requires sigma_lb > 0");
        }
        value += cfg.v_in * (state.log_sigma_d[0] - std::log(params.sigma_lb));
    }
    return value;
}

namespace {

NoiseDraw draw_noise(Rng& rng, const ProblemSpec& spec) {
    NoiseDraw noise;
    noise.xi_co.resize(static_cast<std::size_t>(spec.dco));
    noise.xi_in.resize(static_cast<std::size_t>(spec.din));
    for (double& v : noise.xi_co) v = rng.normal();
    for (double& v : noise.xi_in) v = rng.normal();
    return noise;
}

double log_norm(const std::vector<double>& m) { return 0.5 * std::log(norm_sq(m)); }

} // namespace

DriftReport block_drift_mc(const StrategyState& template_state,
                           const StrategyParams& params, const ProblemSpec& spec,
                           const BlockDriftSpec& drift_spec) {
    validate_params(params);
    validate_problem_spec(spec);
    if (template_state.m.size() != static_cast<std::size_t>(spec.dco) ||
        template_state.m_int.size() != static_cast<std::size_t>(spec.din)) {
        fail_invariant("block_drift_mc state dimensions disagree with the problem");
    }
    if (drift_spec.block_len < 1) fail_invariant("block_drift_mc requires block_len >= 1");
    if (drift_spec.n_replications < 1) {
        fail_invariant("block_drift_mc requires n_replications >= 1");
    }
    const bool truncated = drift_spec.observable == BlockObservable::truncated_v;
    if (truncated && !drift_spec.potential.has_value()) {
        fail_invariant("truncated_v drift requires a potential config");
    }
    double truncation = 0.0;
    if (truncated) {
        validate_potential_config(*drift_spec.potential, params);
        truncation = drift_spec.potential->a_co +
                     drift_spec.potential->v_in * std::log(params.alpha) /
                         (params.s - 1.0);
    }

    MeanAccumulator acc;
    for (std::uint64_t rep = 0; rep < drift_spec.n_replications; ++rep) {
        Rng rng(derive_seed(drift_spec.seed, rep));
        StrategyState state = template_state;
        double truncated_sum = 0.0;
        double value_before = 0.0;
        switch (drift_spec.observable) {
            case BlockObservable::log_sigma: value_before = state.log_sigma; break;
            case BlockObservable::log_norm_m: value_before = log_norm(state.m); break;
            case BlockObservable::log_ratio:
                value_before = log_norm(state.m) - state.log_sigma;
                break;
            case BlockObservable::truncated_v: break;
        }
        for (std::uint64_t step_i = 0; step_i < drift_spec.block_len; ++step_i) {
            double v_old = 0.0;
            if (truncated) {
                v_old = potential_value(state, params, *drift_spec.potential);
            }
            state = step(state, params, spec, draw_noise(rng, spec)).state;
            if (truncated) {
                const double v_new = potential_value(state, params, *drift_spec.potential);
                truncated_sum += std::max(v_new - v_old, -truncation);
            }
        }
        double change = 0.0;
        switch (drift_spec.observable) {
            case BlockObservable::log_sigma:
                change = state.log_sigma - value_before;
                break;
            case BlockObservable::log_norm_m:
                change = log_norm(state.m) - value_before;
                break;
            case BlockObservable::log_ratio:
                change = log_norm(state.m) - state.log_sigma - value_before;
                break;
            case BlockObservable::truncated_v: change = truncated_sum; break;
        }
        acc.add(change);
    }
    DriftReport report;
    report.estimate = acc.mean;
    report.std_error = acc.std_error();
    report.n_replications = drift_spec.n_replications;
    report.block_len = drift_spec.block_len;
    return report;
}

namespace {

// log of the noncentral chi-squared density with k degrees of freedom and
// noncentrality lambda at z > 0, by the Poisson mixture
//   f(z) = sum_j Pois(j; lambda/2) chisq_pdf(z; k + 2j).
// The series is summed outward from its modal index, in units of the peak
// term, until terms fall below 1e-16 of the partial sum.
double nc_chisq_log_pdf(double z, double k, double lambda) {
    const double half_k = 0.5 * k;
    const double log_half_lambda = std::log(0.5 * lambda);
    const double log_z = std::log(z);
    auto log_term = [&](double j) {
        return -0.5 * lambda + j * log_half_lambda - std::lgamma(j + 1.0) +
               (half_k + j - 1.0) * log_z - 0.5 * z -
               (half_k + j) * std::log(2.0) - std::lgamma(half_k + j);
    };
    // Stationarity of log_term gives j ~ sqrt(lambda z)/2 for large j.
    double j_peak = std::floor(std::sqrt(lambda * z) * 0.5);
    if (j_peak < 0.0) j_peak = 0.0;
    for (int guard = 0; guard < 1000000 && log_term(j_peak + 1.0) > log_term(j_peak);
         ++guard) {
        j_peak += 1.0;
    }
    for (int guard = 0;
         guard < 1000000 && j_peak > 0.0 && log_term(j_peak - 1.0) > log_term(j_peak);
         ++guard) {
        j_peak -= 1.0;
    }
    const double log_peak = log_term(j_peak);
    double sum = 1.0;
    for (double j = j_peak + 1.0;; j += 1.0) {
        const double t = std::exp(log_term(j) - log_peak);
        sum += t;
        if (t < 1e-16 * sum) break;
    }
    for (double j = j_peak - 1.0; j >= 0.0; j -= 1.0) {
        const double t = std::exp(log_term(j) - log_peak);
        sum += t;
        if (t < 1e-16 * sum) break;
    }
    return log_peak + std::log(sum);
}

struct QuadratureState {
    double (*f)(double, const void*);
    const void* ctx;
    double tolerance_floor;
    int max_depth;
    bool converged;
};

double adaptive_simpson(QuadratureState& q, double a, double b, double fa, double fm,
                        double fb, double whole, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = q.f(lm, q.ctx);
    const double frm = q.f(rm, q.ctx);
    const double h = b - a;
    const double left = h / 12.0 * (fa + 4.0 * flm + fm);
    const double right = h / 12.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    // Depth floor guards against a symmetric integrand fooling the coarse
    // estimate; 15 is the standard Richardson factor for Simpson's rule.
    if (depth >= 5 && std::abs(delta) <= 15.0 * std::max(eps, q.tolerance_floor)) {
        return left + right + delta / 15.0;
    }
    if (depth >= q.max_depth) {
        q.converged = false;
        return left + right;
    }
    return adaptive_simpson(q, a, m, fa, flm, fm, left, 0.5 * eps, depth + 1) +
           adaptive_simpson(q, m, b, fm, frm, fb, right, 0.5 * eps, depth + 1);
}

double integrate(QuadratureState& q, double a, double b, double eps) {
    const double fa = q.f(a, q.ctx);
    const double fb = q.f(b, q.ctx);
    const double fm = q.f(0.5 * (a + b), q.ctx);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(q, a, b, fa, fm, fb, whole, eps, 0);
}

struct ImprovementContext {
    double k;
    double lambda;
    double sigma_z;
};

// Integrand in the substituted variable w with z = lambda - sigma_z w.
// Vanishes at both ends: log(z/lambda) -> 0 at w = 0 and the density's
// z^{k/2-1} factor kills the z -> 0 end for k >= 4.
double improvement_integrand(double w, const void* opaque) {
    const auto& ctx = *static_cast<const ImprovementContext*>(opaque);
    const double z = ctx.lambda - ctx.sigma_z * w;
    if (z <= 0.0) return 0.0;
    const double log_ratio_sq = std::log(z / ctx.lambda);
    if (log_ratio_sq == 0.0) return 0.0;
    return log_ratio_sq * std::exp(nc_chisq_log_pdf(z, ctx.k, ctx.lambda));
}

} // namespace

double truncated_log_improvement_oracle(double ratio, std::size_t d) {
    if (!(ratio > 0.0) || !std::isfinite(ratio)) {
        fail_invariant("improvement oracle requires ratio > 0");
    }
    if (d < 4) fail_invariant("improvement oracle requires d >= 4");

    ImprovementContext ctx;
    ctx.k = static_cast<double>(d);
    ctx.lambda = ratio * ratio;
    ctx.sigma_z = std::sqrt(2.0 * (ctx.k + 2.0 * ctx.lambda));
    // z in (0, lambda) maps to w in (0, w_max); past 45 standard deviations
    // the density contributes nothing representable.
    const double w_max = std::min(ctx.lambda / ctx.sigma_z, 45.0);

    QuadratureState q;
    q.f = improvement_integrand;
    q.ctx = &ctx;
    q.tolerance_floor = 1e-14;
    q.max_depth = 60;
    q.converged = true;

    // Coarse pass fixes the scale of the relative tolerance.
    double coarse = 0.0;
    const int panels = 64;
    for (int i = 0; i < panels; ++i) {
        const double a = w_max * i / panels;
        const double b = w_max * (i + 1) / panels;
        const double mid = 0.5 * (a + b);
        coarse += (b - a) / 6.0 *
                  (improvement_integrand(a, &ctx) + 4.0 * improvement_integrand(mid, &ctx) +
                   improvement_integrand(b, &ctx));
    }
    const double eps = std::max(std::abs(coarse) * 1e-10, 1e-14);
    const double integral = integrate(q, 0.0, w_max, eps);
    if (!q.converged || !std::isfinite(integral)) {
        char message[160];
        std::snprintf(message, sizeof(message),
                      "improvement oracle quadrature failed to converge at "
                      "ratio=%.6g, d=%zu (w_max=%.6g)",
                      ratio, d, w_max);
        throw std::runtime_error(message);
    }
    const double value = 0.5 * ctx.sigma_z * integral;
    return std::min(value, 0.0);
}

double gamma_exponent(double alpha, double s) {
    if (!(alpha > 1.0) || !(s > 1.0)) {
        fail_invariant("gamma exponent requires alpha > 1 and s > 1");
    }
    return 0.5 * (1.0 - std::pow(alpha, -2.0 / (s - 1.0)));
}

double r_prime_rate(double alpha, std::size_t dco) {
    if (!(alpha > 1.0)) fail_invariant("r_prime requires alpha > 1");
    const double log_alpha = std::log(alpha);
    const double denom = static_cast<double>(dco) * log_alpha - 1.0;
    if (!(denom > 0.0)) {
        fail_invariant("r_prime requires dco log(alpha) > 1");
    }
    return 1.0 - std::exp(-log_alpha / denom);
}

double r_star_rate(double a_co, double v) {
    if (!(a_co > 0.0) || !(v > 0.0 && v < 1.0)) {
        fail_invariant("r_star requires a_co > 0 and v in (0, 1)");
    }
    return 1.0 - std::exp(-a_co / (1.0 - v));
}

namespace {

// One batch of rate-free continuous-success draws. Per draw only the first
// normal coordinate n1 and the squared norm nsq enter
//   ||e_1 + (sigma_bar/dco) N||^2 = 1 + 2 (sigma_bar/dco) n1
//                                     + (sigma_bar/dco)^2 nsq,
// so any (r, sigma_bar) success probability is re-evaluated from the same
// draws without regenerating normals.
struct CoDrawBatch {
    std::vector<double> n1;
    std::vector<double> nsq;
    std::size_t dco = 0;

    void generate(std::size_t dco_in, std::uint64_t n, std::uint64_t seed) {
        dco = dco_in;
        n1.resize(n);
        nsq.resize(n);
        Rng rng(seed);
        for (std::uint64_t i = 0; i < n; ++i) {
            const double first = rng.normal();
            double sum = first * first;
            for (std::size_t j = 1; j < dco; ++j) {
                const double c = rng.normal();
                sum += c * c;
            }
            n1[i] = first;
            nsq[i] = sum;
        }
    }

    double success_rate(double r, double sigma_bar) const {
        if (r >= 1.0) return 0.0;
        const double scale = sigma_bar / static_cast<double>(dco);
        const double threshold = (1.0 - r) * (1.0 - r);
        std::uint64_t hits = 0;
        for (std::size_t i = 0; i < n1.size(); ++i) {
            const double sum = 1.0 + scale * (2.0 * n1[i] + scale * nsq[i]);
            if (sum <= threshold) ++hits;
        }
        return static_cast<double>(hits) / static_cast<double>(n1.size());
    }

    // At rate 0 a draw succeeds exactly for sigma_bar <= -2 n1 dco / nsq,
    // so the common-draw bisection for a target success probability
    // collapses to an order statistic of those cutoffs.
    double sigma_bar_at(double target) const {
        std::vector<double> cutoff(n1.size());
        for (std::size_t i = 0; i < n1.size(); ++i) {
            cutoff[i] =
                n1[i] < 0.0 ? -2.0 * n1[i] * static_cast<double>(dco) / nsq[i] : 0.0;
        }
        const auto n = cutoff.size();
        auto rank = static_cast<std::size_t>(target * static_cast<double>(n));
        if (rank < 1) rank = 1;
        if (rank > n) rank = n;
        std::nth_element(cutoff.begin(), cutoff.begin() + (rank - 1), cutoff.end(),
                         std::greater<double>());
        const double sigma_bar = cutoff[rank - 1];
        if (!(sigma_bar > 0.0)) {
            throw std::runtime_error(
                "diagnostics: success-rate target unreachable from the drawn batch");
        }
        return sigma_bar;
    }
};

double grid_min_success(const CoDrawBatch& batch, double r, double ell, double u) {
    double minimum = 1.0;
    const int points = 5;
    for (int i = 0; i < points; ++i) {
        const double sigma_bar = ell + (u - ell) * i / (points - 1);
        minimum = std::min(minimum, batch.success_rate(r, sigma_bar));
    }
    return minimum;
}

} // namespace

double sigma_bar_for_success_rate(double target, std::size_t dco, std::uint64_t n,
                                  std::uint64_t seed) {
    if (!(target > 0.0 && target < 0.5)) {
        fail_invariant("sigma_bar_for_success_rate requires target in (0, 1/2)");
    }
    if (dco < 1) fail_invariant("sigma_bar_for_success_rate requires dco >= 1");
    if (n < 1) fail_invariant("sigma_bar_for_success_rate requires n >= 1");
    CoDrawBatch batch;
    batch.generate(dco, n, seed);
    return batch.sigma_bar_at(target);
}

CanonicalDriftSetup canonical_drift_setup(const StrategyParams& params, std::size_t dco,
                             std::size_t din, double p_mut, std::uint64_t n_mc,
                             std::uint64_t seed) {
    validate_params(params);
    if (dco < 2) fail_invariant("canonical_drift_setup requires dco >= 2");
    if (!(p_mut > 0.0 && p_mut < 1.0)) {
        fail_invariant("canonical_drift_setup requires p_mut in (0, 1)");
    }
    if (n_mc < 1) fail_invariant("canonical_drift_setup requires n_mc >= 1");
    const double s = params.s;
    if (!(s > 2.0)) {
        fail_invariant("canonical_drift_setup requires s > 2: the induced target "
                       "(1/s + 1/2)/2 must stay below 1/2");
    }
    const double log_alpha = std::log(params.alpha);

    CanonicalDriftSetup setup;
    setup.potential.a_co = 1.0 / static_cast<double>(dco);
    setup.potential.p_u = 1.0 / (2.0 * s);
    setup.potential.p_ell = (1.0 / s + 0.5) / 2.0;

    CoDrawBatch batch;
    batch.generate(dco, n_mc, seed);
    setup.potential.u = batch.sigma_bar_at(setup.potential.p_u);
    setup.potential.ell = batch.sigma_bar_at(setup.potential.p_ell);

    setup.bound.r_prime = r_prime_rate(params.alpha, dco);
    setup.bound.p_prime =
        grid_min_success(batch, setup.bound.r_prime, setup.potential.ell,
                         setup.potential.u);
    if (!(setup.bound.p_prime > 0.0)) {
        throw std::runtime_error(
            "diagnostics: estimated p_prime is 0; enlarge the sample");
    }
    setup.potential.v =
        setup.bound.p_prime / (2.0 * static_cast<double>(dco) * log_alpha);
    setup.potential.v_in = 2.0 * setup.potential.v;

    setup.bound.r_star = r_star_rate(setup.potential.a_co, setup.potential.v);
    setup.bound.p_star = grid_min_success(batch, setup.bound.r_star,
                                          setup.potential.ell, setup.potential.u);
    setup.bound.gamma = gamma_exponent(params.alpha, s);
    setup.bound.p_succ_in_lb =
        std::exp(static_cast<double>(din) * std::log1p(-p_mut));

    validate_potential_config(setup.potential, params);
    return setup;
}

DriftBoundReport drift_bound_B(const StrategyParams& params, std::size_t dco,
                               const PotentialConfig& cfg,
                               const DriftBoundConfig& bound) {
    validate_potential_config(cfg, params);
    if (!(bound.gamma > 0.0)) fail_invariant("drift bound requires gamma > 0");
    const double gamma_expected = gamma_exponent(params.alpha, params.s);
    if (std::abs(bound.gamma - gamma_expected) > 1e-12) {
        fail_invariant("drift bound gamma disagrees with (alpha, s)");
    }
    if (std::abs(bound.r_prime - r_prime_rate(params.alpha, dco)) > 1e-12) {
        fail_invariant("drift bound r_prime disagrees with (alpha, dco)");
    }
    if (std::abs(bound.r_star - r_star_rate(cfg.a_co, cfg.v)) > 1e-12) {
        fail_invariant("drift bound r_star disagrees with (a_co, v)");
    }
    for (double p : {bound.p_succ_in_lb, bound.p_star, bound.p_prime}) {
        if (!(p > 0.0 && p <= 1.0)) {
            fail_invariant("drift bound probabilities must lie in (0, 1]");
        }
    }
    const double s = params.s;
    const double log_alpha = std::log(params.alpha);
    const double p_in = bound.p_succ_in_lb;

    DriftBoundReport report;
    report.a = cfg.a_co + cfg.v_in * log_alpha / (s - 1.0);
    report.b1_finite_part = (cfg.v_in - cfg.v) * log_alpha / (s - 1.0);
    report.b1_remainder_omitted = true;
    report.b2_prime = cfg.a_co * bound.p_star - s * cfg.v * log_alpha / (s - 1.0);
    report.b2 = report.b2_prime * p_in;
    report.b3_prime = cfg.v * log_alpha * (s * cfg.p_ell - 1.0) / (s - 1.0);
    report.b3 = cfg.v * log_alpha * (s * cfg.p_ell * p_in - 1.0) / (s - 1.0);
    report.b4_prime = cfg.v * log_alpha * (1.0 - s * cfg.p_u) / (s - 1.0);
    report.b4 = report.b4_prime * p_in;
    return report;
}

double wallis_integral(std::size_t d) {
    double even = 1.5707963267948966;  // W_0 = pi/2
    double odd = 1.0;                  // W_1
    if (d == 0) return even;
    if (d == 1) return odd;
    double value = d % 2 == 0 ? even : odd;
    for (std::size_t k = 2 + (d % 2); k <= d; k += 2) {
        value *= (static_cast<double>(k) - 1.0) / static_cast<double>(k);
    }
    return value;
}

double variance_upper_bound(std::size_t dco, double s, double alpha) {
    if (dco < 2) fail_invariant("variance bound requires dco >= 2");
    if (!(s > 1.0) || !(alpha > 1.0)) {
        fail_invariant("variance bound requires s > 1 and alpha > 1");
    }
    const double log_alpha = std::log(alpha);
    const double v_sigma_root = 0.5 * s * s * log_alpha / (s - 1.0);
    const double v_sigma = v_sigma_root * v_sigma_root;
    const double dcod = static_cast<double>(dco);
    const double v_m = 2.0 * s * (dcod - 1.0) * wallis_integral(dco - 2) +
                       s * (s - 1.0) / (dcod * dcod);
    const double root = std::sqrt(v_m) + std::sqrt(v_sigma);
    return root * root;
}

HittingTimeReport hitting_time_fit(const std::vector<HitObservation>& observations,
                                   double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        fail_invariant("hitting_time_fit requires epsilon in (0, 1)");
    }
    const double log_inv_eps = std::log(1.0 / epsilon);
    std::map<std::size_t, MeanAccumulator> by_dim;
    std::uint64_t censored = 0;
    for (const auto& obs : observations) {
        if (obs.dco < 1) fail_invariant("hitting_time_fit requires dco >= 1");
        if (!obs.hit) {
            ++censored;
            continue;
        }
        by_dim[obs.dco].add(static_cast<double>(obs.t_eps) /
                            (static_cast<double>(obs.dco) * log_inv_eps));
    }
    if (by_dim.size() < 3) {
        fail_invariant("hitting_time_fit requires hits at >= 3 distinct dco");
    }
    HittingTimeReport report;
    report.n_censored = censored;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& [dim, acc] : by_dim) {
        report.per_dim.push_back({dim, acc.mean, acc.n});
        lo = std::min(lo, acc.mean);
        hi = std::max(hi, acc.mean);
    }
    report.ratio_max_over_min = hi / lo;
    return report;
}

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        fail_invariant("lsq_slope requires >= 2 paired points");
    }
    const double n = static_cast<double>(x.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= n;
    mean_y /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mean_x;
        sxx += dx * dx;
        sxy += dx * (y[i] - mean_y);
    }
    if (!(sxx > 0.0)) fail_invariant("lsq_slope requires non-constant x");
    return sxy / sxx;
}

StagnationReport stagnation_detector(const std::vector<IterationRecord>& records,
                                     double window_fraction) {
    if (records.size() < 100) {
        fail_invariant("stagnation detector requires >= 100 records");
    }
    if (!(window_fraction > 0.0 && window_fraction <= 1.0)) {
        fail_invariant("stagnation detector requires window_fraction in (0, 1]");
    }
    auto window = static_cast<std::size_t>(
        std::ceil(window_fraction * static_cast<double>(records.size())));
    window = std::max<std::size_t>(window, 2);
    const std::size_t start = records.size() - window;

    std::vector<double> t_values(window);
    std::vector<double> log10_norm(window);
    for (std::size_t i = 0; i < window; ++i) {
        const auto& rec = records[start + i];
        t_values[i] = static_cast<double>(rec.t);
        log10_norm[i] = rec.log_norm_m / kLn10;
    }
    StagnationReport report;
    report.tail_slope = lsq_slope(t_values, log10_norm);
    report.log_ratio_final =
        (records.back().log_norm_m - records.back().log_sigma) / kLn10;
    report.stagnated = report.tail_slope >= report.slope_threshold &&
                       report.log_ratio_final >= report.ratio_threshold;
    return report;
}

} // namespace mies
