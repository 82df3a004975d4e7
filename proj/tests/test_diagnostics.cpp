#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mies/diagnostics.hpp"
#include "mies/normal_math.hpp"
#include "mies/rng.hpp"
#include "test_oracles.hpp"

using namespace mies;
namespace oracle = mies::test_oracle;

namespace {

constexpr double kLogAlpha15 = 0.4054651081081644; // log(1.5)

// A potential configuration that satisfies every invariant at
// alpha = 1.5, s = 5: u/ell = 6.67 > 1.5^{5/4}, v < a_co/log(alpha).
PotentialConfig hand_config() {
    PotentialConfig cfg;
    cfg.v = 0.1;
    cfg.v_in = 0.2;
    cfg.ell = 0.3;
    cfg.u = 2.0;
    cfg.p_ell = 0.3;
    cfg.p_u = 0.05;
    cfg.a_co = 0.1;
    return cfg;
}

StrategyParams lex_params(Variant variant, double sigma_lb, double s = 5.0) {
    StrategyParams p;
    p.alpha = 1.5;
    p.s = s;
    p.sigma_lb = sigma_lb;
    p.variant = variant;
    return p;
}

} // namespace

TEST_CASE("report variance is the squared error scaled by the sample size") {
    DriftReport rep;
    rep.estimate = -0.3;
    rep.std_error = 0.02;
    rep.n_replications = 10000;
    CHECK(empirical_variance(rep) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("integer success probability closed form") {
    const double p_mut = 0.005;
    const double lb = sigma_lb_from_pmut(p_mut);
    CHECK(p_succ_in(lb, 10) == doctest::Approx(std::pow(1.0 - p_mut, 10)).epsilon(1e-13));
    CHECK(p_succ_in(lb, 100) == doctest::Approx(std::pow(1.0 - p_mut, 100)).epsilon(1e-13));
    CHECK(p_succ_in(1e-6, 10) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p_succ_in(2.0, 0) == 1.0);
    // One-coordinate construction: Phi(-1/(2 sigma)) = 1/4 gives exactly 1/2.
    const double sigma_q = -1.0 / (2.0 * std_normal_quantile(0.25));
    CHECK(p_succ_in(sigma_q, 1) == doctest::Approx(0.5).epsilon(1e-13));
    // One failed step above the floor strictly lowers it.
    const double raised = lb * std::pow(1.5, 0.25);
    CHECK(p_succ_in(raised, 10) < p_succ_in(lb, 10));
    CHECK_THROWS_AS((void)p_succ_in(0.0, 10), std::invalid_argument);
}

TEST_CASE("continuous success probability estimator") {
    const auto impossible = p_succ_co_mc(1.0, 10, 0.5, 1000, 1);
    CHECK(impossible.estimate == 0.0);
    CHECK(impossible.std_error == 0.0);

    const auto tiny_step = p_succ_co_mc(0.0, 10, 1e-6, 1000000, 7);
    CHECK(tiny_step.std_error > 0.0);
    CHECK(std::abs(tiny_step.estimate - 0.5) <= 3.0 * tiny_step.std_error);

    const auto small = p_succ_co_mc(0.0, 10, 0.5, 200000, 11);
    const auto large = p_succ_co_mc(0.0, 10, 2.0, 200000, 13);
    CHECK(small.estimate - large.estimate >
          3.0 * std::sqrt(small.std_error * small.std_error +
                          large.std_error * large.std_error));

    const auto again = p_succ_co_mc(0.0, 10, 0.5, 200000, 11);
    CHECK(again.estimate == small.estimate);
    CHECK_THROWS_AS((void)p_succ_co_mc(0.0, 0, 0.5, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)p_succ_co_mc(0.0, 10, 0.5, 0, 1), std::invalid_argument);
}

TEST_CASE("potential configuration invariants are enforced") {
    const auto params = lex_params(Variant::lub, 0.2);
    CHECK_NOTHROW(validate_potential_config(hand_config(), params));
    auto narrow = hand_config();
    narrow.u = 0.45; // u/ell = 1.5 < alpha^{s/(s-1)}
    CHECK_THROWS_AS(validate_potential_config(narrow, params), std::invalid_argument);
    auto heavy = hand_config();
    heavy.v = 0.5; // above a_co/log(alpha) ~ 0.2466
    CHECK_THROWS_AS(validate_potential_config(heavy, params), std::invalid_argument);
    auto bad_ell = hand_config();
    bad_ell.p_ell = 0.2; // not strictly above 1/s
    CHECK_THROWS_AS(validate_potential_config(bad_ell, params), std::invalid_argument);
    auto bad_u = hand_config();
    bad_u.p_u = 0.25; // not strictly below 1/s
    CHECK_THROWS_AS(validate_potential_config(bad_u, params), std::invalid_argument);
    auto no_vin = hand_config();
    no_vin.v_in = 0.0;
    CHECK_THROWS_AS(validate_potential_config(no_vin, params), std::invalid_argument);
}

TEST_CASE("potential value reduces to log norm in the matched regime") {
    const auto cfg = hand_config();
    const auto params = lex_params(Variant::lub, 0.2);
    std::vector<double> m(10, 0.0);
    m[0] = 1.0;
    auto st = init_state(m, {0}, 0.1, {2.0}); // sigma <D> = 0.2 = sigma_lb
    CHECK(potential_value(st, params, cfg) == doctest::Approx(0.0).epsilon(1e-13));

    // Shifting sigma <D> one failure step up adds exactly v_in log(alpha)/4.
    st.log_sigma_d[0] += kLogAlpha15 / 4.0;
    CHECK(potential_value(st, params, cfg) ==
          doctest::Approx(cfg.v_in * kLogAlpha15 / 4.0).epsilon(1e-12));
}

TEST_CASE("potential value matches a direct recomputation on random states") {
    const auto cfg = hand_config();
    const auto params = lex_params(Variant::lub, 0.2);
    Rng rng(314);
    const std::size_t dco = 7;
    for (int rep = 0; rep < 300; ++rep) {
        std::vector<double> m(dco);
        for (auto& v : m) v = rng.uniform(-2.0, 2.0);
        if (norm_sq(m) == 0.0) m[0] = 1.0;
        auto st = init_state(m, {0, 0}, 1.0, {1.0, 1.0});
        st.log_sigma = rng.uniform(-60.0, 4.0);
        for (auto& lsd : st.log_sigma_d)
            lsd = std::max(std::log(0.2), st.log_sigma + rng.uniform(-1.0, 1.0));

        const double norm_m = std::sqrt(norm_sq(st.m));
        const double low = std::log(params.alpha * cfg.ell * norm_m /
                                    (static_cast<double>(dco))) -
                           st.log_sigma;
        const double high = std::log(static_cast<double>(dco)) + st.log_sigma +
                            kLogAlpha15 / 4.0 - std::log(cfg.u * norm_m);
        const double expected = std::log(norm_m) +
                                cfg.v * std::max({0.0, low, high}) +
                                cfg.v_in * (st.log_sigma_d[0] - std::log(0.2));
        const double got = potential_value(st, params, cfg);
        CHECK(got == doctest::Approx(expected).epsilon(1e-11));
        CHECK(got >= std::log(norm_m) - 1e-12);
    }
}

TEST_CASE("potential value rejects invalid states") {
    const auto cfg = hand_config();
    auto st = init_state({0.0, 0.0}, {0}, 1.0, {1.0});
    CHECK_THROWS_AS((void)potential_value(st, lex_params(Variant::lub, 0.2), cfg),
                    std::domain_error);
    auto ok = init_state({1.0}, {0}, 1.0, {1.0});
    CHECK_THROWS_AS((void)potential_value(ok, lex_params(Variant::lub, 0.0), cfg),
                    std::invalid_argument);
}

TEST_CASE("forced failures make the block drift exact") {
    // A candidate drawn at sigma = 1e100 around m = (1e-150) is always
    // rejected, so the block change of log(sigma) is deterministic.
    const auto st = init_state({1e-150}, {}, 1e100, {});
    BlockDriftSpec spec;
    spec.observable = BlockObservable::log_sigma;
    spec.block_len = 5;
    spec.n_replications = 2000;
    spec.seed = 99;
    const auto rep = block_drift_mc(st, lex_params(Variant::lub, 0.0),
                                    {ProblemKind::sphere_int, 1, 0}, spec);
    CHECK(rep.estimate == doctest::Approx(-5.0 * kLogAlpha15 / 4.0).epsilon(1e-13));
    CHECK(rep.std_error == 0.0);
    CHECK(rep.n_replications == 2000);
    CHECK(rep.block_len == 5);
}

TEST_CASE("mean log-norm loss per block stays above the dimension floor") {
    std::vector<double> m(10, 0.0);
    m[0] = 1.0;
    const auto st = init_state(m, {}, 0.15, {});
    BlockDriftSpec spec;
    spec.observable = BlockObservable::log_norm_m;
    spec.block_len = 5;
    spec.n_replications = 3000;
    spec.seed = 17;
    const auto rep = block_drift_mc(st, lex_params(Variant::lub, 0.0),
                                    {ProblemKind::sphere_int, 10, 0}, spec);
    CHECK(rep.estimate >= -5.0 / 10.0 - 3.0 * rep.std_error);
    CHECK(rep.estimate < 0.0);
}

TEST_CASE("floored lower-bound runs drift toward larger norm-to-sigma ratios") {
    Rng rng(5);
    std::vector<double> m(100);
    for (auto& v : m) v = rng.uniform(1.0, 3.0);
    const double lb = sigma_lb_from_pmut(1.0 / 200.0);
    auto st = init_state(m, std::vector<std::int64_t>(100, 0), lb,
                         std::vector<double>(100, 1.0));
    BlockDriftSpec spec;
    spec.observable = BlockObservable::log_ratio;
    spec.block_len = 5;
    spec.n_replications = 1500;
    spec.seed = 23;
    const auto rep = block_drift_mc(st, lex_params(Variant::lb, lb),
                                    {ProblemKind::lexico_sphere_int, 100, 100}, spec);
    CHECK(rep.estimate > 3.0 * rep.std_error);
}

TEST_CASE("truncated potential drift respects the clip and its inputs") {
    const auto cfg = hand_config();
    std::vector<double> m(10, 0.0);
    m[0] = 1.0;
    const auto st = init_state(m, {0}, 0.1, {2.0});
    BlockDriftSpec spec;
    spec.observable = BlockObservable::truncated_v;
    spec.block_len = 3;
    spec.n_replications = 500;
    spec.seed = 3;
    CHECK_THROWS_AS((void)block_drift_mc(st, lex_params(Variant::lub, 0.2),
                                         {ProblemKind::lexico_sphere_int, 10, 1}, spec),
                    std::invalid_argument);
    spec.potential = cfg;
    const auto rep = block_drift_mc(st, lex_params(Variant::lub, 0.2),
                                    {ProblemKind::lexico_sphere_int, 10, 1}, spec);
    const double a = cfg.a_co + cfg.v_in * kLogAlpha15 / 4.0;
    CHECK(rep.estimate >= -3.0 * a - 1e-12);
    const auto rep2 = block_drift_mc(st, lex_params(Variant::lub, 0.2),
                                     {ProblemKind::lexico_sphere_int, 10, 1}, spec);
    CHECK(rep.estimate == rep2.estimate);
    CHECK(rep.std_error == rep2.std_error);
}

TEST_CASE("improvement oracle reproduces its frozen values") {
    struct Anchor {
        double ratio;
        std::size_t d;
        double value;
    };
    const Anchor anchors[] = {
        {1.0, 4, -0.0160937563456502},   {2.0, 4, -0.06028407994268},
        {4.0, 4, -0.0656111824250223},   {8.0, 4, -0.0416975644999248},
        {16.0, 4, -0.0229361083015751},  {50.0, 4, -0.00777738275785584},
        {100.0, 4, -0.00393923995386283}, {1.0, 6, -0.00167184831092307},
        {2.0, 10, -0.00156610506262316}, {50.0, 10, -0.00719268778399182},
    };
    for (const auto& a : anchors)
        CHECK(truncated_log_improvement_oracle(a.ratio, a.d) ==
              doctest::Approx(a.value).epsilon(1e-8));
}

TEST_CASE("improvement oracle agrees with direct simulation") {
    struct Probe {
        double ratio;
        std::size_t d;
    };
    for (const auto& p : {Probe{1.0, 4}, Probe{2.0, 4}, Probe{1.0, 6}}) {
        const auto mc = oracle::truncated_log_improvement_mc(p.ratio, p.d, 1000000, 271828);
        const double quad = truncated_log_improvement_oracle(p.ratio, p.d);
        CHECK(std::abs(quad - mc.mean) <= 3.5 * mc.se);
    }
}

TEST_CASE("improvement oracle is nonpositive and shrinks beyond the mode") {
    for (double ratio : {0.5, 1.0, 2.0, 4.0, 20.0})
        for (std::size_t d : {std::size_t{4}, std::size_t{6}, std::size_t{10}})
            CHECK(truncated_log_improvement_oracle(ratio, d) <= 0.0);
    double prev = truncated_log_improvement_oracle(4.0, 4);
    for (double ratio : {8.0, 16.0, 50.0, 100.0}) {
        const double v = truncated_log_improvement_oracle(ratio, 4);
        CHECK(v > prev);
        CHECK(v < 0.0);
        prev = v;
    }
    CHECK_THROWS_AS((void)truncated_log_improvement_oracle(0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS((void)truncated_log_improvement_oracle(1.0, 3), std::invalid_argument);
}

TEST_CASE("improvement tail decays first order with the classical constant") {
    // Per doubling of the ratio the magnitude halves (up to transient
    // corrections), and ratio * |E| approaches 1/sqrt(2 pi).
    const double e4 = truncated_log_improvement_oracle(4.0, 4);
    const double e8 = truncated_log_improvement_oracle(8.0, 4);
    const double e16 = truncated_log_improvement_oracle(16.0, 4);
    const double e50 = truncated_log_improvement_oracle(50.0, 4);
    const double e100 = truncated_log_improvement_oracle(100.0, 4);
    for (double r : {e8 / e4, e16 / e8, e100 / e50}) {
        CHECK(r >= 0.45);
        CHECK(r <= 0.75);
    }
    const double phi0 = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    CHECK(std::abs(e100) * 100.0 / phi0 >= 0.95);
    CHECK(std::abs(e100) * 100.0 / phi0 <= 1.05);
    // The magnitude at ratio 50 is still of order 1/50, far above 1e-6.
    CHECK(std::abs(e50) > 1e-4);
}

TEST_CASE("rate helpers match their closed forms") {
    CHECK(gamma_exponent(1.5, 5.0) ==
          doctest::Approx(0.5 * (1.0 - std::pow(1.5, -0.5))).epsilon(1e-15));
    CHECK(r_prime_rate(1.5, 100) ==
          doctest::Approx(1.0 - std::exp(-kLogAlpha15 / (100.0 * kLogAlpha15 - 1.0)))
              .epsilon(1e-15));
    CHECK(r_star_rate(0.01, 0.2) ==
          doctest::Approx(1.0 - std::exp(-0.01 / 0.8)).epsilon(1e-15));
    CHECK_THROWS_AS((void)r_prime_rate(1.5, 2), std::invalid_argument);
}

TEST_CASE("success-rate inversion finds a step size with that rate") {
    const double sb = sigma_bar_for_success_rate(0.25, 10, 200000, 5);
    CHECK(sb > 0.0);
    const auto check = p_succ_co_mc(0.0, 10, sb, 200000, 6);
    CHECK(std::abs(check.estimate - 0.25) <= 4.0 * check.std_error);
    CHECK(sigma_bar_for_success_rate(0.4, 10, 200000, 5) < sb);
    CHECK(sb < sigma_bar_for_success_rate(0.15, 10, 200000, 5));
    CHECK_THROWS_AS((void)sigma_bar_for_success_rate(0.5, 10, 100, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)sigma_bar_for_success_rate(0.0, 10, 100, 1), std::invalid_argument);
}

TEST_CASE("drift-bound constants reproduce their formulas") {
    const auto params = lex_params(Variant::lub, sigma_lb_from_pmut(1.0 / 200.0));
    PotentialConfig cfg = hand_config();
    DriftBoundConfig bound;
    bound.gamma = gamma_exponent(1.5, 5.0);
    bound.p_succ_in_lb = 0.6;
    bound.r_star = r_star_rate(cfg.a_co, cfg.v);
    bound.r_prime = r_prime_rate(1.5, 100);
    bound.p_star = 0.3;
    bound.p_prime = 0.28;
    const auto rep = drift_bound_B(params, 100, cfg, bound);
    const double la = kLogAlpha15;
    CHECK(rep.a == doctest::Approx(cfg.a_co + cfg.v_in * la / 4.0).epsilon(1e-15));
    const double b2p = cfg.a_co * bound.p_star - 5.0 * cfg.v * la / 4.0;
    CHECK(rep.b2_prime == doctest::Approx(b2p).epsilon(1e-14));
    CHECK(rep.b2 == doctest::Approx(b2p * 0.6).epsilon(1e-14));
    CHECK(rep.b3_prime == doctest::Approx(cfg.v * la * (5.0 * cfg.p_ell - 1.0) / 4.0).epsilon(1e-14));
    CHECK(rep.b3 ==
          doctest::Approx(cfg.v * la * (5.0 * cfg.p_ell * 0.6 - 1.0) / 4.0).epsilon(1e-14));
    const double b4p = cfg.v * la * (1.0 - 5.0 * cfg.p_u) / 4.0;
    CHECK(rep.b4_prime == doctest::Approx(b4p).epsilon(1e-14));
    CHECK(rep.b4 == doctest::Approx(b4p * 0.6).epsilon(1e-14));
    CHECK(rep.b1_finite_part ==
          doctest::Approx((cfg.v_in - cfg.v) * la / 4.0).epsilon(1e-14));
    CHECK(rep.b1_remainder_omitted);

    auto wrong = bound;
    wrong.gamma = 0.2;
    CHECK_THROWS_AS((void)drift_bound_B(params, 100, cfg, wrong), std::invalid_argument);
    auto wrong_rate = bound;
    wrong_rate.r_prime = 0.5;
    CHECK_THROWS_AS((void)drift_bound_B(params, 100, cfg, wrong_rate), std::invalid_argument);
}

TEST_CASE("derived setup yields positive constants exactly when s is large enough") {
    const double p_mut = 1.0 / 200.0;
    const double lb = sigma_lb_from_pmut(p_mut);

    const auto good = lex_params(Variant::lub, lb, 5.0);
    const auto setup5 = canonical_drift_setup(good, 100, 100, p_mut, 200000, 77);
    CHECK(setup5.potential.v_in == doctest::Approx(2.0 * setup5.potential.v).epsilon(1e-15));
    CHECK(setup5.potential.u / setup5.potential.ell > std::pow(1.5, 1.25));
    const auto rep5 = drift_bound_B(good, 100, setup5.potential, setup5.bound);
    CHECK(rep5.b2 > 0.0);
    CHECK(rep5.b3 > 0.0);
    CHECK(rep5.b4 > 0.0);

    // s = 3 sits below 2 / p_succ_in_lb ~ 3.30 at these dimensions, so the
    // sign condition must fail.
    const auto tight = lex_params(Variant::lub, lb, 3.0);
    const auto setup3 = canonical_drift_setup(tight, 100, 100, p_mut, 200000, 77);
    const auto rep3 = drift_bound_B(tight, 100, setup3.potential, setup3.bound);
    CHECK(3.0 * setup3.potential.p_ell * setup3.bound.p_succ_in_lb < 1.0);
    CHECK(std::min({rep3.b2, rep3.b3, rep3.b4}) <= 0.0);

    CHECK_THROWS_AS((void)canonical_drift_setup(lex_params(Variant::lub, lb, 2.0), 100, 100, p_mut,
                                         10000, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)canonical_drift_setup(good, 2, 2, p_mut, 10000, 1), std::invalid_argument);
}

TEST_CASE("the drift constant scales inversely with the dimension") {
    auto bound_at = [](std::size_t dco) {
        const double p_mut = 1.0 / (2.0 * static_cast<double>(dco));
        const auto params = lex_params(Variant::lub, sigma_lb_from_pmut(p_mut), 5.0);
        const auto setup = canonical_drift_setup(params, dco, dco, p_mut, 200000, 1234);
        const auto rep = drift_bound_B(params, dco, setup.potential, setup.bound);
        return std::min({rep.b2, rep.b3, rep.b4});
    };
    const double b25 = bound_at(25);
    const double b50 = bound_at(50);
    const double b100 = bound_at(100);
    CHECK(b25 > 0.0);
    for (double r : {b50 / b25, b100 / b50}) {
        CHECK(r >= 0.3);
        CHECK(r <= 0.7);
    }
}

TEST_CASE("sine-power integrals follow the recurrence") {
    CHECK(wallis_integral(0) == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-15));
    CHECK(wallis_integral(1) == 1.0);
    CHECK(wallis_integral(2) == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-15));
    CHECK(wallis_integral(3) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(wallis_integral(4) == doctest::Approx(3.0 * std::numbers::pi / 16.0).epsilon(1e-15));
    CHECK(wallis_integral(10) == doctest::Approx(oracle::sin_power_integral(10)).epsilon(1e-10));
    CHECK(wallis_integral(48) == doctest::Approx(oracle::sin_power_integral(48)).epsilon(1e-10));
}

TEST_CASE("block variance of the log ratio stays under the closed-form bound") {
    const double s = 5.0;
    const double bound = variance_upper_bound(10, s, 1.5);
    const double vs = 0.25 * std::pow(s * s * kLogAlpha15 / (s - 1.0), 2);
    const double vm = 2.0 * s * 9.0 * wallis_integral(8) + s * (s - 1.0) / 100.0;
    CHECK(bound == doctest::Approx(std::pow(std::sqrt(vm) + std::sqrt(vs), 2)).epsilon(1e-13));
    CHECK_THROWS_AS((void)variance_upper_bound(1, 5.0, 1.5), std::invalid_argument);

    std::vector<double> m(10, 0.0);
    m[0] = 1.0;
    const auto st = init_state(m, {}, 0.15, {});
    BlockDriftSpec spec;
    spec.observable = BlockObservable::log_ratio;
    spec.block_len = 5;
    spec.n_replications = 2000;
    spec.seed = 29;
    const auto rep = block_drift_mc(st, lex_params(Variant::lub, 0.0),
                                    {ProblemKind::sphere_int, 10, 0}, spec);
    CHECK(empirical_variance(rep) <= bound);
}

TEST_CASE("hitting-time scaling fit") {
    const double eps = 1e-8;
    const double logeps = std::log(1.0 / eps);
    std::vector<HitObservation> obs;
    for (std::size_t dco : {8, 16, 32})
        for (int k = 0; k < 3; ++k)
            obs.push_back({dco, static_cast<std::uint64_t>(
                                    std::llround(100.0 * static_cast<double>(dco) * logeps)),
                           true});
    const auto rep = hitting_time_fit(obs, eps);
    REQUIRE(rep.per_dim.size() == 3);
    CHECK(rep.per_dim.front().dco == 8);
    CHECK(rep.per_dim.back().dco == 32);
    CHECK(rep.ratio_max_over_min == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(rep.per_dim[0].mean_normalized == doctest::Approx(100.0).epsilon(1e-4));
    CHECK(rep.n_censored == 0);

    obs.push_back({8, 0, false});
    const auto with_censor = hitting_time_fit(obs, eps);
    CHECK(with_censor.n_censored == 1);
    CHECK(with_censor.per_dim[0].n_runs == 3);

    std::vector<HitObservation> two{{8, 100, true}, {16, 200, true}};
    CHECK_THROWS_AS((void)hitting_time_fit(two, eps), std::invalid_argument);
    CHECK_THROWS_AS((void)hitting_time_fit(obs, 1.0), std::invalid_argument);

    // Censoring away a whole dimension drops it below the minimum.
    std::vector<HitObservation> degenerate;
    for (std::size_t dco : {8, 16})
        degenerate.push_back({dco, 1000, true});
    degenerate.push_back({32, 0, false});
    CHECK_THROWS_AS((void)hitting_time_fit(degenerate, eps), std::invalid_argument);
}

TEST_CASE("least-squares slope") {
    const std::vector<double> x{0.0, 1.0, 2.0, 3.0};
    const std::vector<double> y{3.0, 5.5, 8.0, 10.5};
    CHECK(lsq_slope(x, y) == doctest::Approx(2.5).epsilon(1e-14));
    CHECK_THROWS_AS((void)lsq_slope({1.0, 1.0}, {0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS((void)lsq_slope({1.0}, {2.0}), std::invalid_argument);
}

TEST_CASE("stagnation detector separates flat from converging traces") {
    auto make_records = [](int n, double slope_log10, double log_sigma) {
        std::vector<IterationRecord> recs(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            recs[static_cast<std::size_t>(i)].t = static_cast<std::uint64_t>(i);
            recs[static_cast<std::size_t>(i)].log_norm_m =
                slope_log10 * std::numbers::ln10 * i;
            recs[static_cast<std::size_t>(i)].log_sigma = log_sigma;
        }
        return recs;
    };

    const auto flat = stagnation_detector(make_records(150, 0.0, -20.0), 0.2);
    CHECK(flat.stagnated);
    CHECK(flat.tail_slope == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(flat.log_ratio_final == doctest::Approx(20.0 / std::numbers::ln10).epsilon(1e-12));
    CHECK(flat.slope_threshold == -1e-6);
    CHECK(flat.ratio_threshold == 6.0);

    const auto moving = stagnation_detector(make_records(150, -1e-3, -40.0), 0.2);
    CHECK_FALSE(moving.stagnated);
    CHECK(moving.tail_slope == doctest::Approx(-1e-3).epsilon(1e-6));

    const auto adapted = stagnation_detector(make_records(150, 0.0, 0.0), 0.2);
    CHECK_FALSE(adapted.stagnated); // flat but sigma still tracks the norm

    CHECK_THROWS_AS((void)stagnation_detector(make_records(99, 0.0, -20.0), 0.2),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)stagnation_detector(make_records(150, 0.0, -20.0), 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)stagnation_detector(make_records(150, 0.0, -20.0), 1.5),
                    std::invalid_argument);
}
