#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mies/problems.hpp"
#include "mies/rng.hpp"

using namespace mies;

namespace {

MixedSolution random_solution(Rng& rng, std::size_t dco, std::size_t din) {
    MixedSolution s;
    s.x.resize(dco);
    s.z.resize(din);
    for (auto& v : s.x) v = rng.uniform(-3.0, 3.0);
    for (auto& v : s.z) v = static_cast<std::int64_t>(rng.next_below(5)) - 2;
    return s;
}

} // namespace

TEST_CASE("sphere value sums both squared norms") {
    CHECK(sphere_int_value({{0.0, 0.0}, {0}}) == 0.0);
    CHECK(sphere_int_value({{1.0, 2.0}, {3}}) == 14.0);
    CHECK(sphere_int_value({{-1.0, 2.0}, {3}}) == 14.0);
    CHECK(norm_sq(std::vector<double>{}) == 0.0);
    CHECK(norm_sq_int(std::vector<std::int64_t>{-4, 3}) == 25.0);
    CHECK_THROWS_AS((void)norm_sq(std::vector<double>{std::numeric_limits<double>::quiet_NaN()}),
                    std::domain_error);
}

TEST_CASE("problem spec validation") {
    CHECK_NOTHROW(validate_problem_spec({ProblemKind::sphere_int, 1, 0}));
    CHECK_THROWS_AS(validate_problem_spec({ProblemKind::sphere_int, 0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(validate_problem_spec({ProblemKind::lexico_sphere_int, 3, -1}),
                    std::invalid_argument);
}

TEST_CASE("lexicographic ranking compares integers first, ties accept") {
    const ProblemSpec spec{ProblemKind::lexico_sphere_int, 1, 1};
    CHECK(is_no_worse({{0.9}, {0}}, {{1.0}, {0}}, spec));
    CHECK_FALSE(is_no_worse({{0.1}, {1}}, {{100.0}, {0}}, spec));
    CHECK(is_no_worse({{0.1}, {0}}, {{100.0}, {1}}, spec));
    const MixedSolution same{{1.3}, {-2}};
    CHECK(is_no_worse(same, same, spec));
    const ProblemSpec sphere{ProblemKind::sphere_int, 1, 1};
    CHECK(is_no_worse(same, same, sphere));
    CHECK(is_no_worse({{2.0}, {1}}, {{1.0}, {2}}, sphere)); // 5 <= 5
}

TEST_CASE("ranking is a total preorder on random pairs") {
    Rng rng(31337);
    for (ProblemKind kind : {ProblemKind::sphere_int, ProblemKind::lexico_sphere_int}) {
        const ProblemSpec spec{kind, 3, 2};
        for (int i = 0; i < 500; ++i) {
            const auto a = random_solution(rng, 3, 2);
            const auto b = random_solution(rng, 3, 2);
            CHECK(is_no_worse(a, a, spec));
            CHECK((is_no_worse(a, b, spec) || is_no_worse(b, a, spec)));
        }
    }
}

TEST_CASE("lexicographic acceptance never worsens either norm in order") {
    Rng rng(555);
    const ProblemSpec spec{ProblemKind::lexico_sphere_int, 3, 2};
    for (int i = 0; i < 2000; ++i) {
        const auto cand = random_solution(rng, 3, 2);
        const auto inc = random_solution(rng, 3, 2);
        if (!is_no_worse(cand, inc, spec)) continue;
        CHECK(norm_sq_int(cand.z) <= norm_sq_int(inc.z));
        if (norm_sq_int(cand.z) == norm_sq_int(inc.z)) CHECK(norm_sq(cand.x) <= norm_sq(inc.x));
    }
}

TEST_CASE("with zero integers both rankings coincide") {
    Rng rng(99);
    const ProblemSpec lex{ProblemKind::lexico_sphere_int, 4, 2};
    const ProblemSpec sph{ProblemKind::sphere_int, 4, 2};
    for (int i = 0; i < 1000; ++i) {
        auto a = random_solution(rng, 4, 2);
        auto b = random_solution(rng, 4, 2);
        a.z.assign(2, 0);
        b.z.assign(2, 0);
        CHECK(is_no_worse(a, b, lex) == is_no_worse(a, b, sph));
    }
}

TEST_CASE("integer part optimal detects the all-zero vector") {
    CHECK(integer_part_optimal({{1.0}, {0, 0}}));
    CHECK_FALSE(integer_part_optimal({{1.0}, {0, -1}}));
    CHECK(integer_part_optimal({{1.0}, {}}));
}

TEST_CASE("dimension mismatches are rejected") {
    const ProblemSpec spec{ProblemKind::lexico_sphere_int, 2, 1};
    const MixedSolution good{{1.0, 2.0}, {0}};
    const MixedSolution bad_x{{1.0}, {0}};
    const MixedSolution bad_z{{1.0, 2.0}, {0, 0}};
    CHECK_THROWS_AS((void)is_no_worse(bad_x, good, spec), std::invalid_argument);
    CHECK_THROWS_AS((void)is_no_worse(good, bad_z, spec), std::invalid_argument);
    const MixedSolution nan_x{{std::numeric_limits<double>::quiet_NaN(), 0.0}, {0}};
    CHECK_THROWS_AS((void)is_no_worse(nan_x, good, spec), std::domain_error);
}
