#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mies {

enum class ProblemKind { sphere_int, lexico_sphere_int };

// Problem instance: dco continuous coordinates, din integer coordinates.
// din = 0 is allowed and degenerates both problems to the continuous sphere.
struct ProblemSpec {
    ProblemKind kind = ProblemKind::lexico_sphere_int;
    int dco = 1;
    int din = 0;
};

// Throws std::invalid_argument unless dco >= 1 and din >= 0.
void validate_problem_spec(const ProblemSpec& spec);

struct MixedSolution {
    std::vector<double> x;        // continuous part
    std::vector<std::int64_t> z;  // integer part
};

// ||x||^2 with NaN components rejected (domain error).
double norm_sq(std::span<const double> x);

// ||z||^2 accumulated in double; exact for the magnitudes this laboratory
// produces (|z_i| <= 2^26).
double norm_sq_int(std::span<const std::int64_t> z);

// f(x, z) = ||x||^2 + ||z||^2 for both problem kinds.
double sphere_int_value(const MixedSolution& s);

// Elitist acceptance predicate: true iff the candidate ranks no worse than
// the incumbent, with ties accepted.
//   sphere_int:        f(c) <= f(i)
//   lexico_sphere_int: ||z_c||^2 < ||z_i||^2, or equal integer norms and
//                      ||x_c||^2 <= ||x_i||^2
// Dimension mismatches against spec -> invalid_argument; NaN -> domain error.
bool is_no_worse(const MixedSolution& candidate, const MixedSolution& incumbent,
                 const ProblemSpec& spec);

// True iff every integer coordinate is zero (vacuously true for din = 0).
bool integer_part_optimal(const MixedSolution& s);

} // namespace mies
