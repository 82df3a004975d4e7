#include "mies/problems.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace mies {

void validate_problem_spec(const ProblemSpec& spec) {
    if (spec.dco < 1) {
        throw std::invalid_argument("ProblemSpec: dco must be >= 1");
    }
    if (spec.din < 0) {
        throw std::invalid_argument("ProblemSpec: din must be >= 0");
    }
}

double norm_sq(std::span<const double> x) {
    double acc = 0.0;
    for (double c : x) {
        if (std::isnan(c)) {
            throw std::domain_error("norm_sq: NaN component");
        }
        acc += c * c;
    }
    return acc;
}

double norm_sq_int(std::span<const std::int64_t> z) {
    double acc = 0.0;
    for (std::int64_t c : z) {
        const double d = static_cast<double>(c);
        acc += d * d;
    }
    return acc;
}

double sphere_int_value(const MixedSolution& s) {
    return norm_sq(s.x) + norm_sq_int(s.z);
}

namespace {

void check_dims(const MixedSolution& s, const ProblemSpec& spec, const char* role) {
    if (s.x.size() != static_cast<std::size_t>(spec.dco) ||
        s.z.size() != static_cast<std::size_t>(spec.din)) {
        throw std::invalid_argument(std::string("is_no_worse: ") + role +
                                    " dimensions do not match the problem spec");
    }
}

} // namespace

bool is_no_worse(const MixedSolution& candidate, const MixedSolution& incumbent,
                 const ProblemSpec& spec) {
    validate_problem_spec(spec);
    check_dims(candidate, spec, "candidate");
    check_dims(incumbent, spec, "incumbent");
    if (spec.kind == ProblemKind::sphere_int) {
        return sphere_int_value(candidate) <= sphere_int_value(incumbent);
    }
    const double zc = norm_sq_int(candidate.z);
    const double zi = norm_sq_int(incumbent.z);
    if (zc < zi) return true;
    if (zc > zi) return false;
    return norm_sq(candidate.x) <= norm_sq(incumbent.x);
}

bool integer_part_optimal(const MixedSolution& s) {
    for (std::int64_t c : s.z) {
        if (c != 0) return false;
    }
    return true;
}

} // namespace mies
