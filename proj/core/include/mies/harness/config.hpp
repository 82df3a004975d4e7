#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mies/problems.hpp"
#include "mies/strategies.hpp"

namespace mies::harness {

// Schema violations carry the offending section.key path in the message.
class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class M0Mode { uniform_1_3, explicit_vector };
enum class MInt0Mode { zeros, uniform_1_3_int, explicit_vector };

// Parsed and validated experiment description. The integer mutation floor
// is always materialized into sigma_lb; p_mut records the probability it
// was derived from when the config chose that route.
struct ExperimentConfig {
    ProblemSpec problem;
    Variant variant = Variant::lub;
    double alpha = 1.5;
    double s = 5.0;
    std::optional<double> p_mut;
    double sigma_lb = 0.0;
    double sigma0 = 1.0;
    M0Mode m0_mode = M0Mode::uniform_1_3;
    std::vector<double> m0;  // used only when m0_mode == explicit_vector
    MInt0Mode m_int0_mode = MInt0Mode::zeros;
    std::vector<std::int64_t> m_int0;  // used only when explicit
    std::vector<double> d0;            // empty means all ones
    std::vector<std::uint64_t> seeds;
    std::uint64_t budget = 0;
    std::optional<double> epsilon;
    std::uint64_t trace_stride = 1;
};

// Parses the sectioned key = value format documented in the README:
// sections [problem], [strategy], [init], [run]; '#' comments; unknown or
// duplicate keys rejected. Exactly one of strategy.p_mut / strategy.sigma_lb
// may be set; with neither, p_mut defaults to 1/(dco + din).
ExperimentConfig parse_config(const std::string& text);

// parse_config over the file's contents; unreadable file -> ConfigError.
ExperimentConfig load_config(const std::filesystem::path& path);

// Re-checks every invariant of an already materialized config.
void validate_config(const ExperimentConfig& config);

StrategyParams strategy_params(const ExperimentConfig& config);

} // namespace mies::harness
