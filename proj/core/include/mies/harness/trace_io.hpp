#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mies/strategies.hpp"

namespace mies::harness {

// Run identity echoed into the trace's single leading comment line so a
// trace file is self-describing; sigma_lb in particular lets verify_trace
// re-check the floor invariant without the original config.
struct TraceMeta {
    std::uint64_t seed = 0;
    std::string variant;  // "lb" or "lub"
    std::string problem;  // "sphere_int" or "lexico_sphere_int"
    int dco = 0;
    int din = 0;
    double sigma_lb = 0.0;
};

// Writes `# mies-trace ...`, the mandatory header
// t,success,z_changed_any,log10_norm_m,log_sigma,sigma_d_min,f_elite
// and one data row per record with t % stride == 0, plus the final record.
// Values print with %.17g so a reread is bit-exact; booleans print as 0/1.
// Returns the number of data rows. Unwritable path -> std::runtime_error.
std::uint64_t write_trace_csv(const std::filesystem::path& path, const TraceMeta& meta,
                              const std::vector<IterationRecord>& records,
                              std::uint64_t stride);

struct TraceRow {
    std::uint64_t t = 0;
    bool success = false;
    bool z_changed_any = false;
    double log10_norm_m = 0.0;
    double log_sigma = 0.0;
    double sigma_d_min = 0.0;
    double f_elite = 0.0;
};

struct TraceFile {
    TraceMeta meta;
    std::vector<TraceRow> rows;
};

// Strict reader for the writer's format; any structural defect (missing
// header, field count, unparsable value, non-increasing t) ->
// std::runtime_error naming the line.
TraceFile read_trace_csv(const std::filesystem::path& path);

struct TraceVerification {
    bool ok = false;
    std::uint64_t n_rows = 0;
    std::string detail;  // first violated row and reason when !ok
};

// Property check on an existing trace: every row satisfies
// sigma_d_min >= sigma_lb * (1 - 1e-12). Structural defects still throw;
// only property violations are reported in-band.
TraceVerification verify_trace(const std::filesystem::path& path);

} // namespace mies::harness
