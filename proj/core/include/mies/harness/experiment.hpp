#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mies/harness/config.hpp"

namespace mies::harness {

// Per-seed outcome; keys mirror the summary file. A seed that raised an
// error carries the message and contributes nothing else.
struct SeedSummary {
    std::uint64_t seed = 0;
    bool completed = false;
    std::string error;
    bool hit = false;
    std::int64_t t_eps = -1;  // -1 when the run never hit epsilon
    double final_log10_norm_m = 0.0;
    double final_log_sigma = 0.0;
    bool stagnated = false;
    double tail_slope = 0.0;
};

struct RunArtifacts {
    std::vector<std::filesystem::path> trace_paths;
    std::filesystem::path summary_path;
    std::filesystem::path plot_path;
    std::vector<SeedSummary> seeds;
};

// The t = 0 state a given seed starts from: explicit vectors are copied,
// sampled modes draw from the seed's dedicated init stream (the run itself
// consumes a different stream).
StrategyState initial_state(const ExperimentConfig& config, std::uint64_t seed);

// Executes one run per seed into out_dir: trace_seed<N>.csv each,
// summary.txt (per-seed blocks, ensemble medians, timestamp footer) and
// plot.svg overlaying log10||m_t|| for all seeds. Initial vectors are
// sampled from the seed's init stream; the run consumes a separate stream,
// so identical configs reproduce identical traces. A failing seed is
// recorded in its summary block and does not abort the ensemble.
RunArtifacts run_experiment(const ExperimentConfig& config,
                            const std::filesystem::path& out_dir);

enum class FigureId { fig1, fig2, fig3 };
enum class FigureScale { desk, paper };

struct FigureArtifacts {
    std::filesystem::path manifest_path;
    std::vector<RunArtifacts> cells;
};

// Ensemble grids matching the numerical study's three figures. fig1: the
// lower-bound variant across (dco, din) and s grids on LexicoSphereInt
// from the optimal integer point; fig2: the same grid for the
// lower-and-upper-bound variant; fig3: both variants on SphereInt from
// non-optimal integers (covariance-adapting baselines are out of scope and
// noted in the manifest). The desk scale shrinks dimensions and budgets;
// presets are tabulated in the README.
FigureArtifacts reproduce_figure(FigureId fig, FigureScale scale,
                                 const std::filesystem::path& out_dir);

} // namespace mies::harness
