#include "mies/harness/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "mies/diagnostics.hpp"
#include "mies/harness/svg_plot.hpp"
#include "mies/harness/trace_io.hpp"
#include "mies/normal_math.hpp"
#include "mies/rng.hpp"

namespace mies::harness {

namespace {

constexpr double kLn10 = 2.302585092994045684;
constexpr double kStagnationWindow = 0.2;

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

const char* variant_name(Variant variant) {
    return variant == Variant::lb ? "lb" : "lub";
}

const char* problem_name(ProblemKind kind) {
    return kind == ProblemKind::sphere_int ? "sphere_int" : "lexico_sphere_int";
}

double median(std::vector<double> values) {
    if (values.empty()) return std::nan("");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

void write_seed_block(std::ofstream& out, const SeedSummary& summary) {
    out << "[seed " << summary.seed << "]\n";
    out << "seed: " << summary.seed << "\n";
    if (!summary.completed) {
        out << "error: " << summary.error << "\n\n";
        return;
    }
    out << "hit: " << (summary.hit ? 1 : 0) << "\n";
    out << "t_eps: " << summary.t_eps << "\n";
    out << "final_log10_norm_m: " << format_double(summary.final_log10_norm_m) << "\n";
    out << "final_log_sigma: " << format_double(summary.final_log_sigma) << "\n";
    out << "stagnated: " << (summary.stagnated ? 1 : 0) << "\n";
    out << "tail_slope: " << format_double(summary.tail_slope) << "\n\n";
}

} // namespace

StrategyState initial_state(const ExperimentConfig& config, std::uint64_t seed) {
    Rng init_rng(derive_seed(seed, 0));
    const auto dco = static_cast<std::size_t>(config.problem.dco);
    const auto din = static_cast<std::size_t>(config.problem.din);

    std::vector<double> m0(dco);
    if (config.m0_mode == M0Mode::explicit_vector) {
        m0 = config.m0;
    } else {
        for (double& v : m0) v = init_rng.uniform(1.0, 3.0);
    }
    std::vector<std::int64_t> m_int0(din, 0);
    if (config.m_int0_mode == MInt0Mode::explicit_vector) {
        m_int0 = config.m_int0;
    } else if (config.m_int0_mode == MInt0Mode::uniform_1_3_int) {
        for (auto& v : m_int0) v = 1 + static_cast<std::int64_t>(init_rng.next_below(3));
    }
    std::vector<double> d0 = config.d0;
    if (d0.empty()) d0.assign(din, 1.0);
    return init_state(std::move(m0), std::move(m_int0), config.sigma0, std::move(d0));
}

RunArtifacts run_experiment(const ExperimentConfig& config,
                            const std::filesystem::path& out_dir) {
    validate_config(config);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());
    }

    RunArtifacts artifacts;
    std::vector<PlotSeries> curves;
    const StrategyParams params = strategy_params(config);

    for (const std::uint64_t seed : config.seeds) {
        SeedSummary summary;
        summary.seed = seed;
        try {
            const StrategyState state0 = initial_state(config, seed);
            const RunTrace trace = run(state0, params, config.problem,
                                       derive_seed(seed, 1), config.budget,
                                       config.epsilon);

            TraceMeta meta;
            meta.seed = seed;
            meta.variant = variant_name(config.variant);
            meta.problem = problem_name(config.problem.kind);
            meta.dco = config.problem.dco;
            meta.din = config.problem.din;
            meta.sigma_lb = config.sigma_lb;
            const auto trace_path =
                out_dir / ("trace_seed" + std::to_string(seed) + ".csv");
            write_trace_csv(trace_path, meta, trace.records, config.trace_stride);
            artifacts.trace_paths.push_back(trace_path);

            summary.completed = true;
            summary.hit = trace.hit_t.has_value();
            summary.t_eps =
                trace.hit_t ? static_cast<std::int64_t>(*trace.hit_t) : -1;
            const auto& last = trace.records.back();
            summary.final_log10_norm_m = last.log_norm_m / kLn10;
            summary.final_log_sigma = last.log_sigma;
            if (trace.records.size() >= 100) {
                const StagnationReport report =
                    stagnation_detector(trace.records, kStagnationWindow);
                summary.stagnated = report.stagnated;
                summary.tail_slope = report.tail_slope;
            }

            PlotSeries curve;
            curve.label = "seed " + std::to_string(seed);
            curve.x.reserve(trace.records.size());
            curve.y.reserve(trace.records.size());
            for (const auto& rec : trace.records) {
                curve.x.push_back(static_cast<double>(rec.t));
                curve.y.push_back(rec.log_norm_m / kLn10);
            }
            curves.push_back(std::move(curve));
        } catch (const std::exception& e) {
            summary.completed = false;
            summary.error = e.what();
        }
        artifacts.seeds.push_back(std::move(summary));
    }

    artifacts.plot_path = out_dir / "plot.svg";
    char title[160];
    std::snprintf(title, sizeof(title), "%s on %s, dco=%d din=%d, s=%.10g",
                  variant_name(config.variant), problem_name(config.problem.kind),
                  config.problem.dco, config.problem.din, config.s);
    write_line_plot_svg(artifacts.plot_path, title, "iteration", "log10 ||m||", curves);

    artifacts.summary_path = out_dir / "summary.txt";
    std::ofstream out(artifacts.summary_path);
    if (!out) {
        throw std::runtime_error("cannot open " + artifacts.summary_path.string() +
                                 " for writing");
    }
    out << "# mies ensemble summary\n\n";
    std::vector<double> t_eps_values;
    std::vector<double> final_norms;
    std::vector<double> final_sigmas;
    std::uint64_t n_completed = 0;
    std::uint64_t n_hit = 0;
    std::uint64_t n_stagnated = 0;
    for (const auto& summary : artifacts.seeds) {
        write_seed_block(out, summary);
        if (!summary.completed) continue;
        ++n_completed;
        if (summary.hit) {
            ++n_hit;
            t_eps_values.push_back(static_cast<double>(summary.t_eps));
        }
        if (summary.stagnated) ++n_stagnated;
        final_norms.push_back(summary.final_log10_norm_m);
        final_sigmas.push_back(summary.final_log_sigma);
    }
    out << "[ensemble]\n";
    out << "seeds:";
    for (const auto seed : config.seeds) out << ' ' << seed;
    out << "\n";
    out << "n_seeds: " << config.seeds.size() << "\n";
    out << "n_completed: " << n_completed << "\n";
    out << "n_hit: " << n_hit << "\n";
    out << "n_stagnated: " << n_stagnated << "\n";
    out << "median_t_eps: " << (t_eps_values.empty() ? "-1" : format_double(median(t_eps_values)))
        << "\n";
    out << "median_final_log10_norm_m: "
        << (final_norms.empty() ? "nan" : format_double(median(final_norms))) << "\n";
    out << "median_final_log_sigma: "
        << (final_sigmas.empty() ? "nan" : format_double(median(final_sigmas))) << "\n";

    char stamp[64];
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &utc);
    out << "# generated-at: " << stamp << "\n";
    out.flush();
    if (!out) {
        throw std::runtime_error("write failed: " + artifacts.summary_path.string());
    }
    return artifacts;
}

namespace {

struct FigureCell {
    std::string name;
    ExperimentConfig config;
};

ExperimentConfig grid_config(ProblemKind kind, int dco, int din, Variant variant,
                             double s, std::uint64_t budget, bool with_epsilon,
                             MInt0Mode m_int0_mode) {
    ExperimentConfig config;
    config.problem.kind = kind;
    config.problem.dco = dco;
    config.problem.din = din;
    config.variant = variant;
    config.alpha = 1.5;
    config.s = s;
    config.p_mut = 1.0 / static_cast<double>(dco + din);
    config.sigma_lb = sigma_lb_from_pmut(*config.p_mut);
    config.sigma0 = 1.0;
    config.m0_mode = M0Mode::uniform_1_3;
    config.m_int0_mode = m_int0_mode;
    config.seeds.resize(10);
    for (std::size_t i = 0; i < config.seeds.size(); ++i) config.seeds[i] = i + 1;
    config.budget = budget;
    if (with_epsilon) config.epsilon = 1e-8;
    config.trace_stride = std::max<std::uint64_t>(1, budget / 2000);
    return config;
}

std::string cell_name(Variant variant, int dco, int din, double s) {
    char buffer[80];
    std::snprintf(buffer, sizeof(buffer), "%s_dco%d_din%d_s%.10g",
                  variant_name(variant), dco, din, s);
    return buffer;
}

std::vector<FigureCell> figure_cells(FigureId fig, FigureScale scale) {
    std::vector<FigureCell> cells;
    const bool desk = scale == FigureScale::desk;
    switch (fig) {
        case FigureId::fig1:
        case FigureId::fig2: {
            const Variant variant = fig == FigureId::fig1 ? Variant::lb : Variant::lub;
            // fig2 stops at epsilon to report hitting times; fig1 exhausts
            // the budget so stagnation is visible.
            const bool with_epsilon = fig == FigureId::fig2;
            std::vector<int> dims;
            std::vector<double> s_values;
            if (desk) {
                dims = fig == FigureId::fig1 ? std::vector<int>{20, 100}
                                             : std::vector<int>{20, 40, 100};
                s_values = {2.0, 5.0};
            } else {
                dims = {10, 20, 50, 100};
                s_values = {2.0, 5.0, 10.0};
            }
            for (const int d : dims) {
                const std::uint64_t budget = d >= 100 ? 200000 : 50000;
                for (const double s : s_values) {
                    cells.push_back(
                        {cell_name(variant, d, d, s),
                         grid_config(ProblemKind::lexico_sphere_int, d, d, variant, s,
                                     budget, with_epsilon, MInt0Mode::zeros)});
                }
            }
            break;
        }
        case FigureId::fig3: {
            const int d = desk ? 20 : 100;
            const std::uint64_t budget = desk ? 100000 : 200000;
            for (const Variant variant : {Variant::lb, Variant::lub}) {
                cells.push_back(
                    {cell_name(variant, d, d, 5.0),
                     grid_config(ProblemKind::sphere_int, d, d, variant, 5.0, budget,
                                 false, MInt0Mode::uniform_1_3_int)});
            }
            break;
        }
    }
    return cells;
}

} // namespace

FigureArtifacts reproduce_figure(FigureId fig, FigureScale scale,
                                 const std::filesystem::path& out_dir) {
    const char* fig_name = fig == FigureId::fig1   ? "fig1"
                           : fig == FigureId::fig2 ? "fig2"
                                                   : "fig3";
    const auto fig_dir = out_dir / fig_name;
    std::error_code ec;
    std::filesystem::create_directories(fig_dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create " + fig_dir.string() + ": " + ec.message());
    }

    FigureArtifacts artifacts;
    const auto cells = figure_cells(fig, scale);

    artifacts.manifest_path = fig_dir / "manifest.txt";
    std::ofstream manifest(artifacts.manifest_path);
    if (!manifest) {
        throw std::runtime_error("cannot open " + artifacts.manifest_path.string() +
                                 " for writing");
    }
    manifest << "figure: " << fig_name << "\n";
    manifest << "scale: " << (scale == FigureScale::desk ? "desk" : "paper") << "\n";
    if (fig == FigureId::fig3) {
        manifest << "note: covariance-adapting baselines are out of scope; only the "
                    "lb and lub variants are reproduced\n";
    }
    for (const auto& cell : cells) {
        manifest << "cell: " << cell.name << " problem="
                 << problem_name(cell.config.problem.kind)
                 << " dco=" << cell.config.problem.dco
                 << " din=" << cell.config.problem.din
                 << " s=" << cell.config.s << " budget=" << cell.config.budget
                 << " epsilon="
                 << (cell.config.epsilon ? format_double(*cell.config.epsilon)
                                         : std::string("none"))
                 << " seeds=" << cell.config.seeds.size() << "\n";
    }
    manifest.flush();
    if (!manifest) {
        throw std::runtime_error("write failed: " + artifacts.manifest_path.string());
    }

    for (const auto& cell : cells) {
        artifacts.cells.push_back(run_experiment(cell.config, fig_dir / cell.name));
    }
    return artifacts;
}

} // namespace mies::harness
