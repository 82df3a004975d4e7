#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "mies/harness/checks.hpp"
#include "mies/harness/config.hpp"
#include "mies/harness/experiment.hpp"
#include "mies/harness/trace_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitProperty = 3;

int command_run(const std::string& config_path, const std::string& out_dir) {
    mies::harness::ExperimentConfig config;
    try {
        config = mies::harness::load_config(config_path);
    } catch (const mies::harness::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitConfig;
    }
    const auto artifacts = mies::harness::run_experiment(config, out_dir);
    for (const auto& seed : artifacts.seeds) {
        if (!seed.completed) {
            std::fprintf(stderr, "seed %llu failed: %s\n",
                         static_cast<unsigned long long>(seed.seed), seed.error.c_str());
        }
    }
    std::printf("summary: %s\n", artifacts.summary_path.string().c_str());
    std::printf("plot: %s\n", artifacts.plot_path.string().c_str());
    std::printf("traces: %zu\n", artifacts.trace_paths.size());
    return kExitOk;
}

int command_figure(const std::string& id, const std::string& scale,
                   const std::string& out_dir) {
    const auto fig = id == "fig1"   ? mies::harness::FigureId::fig1
                     : id == "fig2" ? mies::harness::FigureId::fig2
                                    : mies::harness::FigureId::fig3;
    const auto fig_scale = scale == "paper" ? mies::harness::FigureScale::paper
                                            : mies::harness::FigureScale::desk;
    const auto artifacts = mies::harness::reproduce_figure(fig, fig_scale, out_dir);
    std::printf("manifest: %s\n", artifacts.manifest_path.string().c_str());
    std::printf("cells: %zu\n", artifacts.cells.size());
    return kExitOk;
}

int command_check_props(std::uint64_t seed) {
    const auto results = mies::harness::run_property_checks(seed);
    bool all_passed = true;
    for (const auto& result : results) {
        std::printf("%s %s - %s\n", result.passed ? "PASS" : "FAIL",
                    result.name.c_str(), result.detail.c_str());
        all_passed = all_passed && result.passed;
    }
    return all_passed ? kExitOk : kExitProperty;
}

int command_verify_trace(const std::string& path) {
    const auto result = mies::harness::verify_trace(path);
    std::printf("%s %s\n", result.ok ? "PASS" : "FAIL", result.detail.c_str());
    return result.ok ? kExitOk : kExitProperty;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mixed-integer (1+1)-ES laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string run_out = "out";
    auto* run_cmd = app.add_subcommand("run", "execute a config's seed ensemble");
    run_cmd->add_option("config", config_path, "experiment config file")->required();
    run_cmd->add_option("--out", run_out, "output directory (default: out)");

    std::string figure_id;
    std::string figure_scale = "desk";
    std::string figure_out = "out";
    auto* figure_cmd = app.add_subcommand("figure", "reproduce a figure preset");
    figure_cmd->add_option("id", figure_id, "fig1, fig2 or fig3")
        ->required()
        ->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
    figure_cmd->add_option("--scale", figure_scale, "desk or paper (default: desk)")
        ->check(CLI::IsMember({"desk", "paper"}));
    figure_cmd->add_option("--out", figure_out, "output directory (default: out)");

    std::uint64_t check_seed = 20240601;
    auto* check_cmd =
        app.add_subcommand("check-props", "run the property-check battery");
    check_cmd->add_option("--seed", check_seed, "master seed for statistical checks");

    std::string trace_path;
    auto* verify_cmd =
        app.add_subcommand("verify-trace", "check a trace CSV's floor invariant");
    verify_cmd->add_option("csv", trace_path, "trace file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (run_cmd->parsed()) return command_run(config_path, run_out);
        if (figure_cmd->parsed()) return command_figure(figure_id, figure_scale, figure_out);
        if (check_cmd->parsed()) return command_check_props(check_seed);
        if (verify_cmd->parsed()) return command_verify_trace(trace_path);
    } catch (const mies::harness::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
    return kExitOk;
}
