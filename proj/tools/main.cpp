#include <CLI11.hpp>
#include <exception>
#include <iostream>

#include "fbkde/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"fbkde: fixed-bandwidth kernel density estimation"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Config file (key = value, [section] headers)");

    fbkde::cli::RunConfig config;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--density", config.density,
                        "Synthetic density: bimodal|trimodal|kurtotic|triangular|gaussian");
        cmd->add_option("--csv", config.csv, "Input CSV (header row + numeric rows)");
        cmd->add_option("--n", config.n, "Training sample size (synthetic sources)");
        cmd->add_option("--n-test", config.n_test, "Test sample size (default n/4)");
        cmd->add_option("--seed", config.seed, "Master RNG seed");
        cmd->add_option("--method", config.method, "fbkde|kde|vkde|box");
        cmd->add_option("--tuning", config.tuning, "rot|cv (bench also accepts both)");
        cmd->add_option("--out", config.out, "Output path (stdout when omitted)");
        cmd->add_option("--repeats", config.repeats, "Seeded repetitions (bench/sweep)");
        cmd->add_option("--sigma", config.sigma, "Override bandwidth");
        cmd->add_option("--radius", config.radius, "Override l1 radius R_n");
        cmd->add_option("--gamma", config.gamma, "Override jitter scale sigma_gamma");
        cmd->add_option("--box-q", config.box_q, "Box grid q (sigma = 1/(2q))");
        cmd->add_option("--box-m", config.box_m, "Box grid m");
        cmd->add_option("--cv-draws", config.cv_draws, "Random-search draws for CV");
        cmd->add_option("--grid-points", config.grid_points, "Evaluation grid size");
        cmd->add_option("--grid-pad", config.grid_pad, "Grid padding (standardized units)");
        cmd->add_option("--sweep-sizes", config.sweep_sizes, "Sample sizes for sweep");
        return cmd;
    };

    auto* fit = add_common(app.add_subcommand("fit", "Fit a model, write model JSON"));
    auto* eval = add_common(app.add_subcommand("eval", "Evaluate a fitted model"));
    eval->add_option("--model", config.model, "Fitted-model JSON from fit")->required();
    auto* bench = add_common(
        app.add_subcommand("bench", "Comparison table over densities and methods"));
    auto* sweep = add_common(app.add_subcommand("sweep", "Sample-size sweep"));
    auto* plotdata =
        add_common(app.add_subcommand("plotdata", "Grid + stem CSV for plotting"));

    CLI11_PARSE(app, argc, argv);

    try {
        if (fit->parsed()) return fbkde::cli::cmd_fit(config);
        if (eval->parsed()) return fbkde::cli::cmd_eval(config);
        if (bench->parsed()) return fbkde::cli::cmd_bench(config);
        if (sweep->parsed()) return fbkde::cli::cmd_sweep(config);
        if (plotdata->parsed()) return fbkde::cli::cmd_plotdata(config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
