// pinlock: pin-array gripper holding-force and climbing simulator.

#include "pinlock/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

namespace cli = pinlock::cli;

int main(int argc, char** argv) {
    CLI::App app{"Pin-array gripper holding-force and climbing simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", PINLOCK_VERSION);

    const std::map<std::string, cli::Format> formats{{"json", cli::Format::json}, {"csv", cli::Format::csv}};
    const std::string default_config = "configs/paper-default.json";

    cli::GraspSimOptions grasp;
    grasp.config_path = default_config;
    auto* grasp_cmd = app.add_subcommand("grasp-sim", "Monte Carlo total holding force of one gripper");
    grasp_cmd->add_option("config", grasp.config_path, "Run config (JSON)");
    grasp_cmd->add_option("-o,--output", grasp.output_path, "Result record (json) or trial totals (csv)");
    grasp_cmd->add_option("--totals-csv", grasp.totals_csv_path, "Also write trial totals as single-column CSV");
    grasp_cmd->add_option("--trials", grasp.trials, "Override config trials")->check(CLI::PositiveNumber);
    grasp_cmd->add_option("--seed", grasp.seed, "Master seed (falls back to PINLOCK_SEED, then config)");
    grasp_cmd->add_option("--scenario", grasp.scenario, "Wedge scenario, e.g. wedge:+30, to tag the result");
    grasp_cmd->add_option("--format", grasp.format, "json|csv")->transform(CLI::CheckedTransformer(formats));
    grasp_cmd->add_flag("--serial", grasp.serial, "Use the single-threaded reference kernel");

    cli::CalibrateOptions cal;
    auto* cal_cmd = app.add_subcommand("calibrate", "Gamma pressing-force law from a target mean and 90% band");
    cal_cmd->add_option("mean", cal.mean, "Target mean total force (N)")->required();
    cal_cmd->add_option("ci_low", cal.ci_low, "Band lower edge (N)")->required();
    cal_cmd->add_option("ci_high", cal.ci_high, "Band upper edge (N)")->required();
    cal_cmd->add_option("--config", cal.config_path, "Take N, p and friction range from this config");
    cal_cmd->add_option("-o,--output", cal.output_path, "Write calibrated parameters as JSON");

    cli::ClimbAngleOptions climb;
    climb.config_path = default_config;
    auto* climb_cmd = app.add_subcommand("climb-angle", "Static force balance over 0-90 degrees");
    climb_cmd->add_option("config", climb.config_path, "Run config (JSON)");
    climb_cmd->add_option("-o,--output", climb.output_path, "CSV table angle_deg,required_N,margin_N");
    climb_cmd->add_option("--preset", climb.preset, "Per-unit force preset")
        ->check(CLI::IsMember({"average", "worst-case"}));
    climb_cmd->add_option("--step-deg", climb.step_deg, "Table angle step")->check(CLI::Range(0.001, 90.0));

    cli::GaitOptions gait;
    gait.config_path = default_config;
    auto* gait_cmd = app.add_subcommand("gait", "Quasi-static backward wave gait");
    gait_cmd->add_option("config", gait.config_path, "Run config (JSON)");
    gait_cmd->add_option("-o,--output", gait.output_path, "Result JSON, or sweep CSV/JSON");
    gait_cmd->add_option("--cycles", gait.cycles, "Gait cycles")->check(CLI::PositiveNumber);
    gait_cmd->add_option("--seed", gait.seed, "Master seed (falls back to PINLOCK_SEED, then config)");
    gait_cmd->add_option("--sweep-seeds", gait.sweep_seeds, "Run this many seeds and estimate slip probability")
        ->check(CLI::PositiveNumber);
    gait_cmd->add_option("--incline-deg", gait.incline_deg, "Override incline");
    gait_cmd->add_option("--preset", gait.preset, "Per-unit force preset")
        ->check(CLI::IsMember({"average", "worst-case"}));
    gait_cmd->add_option("--force-mode", gait.force_mode, "fixed|sampled");
    gait_cmd->add_option("--format", gait.format, "Sweep output json|csv")
        ->transform(CLI::CheckedTransformer(formats));
    gait_cmd->add_flag("--serial", gait.serial, "Use the single-threaded reference sweep");

    cli::PlotOptions plot;
    auto* plot_cmd = app.add_subcommand("plot", "SVG of the 5-95% band and mean over wedge angles");
    plot_cmd->add_option("results", plot.inputs, "grasp-sim result files or directories")->required();
    plot_cmd->add_option("-o,--output", plot.output_path, "SVG path")->required();
    plot_cmd->add_option("--measurements", plot.measurements_path, "CSV phi_deg,force_n overlay points");

    cli::WedgeGenOptions wedge;
    auto* wedge_cmd = app.add_subcommand("wedge-gen", "Emit an emulated wedge profile as CSV");
    wedge_cmd->add_option("name", wedge.name, "wedge:+30, wedge:-90, ...")->required();
    wedge_cmd->add_option("-o,--output", wedge.output_path, "CSV position_m,height_m (stdout if omitted)");
    wedge_cmd->add_option("--config", wedge.config_path, "Also report the deterministic holding force");
    wedge_cmd->add_option("--samples", wedge.samples, "Uniform samples")->check(CLI::Range(2, 1000000));
    wedge_cmd->add_option("--footprint", wedge.footprint, "Footprint width (m)")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? cli::kOk : cli::kUsage;
    }

    if (*grasp_cmd) return cli::cmd_grasp_sim(grasp, std::cout, std::cerr);
    if (*cal_cmd) return cli::cmd_calibrate(cal, std::cout, std::cerr);
    if (*climb_cmd) return cli::cmd_climb_angle(climb, std::cout, std::cerr);
    if (*gait_cmd) return cli::cmd_gait(gait, std::cout, std::cerr);
    if (*plot_cmd) return cli::cmd_plot(plot, std::cout, std::cerr);
    if (*wedge_cmd) return cli::cmd_wedge_gen(wedge, std::cout, std::cerr);
    return cli::kUsage;
}
