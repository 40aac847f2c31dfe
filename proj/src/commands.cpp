#include "pinlock/commands.hpp"

#include "pinlock/climb.hpp"
#include "pinlock/config.hpp"
#include "pinlock/conformation.hpp"
#include "pinlock/errors.hpp"
#include "pinlock/grasp_mc.hpp"
#include "pinlock/report.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

namespace pinlock::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << content;
    f.flush();
    if (!f) throw IoError("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

LoadedConfig load(const std::string& path) {
    try {
        return load_config(path);
    } catch (const std::ios_base::failure& e) {
        throw IoError(e.what());
    }
}

int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << e.what() << '\n';
        return kValidation;
    } catch (const CalibrationError& e) {
        err << "infeasible: " << e.what() << '\n';
        return kInfeasible;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << '\n';
        return kValidation;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << '\n';
        return kValidation;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

PinArrayLayout seated_wedge_layout(const RunConfig& cfg, const TerrainProfile& terrain) {
    PinArrayLayout layout = cfg.layout;
    layout.origin = 0.0;
    return seat_on(layout, terrain);
}

}  // namespace

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::uint64_t config_seed) {
    if (flag) return *flag;
    if (const char* env = std::getenv("PINLOCK_SEED"); env && *env) {
        std::uint64_t v = 0;
        const char* end = env + std::char_traits<char>::length(env);
        const auto [ptr, ec] = std::from_chars(env, end, v);
        if (ec != std::errc{} || ptr != end) {
            throw std::invalid_argument(fmt::format("PINLOCK_SEED='{}' is not an unsigned integer", env));
        }
        return v;
    }
    return config_seed;
}

int cmd_grasp_sim(const GraspSimOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const LoadedConfig loaded = load(opts.config_path);
        RunConfig cfg = loaded.config;
        const std::int64_t trials = opts.trials.value_or(cfg.trials);
        if (trials < 1) throw DomainError("--trials must be >= 1");
        const std::uint64_t seed = resolve_seed(opts.seed, cfg.master_seed);

        const std::vector<double> totals = opts.serial ? trial_totals_serial(cfg.model, trials, seed)
                                                       : trial_totals_parallel(cfg.model, trials, seed);
        const GraspDistribution dist = summarize_totals(totals, cfg.percentiles, seed);
        const Moments analytic = analytic_moments(cfg.model);
        const auto [band_lo, band_hi] = normal_band(dist);

        json results = distribution_to_json(dist, loaded.hash);
        results["analytic_mean_n"] = analytic.mean;
        results["analytic_variance_n2"] = analytic.variance;
        results["normal_band_n"] = {band_lo, band_hi};
        if (!opts.scenario.empty()) {
            const WedgeSurface wedge = parse_wedge_name(opts.scenario, cfg.layout.footprint());
            const TerrainProfile terrain = generate_wedge(wedge, cfg.layout.footprint(), cfg.wedge.samples);
            const PinArrayLayout layout = seated_wedge_layout(cfg, terrain);
            results["scenario"] = wedge_name(wedge.slope_angle_deg);
            results["deterministic_holding_force_n"] = deterministic_holding_force(
                layout, terrain, cfg.wedge.holder_stroke, cfg.material, cfg.wedge.apparent_mu);
        }

        if (!opts.output_path.empty()) {
            if (opts.format == Format::csv) {
                std::ostringstream csv;
                write_totals_csv(csv, totals);
                write_file(opts.output_path, csv.str());
            } else {
                write_file(opts.output_path, make_run_record("grasp-sim", loaded.hash, results).dump(2) + "\n");
            }
        }
        if (!opts.totals_csv_path.empty()) {
            std::ostringstream csv;
            write_totals_csv(csv, totals);
            write_file(opts.totals_csv_path, csv.str());
        }

        out << fmt::format("trials            {}\n", dist.trial_count);
        out << fmt::format("master seed       {}\n", dist.master_seed);
        out << fmt::format("mean              {:.3f} N   (analytic {:.3f} N)\n", dist.mean, analytic.mean);
        out << fmt::format("std dev           {:.3f} N   (analytic {:.3f} N)\n", std::sqrt(dist.variance),
                           std::sqrt(analytic.variance));
        for (const auto& [p, v] : dist.percentiles) {
            out << fmt::format("p{:<16} {:.3f} N\n", probability_key(p), v);
        }
        out << fmt::format("mean +/- 1.645 sd [{:.3f}, {:.3f}] N\n", band_lo, band_hi);
        if (results.contains("deterministic_holding_force_n")) {
            out << fmt::format("{} deterministic {:.4f} N\n", results["scenario"].get<std::string>(),
                               results["deterministic_holding_force_n"].get<double>());
        }
        return static_cast<int>(kOk);
    });
}

int cmd_calibrate(const CalibrateOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (!(opts.ci_low <= opts.mean && opts.mean <= opts.ci_high)) {
            throw DomainError(fmt::format("mean {} lies outside the interval [{}, {}]", opts.mean, opts.ci_low,
                                          opts.ci_high));
        }
        ContactModel skeleton;
        if (!opts.config_path.empty()) skeleton = load(opts.config_path).config.model;
        if (!(opts.ci_high > opts.ci_low)) {
            throw CalibrationError("degenerate interval: the contact-count variability alone exceeds a zero-width band");
        }
        const GammaParams params = calibrate_pressing_moments(opts.mean, {opts.ci_low, opts.ci_high}, skeleton);
        const Moments pressing = moments_from_gamma(params);
        ContactModel calibrated = skeleton;
        calibrated.pressing = params;
        const Moments total = analytic_moments(calibrated);
        const double below5 = pressing_mass_below(params, 5.0);

        out << fmt::format("pressing force P ~ Gamma(shape={:.10g}, scale={:.10g} N)\n", params.shape, params.scale);
        out << fmt::format("E[P]   = {:.6f} N\n", pressing.mean);
        out << fmt::format("Var[P] = {:.6f} N^2\n", pressing.variance);
        out << fmt::format("P(P < 5 N) = {:.5f}\n", below5);
        out << fmt::format("model mean {:.6f} N, sd {:.6f} N\n", total.mean, std::sqrt(total.variance));

        if (!opts.output_path.empty()) {
            json record{
                {"shape", params.shape},
                {"scale", params.scale},
                {"pressing_mean_n", pressing.mean},
                {"pressing_variance_n2", pressing.variance},
                {"mass_below_5n", below5},
                {"target_mean_n", opts.mean},
                {"target_ci_n", {opts.ci_low, opts.ci_high}},
                {"model_mean_n", total.mean},
                {"model_variance_n2", total.variance},
            };
            write_file(opts.output_path, record.dump(2) + "\n");
        }
        return static_cast<int>(kOk);
    });
}

int cmd_climb_angle(const ClimbAngleOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        RunConfig cfg = load(opts.config_path).config;
        if (!opts.preset.empty()) cfg.robot.per_unit_holding_force = holding_force_preset(opts.preset);
        const RobotSpec& robot = cfg.robot;
        const auto rows = climb_table(robot, opts.step_deg);
        const StaticAngle limit = max_static_angle(robot);

        out << fmt::format("M = {} kg, g = {} m/s^2, n = {}, F = {} N\n", robot.total_mass, robot.gravity,
                           robot.unit_count, robot.per_unit_holding_force);
        out << "angle_deg  required_N  margin_N\n";
        for (const auto& r : rows) out << fmt::format("{:9g}  {:10.3f}  {:8.3f}\n", r.angle_deg, r.required, r.margin);
        out << fmt::format("nF/(Mg) = {:.4f}\n", robot.unit_count * robot.per_unit_holding_force / robot.weight());
        out << fmt::format("max static angle = {:.2f} deg{}\n", rad_to_deg(limit.angle),
                           limit.capped ? " (capped: holds at any incline)" : "");

        if (!opts.output_path.empty()) {
            std::ostringstream csv;
            write_climb_csv(csv, rows);
            write_file(opts.output_path, csv.str());
        }
        return static_cast<int>(kOk);
    });
}

int cmd_gait(const GaitOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const LoadedConfig loaded = load(opts.config_path);
        RunConfig cfg = loaded.config;
        if (!opts.preset.empty()) cfg.robot.per_unit_holding_force = holding_force_preset(opts.preset);
        if (opts.force_mode) {
            if (*opts.force_mode == "fixed") cfg.robot.force_mode = LegForceMode::fixed;
            else if (*opts.force_mode == "sampled") cfg.robot.force_mode = LegForceMode::sampled;
            else throw DomainError("--force-mode must be fixed or sampled");
        }
        if (opts.incline_deg) {
            if (!(*opts.incline_deg >= 0.0 && *opts.incline_deg <= 90.0)) {
                throw DomainError("--incline-deg must lie in [0, 90]");
            }
            cfg.incline_deg = *opts.incline_deg;
            cfg.gait.incline = deg_to_rad(cfg.incline_deg);
        }
        const int cycles = opts.cycles.value_or(cfg.cycles);
        const std::uint64_t seed = resolve_seed(opts.seed, cfg.master_seed);

        if (opts.sweep_seeds) {
            const int runs = *opts.sweep_seeds;
            const auto rows = opts.serial ? sweep_gait_serial(cfg.robot, cfg.gait, cfg.model, cycles, seed, runs)
                                          : sweep_gait_parallel(cfg.robot, cfg.gait, cfg.model, cycles, seed, runs);
            const double p = slip_fraction(rows);
            const double se = std::sqrt(p * (1.0 - p) / runs);
            out << fmt::format("incline {:g} deg, {} runs x {} cycles: slip probability {:.4f} (se {:.4f})\n",
                               cfg.incline_deg, runs, cycles, p, se);
            if (!opts.output_path.empty()) {
                if (opts.format == Format::json) {
                    json list = json::array();
                    for (const auto& r : rows) {
                        list.push_back({{"seed", r.seed},
                                        {"incline_deg", r.incline_deg},
                                        {"outcome", std::string(to_string(r.outcome))},
                                        {"distance_m", r.distance},
                                        {"slip_events", r.slip_events}});
                    }
                    json results{{"runs", runs}, {"cycles", cycles}, {"master_seed", seed},
                                 {"incline_deg", cfg.incline_deg}, {"slip_probability", p}, {"rows", list}};
                    write_file(opts.output_path, make_run_record("gait", loaded.hash, results).dump(2) + "\n");
                } else {
                    std::ostringstream csv;
                    write_sweep_csv(csv, rows);
                    write_file(opts.output_path, csv.str());
                }
            }
            return static_cast<int>(kOk);
        }

        const GaitResult result = simulate_gait(cfg.robot, cfg.gait, cfg.model, cycles, seed);
        json results = gait_result_to_json(result);
        results["incline_deg"] = cfg.incline_deg;
        results["cycles"] = cycles;
        results["master_seed"] = seed;
        results["stride_m"] = cfg.gait.stride;
        out << fmt::format("outcome {} after {} of {} cycles\n", to_string(result.outcome), result.cycles_completed,
                           cycles);
        out << fmt::format("distance {:.3f} m in {:.1f} min", result.distance, result.elapsed / 60.0);
        if (result.elapsed > 0.0) out << fmt::format(" ({:.4f} m/min)", result.distance / (result.elapsed / 60.0));
        out << '\n';
        if (!opts.output_path.empty()) {
            write_file(opts.output_path, make_run_record("gait", loaded.hash, results).dump(2) + "\n");
        }
        return static_cast<int>(kOk);
    });
}

int cmd_plot(const PlotOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        std::vector<std::string> files;
        for (const auto& input : opts.inputs) {
            if (fs::is_directory(input)) {
                std::vector<std::string> found;
                for (const auto& entry : fs::directory_iterator(input)) {
                    if (entry.path().extension() == ".json") found.push_back(entry.path().string());
                }
                std::sort(found.begin(), found.end());
                files.insert(files.end(), found.begin(), found.end());
            } else {
                files.push_back(input);
            }
        }

        std::map<double, BandPoint> by_angle;
        for (const auto& file : files) {
            json record;
            try {
                record = json::parse(read_file(file));
            } catch (const json::parse_error& e) {
                throw DomainError(fmt::format("{}: not valid JSON", file));
            }
            const json& r = record.contains("results") ? record["results"] : record;
            if (!r.contains("scenario") || !r.contains("percentiles") || !r.contains("mean_n")) {
                throw DomainError(fmt::format("{}: not a grasp-sim result with a scenario", file));
            }
            const WedgeSurface w = parse_wedge_name(r["scenario"].get<std::string>(), 1.0);
            const json& pct = r["percentiles"];
            if (!pct.contains("0.05") || !pct.contains("0.95")) {
                throw DomainError(fmt::format("{}: needs 0.05 and 0.95 percentiles", file));
            }
            by_angle[w.slope_angle_deg] =
                BandPoint{w.slope_angle_deg, pct["0.05"].get<double>(), r["mean_n"].get<double>(),
                          pct["0.95"].get<double>()};
        }

        std::vector<std::string> missing;
        for (double phi : standard_wedge_angles()) {
            if (!by_angle.contains(phi)) missing.push_back(wedge_name(phi));
        }
        if (!missing.empty()) {
            throw DomainError(fmt::format("missing result series for {} angle(s): {}", missing.size(),
                                          fmt::join(missing, ", ")));
        }

        std::vector<Measurement> measurements;
        if (!opts.measurements_path.empty()) {
            std::istringstream in(read_file(opts.measurements_path));
            measurements = read_measurements_csv(in);
        }
        std::vector<BandPoint> band;
        for (const auto& [phi, point] : by_angle) band.push_back(point);
        write_file(opts.output_path, render_band_svg(band, measurements));
        out << fmt::format("wrote {} ({} series, {} measurements)\n", opts.output_path, band.size(),
                           measurements.size());
        return static_cast<int>(kOk);
    });
}

int cmd_wedge_gen(const WedgeGenOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        std::optional<RunConfig> cfg;
        if (!opts.config_path.empty()) cfg = load(opts.config_path).config;
        const double footprint = opts.footprint.value_or(cfg ? cfg->layout.footprint() : PinArrayLayout{}.footprint());
        const int samples = opts.samples.value_or(cfg ? cfg->wedge.samples : 301);
        const WedgeSurface wedge = parse_wedge_name(opts.name, footprint);
        const TerrainProfile terrain = generate_wedge(wedge, footprint, samples);

        std::ostringstream csv;
        write_terrain_csv(csv, terrain);
        if (opts.output_path.empty()) {
            out << csv.str();
        } else {
            write_file(opts.output_path, csv.str());
            out << fmt::format("wrote {} ({} samples)\n", opts.output_path, terrain.sample_positions.size());
        }
        if (cfg) {
            const PinArrayLayout layout = seated_wedge_layout(*cfg, terrain);
            const ConformationResult c = conform(layout, terrain);
            const double force = deterministic_holding_force(layout, terrain, cfg->wedge.holder_stroke, cfg->material,
                                                             cfg->wedge.apparent_mu);
            (opts.output_path.empty() ? err : out)
                << fmt::format("{}: {} of {} pins per row in contact, deterministic holding force {:.4f} N\n",
                               wedge_name(wedge.slope_angle_deg), c.contact_count(), layout.pins_per_row, force);
        }
        return static_cast<int>(kOk);
    });
}

}  // namespace pinlock::cli
