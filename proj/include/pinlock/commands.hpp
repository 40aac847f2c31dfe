#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pinlock::cli {

/// Process exit statuses shared by every subcommand.
enum ExitCode : int {
    kOk = 0,
    kFailure = 1,     // unexpected internal error
    kUsage = 2,       // bad command line
    kValidation = 3,  // invalid config or arguments
    kInfeasible = 4,  // calibration targets cannot be met
    kIo = 5,          // unreadable input or unwritable output
};

enum class Format { json, csv };

/// Flag value wins, then PINLOCK_SEED, then the config's master_seed.
/// Throws std::invalid_argument when PINLOCK_SEED is not an unsigned integer.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::uint64_t config_seed);

struct GraspSimOptions {
    std::string config_path;
    std::string output_path;  // empty: summary only
    std::string totals_csv_path;
    std::optional<std::int64_t> trials;
    std::optional<std::uint64_t> seed;
    std::string scenario;  // e.g. "wedge:+30"; recorded and evaluated deterministically
    Format format = Format::json;
    bool serial = false;
};

struct CalibrateOptions {
    double mean = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::string config_path;  // optional skeleton; defaults to 132 pins, p 0.1, U(0.4, 3.0)
    std::string output_path;
};

struct ClimbAngleOptions {
    std::string config_path;
    std::string output_path;
    std::string preset;  // "average" | "worst-case"
    double step_deg = 5.0;
};

struct GaitOptions {
    std::string config_path;
    std::string output_path;
    std::optional<int> cycles;
    std::optional<std::uint64_t> seed;
    std::optional<int> sweep_seeds;
    std::optional<double> incline_deg;
    std::string preset;
    std::optional<std::string> force_mode;
    Format format = Format::json;
    bool serial = false;
};

struct PlotOptions {
    std::vector<std::string> inputs;  // result files or directories of *.json
    std::string output_path;
    std::string measurements_path;
};

struct WedgeGenOptions {
    std::string name;
    std::string output_path;
    std::string config_path;
    std::optional<int> samples;
    std::optional<double> footprint;
};

int cmd_grasp_sim(const GraspSimOptions& opts, std::ostream& out, std::ostream& err);
int cmd_calibrate(const CalibrateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_climb_angle(const ClimbAngleOptions& opts, std::ostream& out, std::ostream& err);
int cmd_gait(const GaitOptions& opts, std::ostream& out, std::ostream& err);
int cmd_plot(const PlotOptions& opts, std::ostream& out, std::ostream& err);
int cmd_wedge_gen(const WedgeGenOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace pinlock::cli
