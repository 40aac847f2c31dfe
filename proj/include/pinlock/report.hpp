#pragma once

#include "pinlock/climb.hpp"
#include "pinlock/conformation.hpp"
#include "pinlock/grasp_mc.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace pinlock {

/// Percentile map keys are the shortest decimal form of the probability ("0.05").
std::string probability_key(double prob);

nlohmann::json distribution_to_json(const GraspDistribution& dist, const std::string& config_hash);
nlohmann::json gait_result_to_json(const GaitResult& result);

/// {command, tool_version, timestamp, config_hash, results}. Only `timestamp`
/// varies between identical runs.
nlohmann::json make_run_record(const std::string& command, const std::string& config_hash,
                               nlohmann::json results);

std::string utc_timestamp_now();

void write_totals_csv(std::ostream& out, std::span<const double> totals);
void write_terrain_csv(std::ostream& out, const TerrainProfile& terrain);
/// Two columns, position_m,height_m; a header line is optional.
TerrainProfile read_terrain_csv(std::istream& in);
void write_sweep_csv(std::ostream& out, std::span<const GaitSweepRow> rows);

struct ClimbTableRow {
    double angle_deg = 0.0;
    double required = 0.0;
    double margin = 0.0;  // n F - required, all legs in stance
};
std::vector<ClimbTableRow> climb_table(const RobotSpec& spec, double step_deg);
void write_climb_csv(std::ostream& out, std::span<const ClimbTableRow> rows);

/// One x position of the holding-force plot.
struct BandPoint {
    double phi_deg = 0.0;
    double low = 0.0;   // 5th percentile
    double mean = 0.0;
    double high = 0.0;  // 95th percentile
};

struct Measurement {
    double phi_deg = 0.0;
    double force = 0.0;
};

/// phi_deg,force_n rows; a header line is optional.
std::vector<Measurement> read_measurements_csv(std::istream& in);

/// Fixed 640x400 canvas; plot area x in [70, 620], y in [30, 350]. Phi maps
/// linearly from [-90, 90] onto x; force from [0, y_max] onto y, with y_max the
/// largest plotted value times 1.1 rounded up to a multiple of 10 N. All
/// coordinates are printed with two decimals so output is byte-stable.
std::string render_band_svg(std::vector<BandPoint> band, std::span<const Measurement> measurements);

}  // namespace pinlock
