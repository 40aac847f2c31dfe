#include "pinlock/report.hpp"

#include "pinlock/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <istream>
#include <ostream>
#include <sstream>

namespace pinlock {

using nlohmann::json;

std::string probability_key(double prob) { return fmt::format("{}", prob); }

json distribution_to_json(const GraspDistribution& dist, const std::string& config_hash) {
    json percentiles = json::object();
    for (const auto& [p, v] : dist.percentiles) percentiles[probability_key(p)] = v;
    return json{
        {"trial_count", dist.trial_count},
        {"mean_n", dist.mean},
        {"variance_n2", dist.variance},
        {"percentiles", percentiles},
        {"master_seed", dist.master_seed},
        {"config_hash", config_hash},
    };
}

json gait_result_to_json(const GaitResult& result) {
    return json{
        {"distance_m", result.distance},
        {"elapsed_s", result.elapsed},
        {"slip_events", result.slip_events},
        {"outcome", std::string(to_string(result.outcome))},
        {"cycles_completed", result.cycles_completed},
        {"per_step_margins_n", result.per_step_margins},
    };
}

std::string utc_timestamp_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json make_run_record(const std::string& command, const std::string& config_hash, json results) {
    return json{
        {"command", command},
        {"tool_version", PINLOCK_VERSION},
        {"timestamp", utc_timestamp_now()},
        {"config_hash", config_hash},
        {"results", std::move(results)},
    };
}

void write_totals_csv(std::ostream& out, std::span<const double> totals) {
    out << "total_force_n\n";
    for (double t : totals) out << fmt::format("{:.17g}\n", t);
}

void write_terrain_csv(std::ostream& out, const TerrainProfile& terrain) {
    out << "position_m,height_m\n";
    for (std::size_t i = 0; i < terrain.sample_positions.size(); ++i) {
        out << fmt::format("{:.17g},{:.17g}\n", terrain.sample_positions[i], terrain.heights[i]);
    }
}

namespace {

/// Rows of `columns` comma-separated numbers; skips blank lines and a
/// non-numeric first line.
std::vector<std::vector<double>> read_numeric_csv(std::istream& in, std::size_t columns, const char* what) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (cell.find_first_not_of(" \t", used) != std::string::npos) numeric = false;
            } catch (const std::exception&) {
                numeric = false;
            }
        }
        if (!numeric) {
            if (rows.empty() && line_no == 1) continue;  // header
            throw DomainError(fmt::format("{} line {}: not numeric", what, line_no));
        }
        if (row.size() != columns) {
            throw DomainError(fmt::format("{} line {}: expected {} columns", what, line_no, columns));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

TerrainProfile read_terrain_csv(std::istream& in) {
    TerrainProfile terrain;
    for (const auto& row : read_numeric_csv(in, 2, "terrain csv")) {
        terrain.sample_positions.push_back(row[0]);
        terrain.heights.push_back(row[1]);
    }
    terrain.validate();
    return terrain;
}

void write_sweep_csv(std::ostream& out, std::span<const GaitSweepRow> rows) {
    out << "seed,incline_deg,outcome,distance_m,slip_events\n";
    for (const auto& r : rows) {
        out << fmt::format("{},{:.17g},{},{:.17g},{}\n", r.seed, r.incline_deg, to_string(r.outcome),
                           r.distance, r.slip_events);
    }
}

std::vector<ClimbTableRow> climb_table(const RobotSpec& spec, double step_deg) {
    if (!(step_deg > 0.0 && step_deg <= 90.0)) throw DomainError("angle step must lie in (0, 90]");
    const double held = spec.unit_count * spec.per_unit_holding_force;
    std::vector<ClimbTableRow> rows;
    const int steps = static_cast<int>(std::floor(90.0 / step_deg + 1e-9));
    for (int i = 0; i <= steps; ++i) {
        const double deg = std::min(90.0, i * step_deg);
        const double req = required_force(spec, deg_to_rad(deg));
        rows.push_back({deg, req, held - req});
    }
    if (rows.back().angle_deg < 90.0) {
        const double req = required_force(spec, deg_to_rad(90.0));
        rows.push_back({90.0, req, held - req});
    }
    return rows;
}

void write_climb_csv(std::ostream& out, std::span<const ClimbTableRow> rows) {
    out << "angle_deg,required_N,margin_N\n";
    for (const auto& r : rows) out << fmt::format("{:g},{:.6f},{:.6f}\n", r.angle_deg, r.required, r.margin);
}

std::vector<Measurement> read_measurements_csv(std::istream& in) {
    std::vector<Measurement> out;
    for (const auto& row : read_numeric_csv(in, 2, "measurement csv")) out.push_back({row[0], row[1]});
    return out;
}

std::string render_band_svg(std::vector<BandPoint> band, std::span<const Measurement> measurements) {
    if (band.empty()) throw DomainError("nothing to plot");
    std::sort(band.begin(), band.end(), [](const BandPoint& a, const BandPoint& b) { return a.phi_deg < b.phi_deg; });

    constexpr double kWidth = 640.0, kHeight = 400.0;
    constexpr double kLeft = 70.0, kRight = 620.0, kTop = 30.0, kBottom = 350.0;

    double peak = 0.0;
    for (const auto& b : band) peak = std::max(peak, b.high);
    for (const auto& m : measurements) peak = std::max(peak, m.force);
    const double y_max = std::max(10.0, std::ceil(peak * 1.1 / 10.0) * 10.0);

    auto px = [&](double phi) { return kLeft + (phi + 90.0) / 180.0 * (kRight - kLeft); };
    auto py = [&](double f) { return kBottom - f / y_max * (kBottom - kTop); };

    std::string svg;
    auto emit = [&svg](const std::string& s) { svg += s; svg += '\n'; };
    emit(fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{:.0f}" height="{:.0f}" viewBox="0 0 {:.0f} {:.0f}">)",
                     kWidth, kHeight, kWidth, kHeight));
    emit(R"(<rect x="0" y="0" width="640" height="400" fill="white"/>)");

    // Axes and ticks.
    emit(fmt::format(R"(<line x1="{:.2f}" y1="{:.2f}" x2="{:.2f}" y2="{:.2f}" stroke="black"/>)", kLeft, kBottom, kRight, kBottom));
    emit(fmt::format(R"(<line x1="{:.2f}" y1="{:.2f}" x2="{:.2f}" y2="{:.2f}" stroke="black"/>)", kLeft, kTop, kLeft, kBottom));
    for (int phi = -90; phi <= 90; phi += 30) {
        emit(fmt::format(R"(<text x="{:.2f}" y="{:.2f}" font-size="12" text-anchor="middle">{}</text>)", px(phi),
                         kBottom + 18.0, phi));
    }
    for (double f = 0.0; f <= y_max + 1e-9; f += y_max / 5.0) {
        emit(fmt::format(R"(<text x="{:.2f}" y="{:.2f}" font-size="12" text-anchor="end">{:.0f}</text>)", kLeft - 6.0,
                         py(f) + 4.0, f));
        emit(fmt::format(R"(<line x1="{:.2f}" y1="{:.2f}" x2="{:.2f}" y2="{:.2f}" stroke="#dddddd"/>)", kLeft, py(f), kRight,
                         py(f)));
    }
    emit(fmt::format(R"(<text x="{:.2f}" y="{:.2f}" font-size="13" text-anchor="middle">slope angle Phi [deg]</text>)",
                     0.5 * (kLeft + kRight), kHeight - 10.0));
    emit(fmt::format(R"svg(<text x="16" y="{:.2f}" font-size="13" text-anchor="middle" transform="rotate(-90 16 {:.2f})">holding force [N]</text>)svg",
                     0.5 * (kTop + kBottom), 0.5 * (kTop + kBottom)));

    // 5-95 percentile band.
    std::string pts;
    for (const auto& b : band) pts += fmt::format("{:.2f},{:.2f} ", px(b.phi_deg), py(b.high));
    for (auto it = band.rbegin(); it != band.rend(); ++it) pts += fmt::format("{:.2f},{:.2f} ", px(it->phi_deg), py(it->low));
    pts.pop_back();
    emit(fmt::format(R"(<polygon id="band" points="{}" fill="#9ecae1" fill-opacity="0.6" stroke="none"/>)", pts));

    std::string mean_pts;
    for (const auto& b : band) mean_pts += fmt::format("{:.2f},{:.2f} ", px(b.phi_deg), py(b.mean));
    mean_pts.pop_back();
    emit(fmt::format(R"(<polyline id="mean" points="{}" fill="none" stroke="#08519c" stroke-width="2"/>)", mean_pts));

    for (const auto& m : measurements) {
        emit(fmt::format(R"(<circle cx="{:.2f}" cy="{:.2f}" r="4" fill="#d62728"/>)", px(m.phi_deg), py(m.force)));
    }
    emit("</svg>");
    return svg;
}

}  // namespace pinlock
