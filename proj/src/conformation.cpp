#include "pinlock/conformation.hpp"

#include "pinlock/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <limits>

namespace pinlock {

void PinArrayLayout::validate() const {
    if (pins_per_row < 1) throw DomainError("layout.pins_per_row must be >= 1");
    if (rows < 1) throw DomainError("layout.rows must be >= 1");
    if (!(std::isfinite(pitch) && pitch > 0.0)) throw DomainError("layout.pitch must be positive");
    if (!(std::isfinite(travel_range) && travel_range > 0.0)) {
        throw DomainError("layout.travel_range must be positive");
    }
    if (!std::isfinite(rest_height)) throw DomainError("layout.rest_height must be finite");
    if (!(std::isfinite(spine_recess) && spine_recess >= 0.0)) {
        throw DomainError("layout.spine_recess must be non-negative");
    }
    if (!std::isfinite(origin)) throw DomainError("layout.origin must be finite");
}

void TerrainProfile::validate() const {
    if (sample_positions.size() != heights.size()) {
        throw DomainError("terrain positions and heights differ in length");
    }
    if (sample_positions.size() < 2) throw DomainError("terrain needs at least two samples");
    for (std::size_t i = 0; i < sample_positions.size(); ++i) {
        if (!std::isfinite(sample_positions[i]) || !std::isfinite(heights[i])) {
            throw DomainError("terrain samples must be finite");
        }
        if (i > 0 && !(sample_positions[i] > sample_positions[i - 1])) {
            throw DomainError("terrain positions must be strictly increasing");
        }
    }
}

bool TerrainProfile::covers(double lo, double hi) const {
    return !sample_positions.empty() && sample_positions.front() <= lo && sample_positions.back() >= hi;
}

double TerrainProfile::height_at(double x) const {
    const auto& xs = sample_positions;
    if (x <= xs.front()) return heights.front();
    if (x >= xs.back()) return heights.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const auto hi = static_cast<std::size_t>(it - xs.begin());
    const std::size_t lo = hi - 1;
    if (x == xs[lo]) return heights[lo];
    const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return heights[lo] + t * (heights[hi] - heights[lo]);
}

double TerrainProfile::facet_run_per_rise(double x) const {
    const auto& xs = sample_positions;
    auto run_per_rise = [&](std::size_t seg) {
        const double rise = std::fabs(heights[seg + 1] - heights[seg]);
        if (rise == 0.0) return std::numeric_limits<double>::infinity();
        return (xs[seg + 1] - xs[seg]) / rise;
    };
    const std::size_t last_seg = xs.size() - 2;
    if (x <= xs.front()) return run_per_rise(0);
    if (x >= xs.back()) return run_per_rise(last_seg);
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const auto seg = static_cast<std::size_t>(it - xs.begin()) - 1;
    if (x == xs[seg] && seg > 0) {
        return std::min(run_per_rise(seg - 1), run_per_rise(seg));
    }
    return run_per_rise(seg);
}

int ConformationResult::contact_count() const {
    return static_cast<int>(std::count(in_contact.begin(), in_contact.end(), true));
}

TerrainProfile generate_wedge(const WedgeSurface& surface, double footprint, int samples) {
    const double phi = surface.slope_angle_deg;
    if (!std::isfinite(phi) || std::fabs(phi) > 90.0 || phi == 0.0) {
        throw DomainError("wedge slope angle must satisfy 0 < |phi| <= 90 degrees");
    }
    if (samples < 2) throw DomainError("wedge needs at least two samples");
    if (!(std::isfinite(footprint) && footprint > 0.0)) throw DomainError("footprint must be positive");
    const double apex = surface.apex_position;
    if (!(apex >= 0.0 && apex < footprint)) throw DomainError("apex must lie inside the footprint");

    const bool vertical = std::fabs(phi) == 90.0;
    const double slope = vertical ? std::numeric_limits<double>::infinity()
                                  : std::tan(deg_to_rad(std::fabs(phi)));
    const double relief = vertical ? footprint : std::min(slope * (footprint - apex), footprint);
    const double toe = vertical ? std::nextafter(apex, footprint) : apex + relief / slope;

    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(samples) + 2);
    for (int i = 0; i < samples; ++i) {
        xs.push_back(footprint * static_cast<double>(i) / static_cast<double>(samples - 1));
    }
    xs.back() = footprint;
    xs.push_back(apex);
    if (toe < footprint) xs.push_back(toe);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    TerrainProfile profile;
    profile.sample_positions = xs;
    profile.heights.reserve(xs.size());
    for (double x : xs) {
        double drop = 0.0;
        if (x > apex) drop = x >= toe ? relief : std::min(slope * (x - apex), relief);
        profile.heights.push_back(phi > 0.0 ? -drop : drop);
    }
    return profile;
}

WedgeSurface parse_wedge_name(std::string_view name, double footprint) {
    constexpr std::string_view prefix = "wedge:";
    if (!name.starts_with(prefix)) {
        throw DomainError(fmt::format("unknown scenario '{}'; expected wedge:<+-deg>", name));
    }
    std::string_view num = name.substr(prefix.size());
    if (!num.empty() && num.front() == '+') num.remove_prefix(1);
    double deg = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), deg);
    if (ec != std::errc{} || ptr != num.data() + num.size()) {
        throw DomainError(fmt::format("cannot parse wedge angle in '{}'", name));
    }
    if (deg == 0.0 || std::fabs(deg) > 90.0) {
        throw DomainError(fmt::format("wedge angle in '{}' must satisfy 0 < |phi| <= 90", name));
    }
    return WedgeSurface{deg, 0.5 * footprint};
}

std::string wedge_name(double slope_angle_deg) {
    return fmt::format("wedge:{:+g}", slope_angle_deg);
}

const std::vector<double>& standard_wedge_angles() {
    static const std::vector<double> angles{-90.0, -60.0, -30.0, 30.0, 60.0, 90.0};
    return angles;
}

PinArrayLayout seat_on(PinArrayLayout layout, const TerrainProfile& terrain) {
    layout.validate();
    terrain.validate();
    double top = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < layout.pins_per_row; ++i) {
        top = std::max(top, terrain.height_at(layout.pin_position(i)));
    }
    layout.rest_height = top;
    return layout;
}

ConformationResult conform(const PinArrayLayout& layout, const TerrainProfile& terrain) {
    layout.validate();
    terrain.validate();
    if (!terrain.covers(layout.pin_position(0), layout.pin_position(layout.pins_per_row - 1))) {
        throw DomainError("terrain is narrower than the pin-array footprint");
    }
    const double lowest_tip = layout.rest_height - layout.travel_range;
    const auto n = static_cast<std::size_t>(layout.pins_per_row);

    ConformationResult result;
    result.tip_heights.resize(n);
    result.in_contact.resize(n);
    result.engagement_deflections.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double h = terrain.height_at(layout.pin_position(static_cast<int>(i)));
        if (h > layout.rest_height) {
            throw DomainError(fmt::format("terrain rises above the retracted array under pin {}", i));
        }
        result.in_contact[i] = h >= lowest_tip;
        result.tip_heights[i] = std::max(h, lowest_tip);
    }
    return result;
}

std::vector<double> engagement_displacements(const ConformationResult& result,
                                             const TerrainProfile& terrain,
                                             const PinArrayLayout& layout, double holder_stroke) {
    if (!(std::isfinite(holder_stroke) && holder_stroke >= 0.0)) {
        throw DomainError("holder_stroke must be non-negative");
    }
    const std::size_t n = result.in_contact.size();
    std::vector<double> deflections(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!result.in_contact[i]) continue;
        const double run_per_rise = terrain.facet_run_per_rise(layout.pin_position(static_cast<int>(i)));
        if (std::isinf(run_per_rise)) continue;
        const double onset = layout.spine_recess == 0.0 ? 0.0 : layout.spine_recess * run_per_rise;
        deflections[i] = std::max(0.0, holder_stroke - onset);
    }
    return deflections;
}

double deterministic_holding_force(const PinArrayLayout& layout, const TerrainProfile& terrain,
                                   double holder_stroke, const PinMaterial& material,
                                   double apparent_mu) {
    material.validate();
    ConformationResult result = conform(layout, terrain);
    result.engagement_deflections = engagement_displacements(result, terrain, layout, holder_stroke);
    std::vector<double> per_pin;
    per_pin.reserve(result.engagement_deflections.size());
    for (double delta : result.engagement_deflections) {
        per_pin.push_back(pin_holding_force(pressing_force(delta, material), apparent_mu));
    }
    return static_cast<double>(layout.rows) * total_holding_force(per_pin);
}

}  // namespace pinlock
