#pragma once

#include "pinlock/mechanics.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace pinlock {

/// One row of vertically sliding pins; `rows` identical rows are stacked
/// across the profile. Pin i sits at origin + (i + 1/2) * pitch, so the row
/// footprint is [origin, origin + pins_per_row * pitch].
///
/// Heights: a fully retracted tip is at rest_height, a fully extended tip at
/// rest_height - travel_range. The spine point is recessed spine_recess above
/// the pin's end face.
struct PinArrayLayout {
    int pins_per_row = 11;
    int rows = 6;
    double pitch = 0.15 / 11.0;
    double travel_range = 0.15;
    double rest_height = 0.0;
    double spine_recess = 0.001;
    double origin = 0.0;

    void validate() const;
    double footprint() const { return pins_per_row * pitch; }
    double pin_position(int i) const { return origin + (i + 0.5) * pitch; }
    bool operator==(const PinArrayLayout&) const = default;
};

/// Piecewise-linear height profile along the stroke axis.
struct TerrainProfile {
    std::vector<double> sample_positions;
    std::vector<double> heights;

    void validate() const;
    bool covers(double lo, double hi) const;
    /// Linear interpolation; exact at sample positions.
    double height_at(double x) const;
    /// Horizontal run per unit rise of the facet under x. At a vertex the
    /// steeper neighbouring facet is used. 0 for a vertical face, +inf for a
    /// level facet.
    double facet_run_per_rise(double x) const;
};

/// Emulated convex (Phi > 0) or concave (Phi < 0) corner.
///
/// Level at height 0 for x <= apex; beyond the apex the surface drops
/// (convex) or rises (concave) at |Phi| until the relief reaches
/// min(tan|Phi| * (footprint - apex), footprint), then stays level. The
/// concave profile is the convex one negated, i.e. mirrored about the apex
/// height.
struct WedgeSurface {
    double slope_angle_deg = 30.0;
    double apex_position = 0.075;
};

struct ConformationResult {
    std::vector<double> tip_heights;
    std::vector<bool> in_contact;
    std::vector<double> engagement_deflections;

    int contact_count() const;
};

TerrainProfile generate_wedge(const WedgeSurface& surface, double footprint, int samples);

/// "wedge:+30", "wedge:-90", ... with the apex at footprint / 2.
WedgeSurface parse_wedge_name(std::string_view name, double footprint);
std::string wedge_name(double slope_angle_deg);

/// The six emulated test surfaces: +-30, +-60, +-90 degrees.
const std::vector<double>& standard_wedge_angles();

/// Layout with rest_height raised to the highest terrain point under any pin,
/// i.e. the array pressed down until a fully retracted pin touches.
PinArrayLayout seat_on(PinArrayLayout layout, const TerrainProfile& terrain);

/// Pins drop vertically until they touch the terrain or run out of travel.
/// Throws DomainError if the terrain does not span the footprint or rises
/// above rest_height under a pin.
ConformationResult conform(const PinArrayLayout& layout, const TerrainProfile& terrain);

/// Holder travel loaded into each spring after the spine bites. A locked pin's
/// spine bears horizontally into the facet under it and closes the recess gap
/// after run = spine_recess * (run per rise of the facet); level facets never
/// bite. delta_i = max(0, stroke - run); non-contacting pins get 0.
std::vector<double> engagement_displacements(const ConformationResult& result,
                                             const TerrainProfile& terrain,
                                             const PinArrayLayout& layout, double holder_stroke);

/// rows * sum_i mu' * P(delta_i) with a single fixed apparent friction.
double deterministic_holding_force(const PinArrayLayout& layout, const TerrainProfile& terrain,
                                   double holder_stroke, const PinMaterial& material,
                                   double apparent_mu);

}  // namespace pinlock
