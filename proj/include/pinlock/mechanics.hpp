#pragma once

#include <numbers>
#include <span>

namespace pinlock {

/// Leaf-spring constants of one pin's elastic element.
struct PinMaterial {
    double youngs_modulus = 0.0;      // Pa
    double second_moment_area = 0.0;  // m^4
    double effective_length = 0.0;    // m, fixed end to spine tip

    void validate() const;
    bool operator==(const PinMaterial&) const = default;
};

/// Geometry of one spine against the surface.
struct PinEngagement {
    double deflection = 0.0;      // m, holder travel after contact
    double asperity_angle = 0.0;  // rad, in [0, pi/2)
    double base_friction = 0.0;   // Coulomb mu

    void validate() const;
};

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Cantilever restoring force 3*delta*E*I / l^3 (N).
double pressing_force(double deflection, const PinMaterial& material);

/// (mu + tan beta) / (1 - mu tan beta). Throws SingularityError when the
/// denominator is not above 8 machine epsilons.
double apparent_friction(double base_friction, double asperity_angle);

double pin_holding_force(double pressing, double apparent_mu);

/// Sum of per-pin holding forces; throws DomainError on any negative entry.
double total_holding_force(std::span<const double> per_pin);

/// apparent_friction + pressing_force + pin_holding_force for one pin.
double pin_holding_force(const PinEngagement& engagement, const PinMaterial& material);

}  // namespace pinlock
