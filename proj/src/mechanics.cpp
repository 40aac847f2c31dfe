#include "pinlock/mechanics.hpp"

#include "pinlock/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace pinlock {

namespace {

void require_positive_finite(double value, const char* name) {
    if (!std::isfinite(value) || value <= 0.0) {
        throw DomainError(std::string(name) + " must be positive and finite");
    }
}

void require_nonnegative_finite(double value, const char* name) {
    if (!std::isfinite(value) || value < 0.0) {
        throw DomainError(std::string(name) + " must be non-negative and finite");
    }
}

}  // namespace

void PinMaterial::validate() const {
    require_positive_finite(youngs_modulus, "youngs_modulus");
    require_positive_finite(second_moment_area, "second_moment_area");
    require_positive_finite(effective_length, "effective_length");
}

void PinEngagement::validate() const {
    require_nonnegative_finite(deflection, "deflection");
    require_nonnegative_finite(base_friction, "base_friction");
    if (!(asperity_angle >= 0.0 && asperity_angle < std::numbers::pi / 2)) {
        throw DomainError("asperity_angle must lie in [0, pi/2)");
    }
}

double pressing_force(double deflection, const PinMaterial& material) {
    require_nonnegative_finite(deflection, "deflection");
    material.validate();
    const double l = material.effective_length;
    return 3.0 * deflection * material.youngs_modulus * material.second_moment_area / (l * l * l);
}

double apparent_friction(double base_friction, double asperity_angle) {
    require_nonnegative_finite(base_friction, "base_friction");
    if (!(asperity_angle >= 0.0 && asperity_angle < std::numbers::pi / 2)) {
        throw DomainError("asperity_angle must lie in [0, pi/2)");
    }
    const double t = std::tan(asperity_angle);
    const double denom = 1.0 - base_friction * t;
    // An angle recovered through atan() lands a few ulps off the exact pole.
    if (!(denom > 8.0 * std::numeric_limits<double>::epsilon())) {
        throw SingularityError("1 - mu*tan(beta) <= 0: engagement is self-locking");
    }
    return (base_friction + t) / denom;
}

double pin_holding_force(double pressing, double apparent_mu) {
    require_nonnegative_finite(pressing, "pressing force");
    require_nonnegative_finite(apparent_mu, "apparent friction");
    return apparent_mu * pressing;
}

double total_holding_force(std::span<const double> per_pin) {
    double sum = 0.0;
    for (double f : per_pin) {
        if (!(f >= 0.0)) throw DomainError("per-pin holding force must be non-negative");
        sum += f;
    }
    return sum;
}

double pin_holding_force(const PinEngagement& engagement, const PinMaterial& material) {
    engagement.validate();
    const double mu = apparent_friction(engagement.base_friction, engagement.asperity_angle);
    return pin_holding_force(pressing_force(engagement.deflection, material), mu);
}

}  // namespace pinlock
