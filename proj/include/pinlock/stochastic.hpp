#pragma once

#include "pinlock/random.hpp"

namespace pinlock {

/// Gamma law of a contacting pin's pressing force: shape k, scale theta (N).
struct GammaParams {
    double shape = 1.0;
    double scale = 1.0;

    void validate() const;
    bool operator==(const GammaParams&) const = default;
};

/// Closed interval [low, high] for the apparent friction coefficient.
struct UniformRange {
    double low = 0.4;
    double high = 3.0;

    void validate() const;
    double mean() const { return 0.5 * (low + high); }
    /// E[X^2] for X ~ U(low, high).
    double second_moment() const { return (low * low + low * high + high * high) / 3.0; }
    bool operator==(const UniformRange&) const = default;
};

/// The three stochastic assumptions of the multi-pin grasp: a binomial
/// number of contacting pins, gamma pressing forces and uniform apparent
/// friction, all mutually independent.
struct ContactModel {
    int pin_count = 132;
    double contact_probability = 0.1;
    GammaParams pressing;
    UniformRange friction_range;

    void validate() const;
    bool operator==(const ContactModel&) const = default;
};

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

/// Method of moments: shape = mean^2 / var, scale = var / mean.
GammaParams gamma_from_moments(double mean, double variance);
Moments moments_from_gamma(const GammaParams& params);

int sample_contact_count(const ContactModel& model, RandomStream& stream);
double sample_pressing_force(const GammaParams& params, RandomStream& stream);
double sample_friction(const UniformRange& range, RandomStream& stream);

/// Building blocks of the samplers above, exposed for testing.
int sample_binomial(int trials, double probability, RandomStream& stream);
double sample_standard_gamma(double shape, RandomStream& stream);

}  // namespace pinlock
