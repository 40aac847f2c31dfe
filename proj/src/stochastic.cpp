#include "pinlock/stochastic.hpp"

#include "pinlock/errors.hpp"

#include <cmath>

namespace pinlock {

void GammaParams::validate() const {
    if (!(std::isfinite(shape) && shape > 0.0)) throw DomainError("gamma shape must be positive");
    if (!(std::isfinite(scale) && scale > 0.0)) throw DomainError("gamma scale must be positive");
}

void UniformRange::validate() const {
    if (!(std::isfinite(low) && std::isfinite(high))) throw DomainError("friction range must be finite");
    if (low < 0.0) throw DomainError("friction range low must be >= 0");
    if (low > high) throw DomainError("friction range low must be <= high");
}

void ContactModel::validate() const {
    if (pin_count < 1) throw DomainError("pin_count must be >= 1");
    if (!(contact_probability >= 0.0 && contact_probability <= 1.0)) {
        throw DomainError("contact_probability must lie in [0, 1]");
    }
    pressing.validate();
    friction_range.validate();
}

GammaParams gamma_from_moments(double mean, double variance) {
    if (!(std::isfinite(mean) && mean > 0.0)) throw DomainError("gamma mean must be positive");
    if (!(std::isfinite(variance) && variance > 0.0)) throw DomainError("gamma variance must be positive");
    return GammaParams{mean * mean / variance, variance / mean};
}

Moments moments_from_gamma(const GammaParams& params) {
    params.validate();
    return Moments{params.shape * params.scale, params.shape * params.scale * params.scale};
}

int sample_binomial(int trials, double probability, RandomStream& stream) {
    if (trials <= 0 || probability <= 0.0) return 0;
    if (probability >= 1.0) return trials;

    const bool flipped = probability > 0.5;
    const double p = flipped ? 1.0 - probability : probability;
    const double q = 1.0 - p;

    int successes = 0;
    const double p0 = std::pow(q, trials);
    if (p0 > 0.0) {
        // Inversion by sequential search of the CDF; one uniform per draw.
        const double u = stream.uniform01();
        const double ratio = p / q;
        double pmf = p0;
        double cdf = p0;
        while (u >= cdf && successes < trials) {
            pmf *= ratio * static_cast<double>(trials - successes) / static_cast<double>(successes + 1);
            ++successes;
            cdf += pmf;
        }
    } else {
        // q^n underflows only for very large n; count Bernoulli trials instead.
        for (int i = 0; i < trials; ++i) {
            if (stream.uniform01() < p) ++successes;
        }
    }
    return flipped ? trials - successes : successes;
}

double sample_standard_gamma(double shape, RandomStream& stream) {
    if (shape < 1.0) {
        // Boost to shape + 1, then scale by U^(1/shape).
        const double g = sample_standard_gamma(shape + 1.0, stream);
        return g * std::pow(stream.uniform_open01(), 1.0 / shape);
    }
    // Marsaglia & Tsang (2000).
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = stream.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = stream.uniform_open01();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

int sample_contact_count(const ContactModel& model, RandomStream& stream) {
    return sample_binomial(model.pin_count, model.contact_probability, stream);
}

double sample_pressing_force(const GammaParams& params, RandomStream& stream) {
    return params.scale * sample_standard_gamma(params.shape, stream);
}

double sample_friction(const UniformRange& range, RandomStream& stream) {
    if (range.low == range.high) return range.low;
    return range.low + (range.high - range.low) * stream.uniform01();
}

}  // namespace pinlock
