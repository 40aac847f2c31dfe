#include "pinlock/grasp_mc.hpp"

#include "pinlock/errors.hpp"
#include "pinlock/mechanics.hpp"

#include <algorithm>
#include <cmath>

namespace pinlock {

GraspSample simulate_trial(const ContactModel& model, RandomStream& stream) {
    GraspSample sample;
    sample.contact_count = sample_contact_count(model, stream);
    sample.per_pin_forces.reserve(static_cast<std::size_t>(sample.contact_count));
    for (int i = 0; i < sample.contact_count; ++i) {
        const double pressing = sample_pressing_force(model.pressing, stream);
        const double mu = sample_friction(model.friction_range, stream);
        sample.per_pin_forces.push_back(pin_holding_force(pressing, mu));
    }
    sample.total_force = total_holding_force(sample.per_pin_forces);
    return sample;
}

double simulate_trial_total(const ContactModel& model, RandomStream& stream) {
    const int n = sample_contact_count(model, stream);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double pressing = sample_pressing_force(model.pressing, stream);
        const double mu = sample_friction(model.friction_range, stream);
        total += mu * pressing;
    }
    return total;
}

std::vector<double> trial_totals_serial(const ContactModel& model, std::int64_t trials,
                                        std::uint64_t master_seed) {
    model.validate();
    if (trials < 1) throw DomainError("trials must be >= 1");
    std::vector<double> totals(static_cast<std::size_t>(trials));
    for (std::int64_t j = 0; j < trials; ++j) {
        RandomStream stream = derive_stream(master_seed, static_cast<std::uint64_t>(j));
        totals[static_cast<std::size_t>(j)] = simulate_trial_total(model, stream);
    }
    return totals;
}

std::vector<double> trial_totals_parallel(const ContactModel& model, std::int64_t trials,
                                          std::uint64_t master_seed) {
    model.validate();
    if (trials < 1) throw DomainError("trials must be >= 1");
    std::vector<double> totals(static_cast<std::size_t>(trials));
    double* out = totals.data();
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < trials; ++j) {
        RandomStream stream = derive_stream(master_seed, static_cast<std::uint64_t>(j));
        out[j] = simulate_trial_total(model, stream);
    }
    return totals;
}

double percentile_sorted(std::span<const double> sorted, double prob) {
    if (sorted.empty()) throw DomainError("percentile of an empty sample");
    if (!(prob >= 0.0 && prob <= 1.0)) throw DomainError("percentile probability must lie in [0, 1]");
    const double n = static_cast<double>(sorted.size());
    const double pos = std::clamp(n * prob - 0.5, 0.0, n - 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

GraspDistribution summarize_totals(std::span<const double> totals,
                                   std::span<const double> percentile_probs,
                                   std::uint64_t master_seed) {
    if (totals.empty()) throw DomainError("trials must be >= 1");
    GraspDistribution dist;
    dist.trial_count = static_cast<std::int64_t>(totals.size());
    dist.master_seed = master_seed;

    // Neumaier-compensated sums in index order.
    auto compensated_sum = [&](auto&& term) {
        double sum = 0.0;
        double comp = 0.0;
        for (double x : totals) {
            const double t = term(x);
            const double s = sum + t;
            comp += std::fabs(sum) >= std::fabs(t) ? (sum - s) + t : (t - s) + sum;
            sum = s;
        }
        return sum + comp;
    };
    const double n = static_cast<double>(totals.size());
    dist.mean = compensated_sum([](double x) { return x; }) / n;
    if (totals.size() > 1) {
        const double m = dist.mean;
        dist.variance = compensated_sum([m](double x) { return (x - m) * (x - m); }) / (n - 1.0);
    }

    std::vector<double> sorted(totals.begin(), totals.end());
    std::sort(sorted.begin(), sorted.end());
    for (double p : percentile_probs) {
        dist.percentiles[p] = percentile_sorted(sorted, p);
    }
    return dist;
}

GraspDistribution run_monte_carlo(const ContactModel& model, std::int64_t trials,
                                  std::uint64_t master_seed,
                                  std::span<const double> percentile_probs, Schedule schedule) {
    if (trials < 1) throw DomainError("trials must be >= 1");
    const std::vector<double> totals = schedule == Schedule::parallel
                                           ? trial_totals_parallel(model, trials, master_seed)
                                           : trial_totals_serial(model, trials, master_seed);
    return summarize_totals(totals, percentile_probs, master_seed);
}

Moments analytic_moments(const ContactModel& model) {
    model.validate();
    const double np = static_cast<double>(model.pin_count) * model.contact_probability;
    const double q = 1.0 - model.contact_probability;
    const Moments pressing = moments_from_gamma(model.pressing);
    const double mean_x = model.friction_range.mean() * pressing.mean;
    const double second_x =
        model.friction_range.second_moment() * (pressing.variance + pressing.mean * pressing.mean);
    const double var_x = second_x - mean_x * mean_x;
    return Moments{np * mean_x, np * var_x + np * q * mean_x * mean_x};
}

std::pair<double, double> normal_band(const GraspDistribution& dist) {
    const double half = kZ90 * std::sqrt(dist.variance);
    return {dist.mean - half, dist.mean + half};
}

GammaParams calibrate_pressing_moments(double target_mean, std::pair<double, double> target_ci,
                                       const ContactModel& skeleton) {
    const auto [low, high] = target_ci;
    if (!(std::isfinite(target_mean) && target_mean > 0.0)) {
        throw DomainError("target mean must be positive");
    }
    if (!(std::isfinite(low) && std::isfinite(high)) || low > high) {
        throw DomainError("target interval must satisfy low <= high");
    }
    if (target_mean < low || target_mean > high) {
        throw DomainError("target mean lies outside the target interval");
    }
    if (skeleton.pin_count < 1) throw DomainError("pin_count must be >= 1");
    if (!(skeleton.contact_probability >= 0.0 && skeleton.contact_probability <= 1.0)) {
        throw DomainError("contact_probability must lie in [0, 1]");
    }
    skeleton.friction_range.validate();

    const double np = static_cast<double>(skeleton.pin_count) * skeleton.contact_probability;
    const double mean_mu = skeleton.friction_range.mean();
    if (np <= 0.0 || mean_mu <= 0.0) {
        throw CalibrationError("model has no expected contact or zero friction; mean is unreachable");
    }
    const double q = 1.0 - skeleton.contact_probability;

    const double mean_x = target_mean / np;
    const double mean_p = mean_x / mean_mu;
    const double sigma_f = 0.5 * (high - low) / kZ90;
    const double var_f = sigma_f * sigma_f;
    const double var_x = (var_f - np * q * mean_x * mean_x) / np;
    const double second_p = (var_x + mean_x * mean_x) / skeleton.friction_range.second_moment();
    const double var_p = second_p - mean_p * mean_p;
    if (!(var_p > 0.0)) {
        throw CalibrationError(
            "target interval is narrower than contact-count and friction variability allow "
            "(implied pressing-force variance <= 0)");
    }
    return gamma_from_moments(mean_p, var_p);
}

}  // namespace pinlock
