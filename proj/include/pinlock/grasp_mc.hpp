#pragma once

#include "pinlock/random.hpp"
#include "pinlock/stochastic.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace pinlock {

struct GraspSample {
    int contact_count = 0;
    std::vector<double> per_pin_forces;
    double total_force = 0.0;

    bool operator==(const GraspSample&) const = default;
};

struct GraspDistribution {
    std::int64_t trial_count = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased; 0 for a single trial
    std::map<double, double> percentiles;
    std::uint64_t master_seed = 0;

    bool operator==(const GraspDistribution&) const = default;
};

enum class Schedule { serial, parallel };

/// Draws n ~ B(N, p), then n (pressing, friction) pairs in that order and
/// sums mu'_i * P_i.
GraspSample simulate_trial(const ContactModel& model, RandomStream& stream);

/// Same draw sequence as simulate_trial, without materialising per-pin forces.
double simulate_trial_total(const ContactModel& model, RandomStream& stream);

/// Trial totals for trials [0, trials), trial j on derive_stream(seed, j).
/// Kernels: the serial loop is the reference the OpenMP loop is tested against.
std::vector<double> trial_totals_serial(const ContactModel& model, std::int64_t trials,
                                        std::uint64_t master_seed);
std::vector<double> trial_totals_parallel(const ContactModel& model, std::int64_t trials,
                                          std::uint64_t master_seed);

/// Percentile by linear interpolation between order statistics at position
/// n*prob - 0.5 (zero-based, Hazen/midpoint convention), clamped to the
/// sample range. `sorted` must be ascending and nonempty.
double percentile_sorted(std::span<const double> sorted, double prob);

/// Sample mean, unbiased variance and percentiles of a set of totals.
/// Order of `totals` only matters through the mean, which is summed in index order.
GraspDistribution summarize_totals(std::span<const double> totals,
                                   std::span<const double> percentile_probs,
                                   std::uint64_t master_seed);

GraspDistribution run_monte_carlo(const ContactModel& model, std::int64_t trials,
                                  std::uint64_t master_seed,
                                  std::span<const double> percentile_probs,
                                  Schedule schedule = Schedule::parallel);

/// Exact mean and variance of the compound sum F = sum_{i<n} mu'_i P_i.
Moments analytic_moments(const ContactModel& model);

/// Two-sided central normal quantile for a 90% band, Phi^{-1}(0.95).
inline constexpr double kZ90 = 1.6448536269514722;

/// mean +/- kZ90 * sigma; the alternative reading of a 90% interval.
std::pair<double, double> normal_band(const GraspDistribution& dist);

/// Gamma pressing-force parameters that make the compound model hit
/// `target_mean` exactly and match the band half-width as kZ90 * sigma_F.
/// Uses N, p and the friction range of `skeleton`; its pressing law is ignored.
GammaParams calibrate_pressing_moments(double target_mean, std::pair<double, double> target_ci,
                                       const ContactModel& skeleton);

}  // namespace pinlock
