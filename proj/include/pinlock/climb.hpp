#pragma once

#include "pinlock/stochastic.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pinlock {

/// How a leg's holding force is obtained at each grasp.
enum class LegForceMode {
    fixed,    // every grasp holds exactly per_unit_holding_force
    sampled,  // a grasp Monte Carlo trial, rescaled so its mean is per_unit_holding_force
};

struct RobotSpec {
    double total_mass = 15.7;  // kg
    double gravity = 9.81;     // m/s^2
    int unit_count = 6;
    double per_unit_holding_force = 21.1;  // N, tangential
    LegForceMode force_mode = LegForceMode::sampled;

    void validate() const;
    double weight() const { return total_mass * gravity; }
    bool operator==(const RobotSpec&) const = default;
};

/// Named per-unit holding forces from single-gripper tangential pull tests.
double holding_force_preset(std::string_view name);  // "average" | "worst-case"

struct GaitConfig {
    double stride = 0.09;         // m, body advance per full cycle
    double step_duration = 75.0;  // s, one leg lift-and-regrasp
    double incline = 0.0;         // rad
    std::vector<int> leg_sequence;  // empty = rear to front, 0..n-1
    int stance_minimum = 1;

    void validate(int unit_count) const;
    bool operator==(const GaitConfig&) const = default;
};

enum class GaitOutcome { completed, slipped };
std::string_view to_string(GaitOutcome outcome);

struct GaitResult {
    double distance = 0.0;
    double elapsed = 0.0;
    int slip_events = 0;
    GaitOutcome outcome = GaitOutcome::completed;
    int cycles_completed = 0;
    std::vector<double> per_step_margins;

    bool operator==(const GaitResult&) const = default;
};

struct StaticAngle {
    double angle = 0.0;  // rad
    bool capped = false;  // n F >= M g; the robot holds at any incline
};

/// M g sin(theta); incline in [0, pi/2].
double required_force(const RobotSpec& spec, double incline);

/// arcsin(min(1, n F / (M g))).
StaticAngle max_static_angle(const RobotSpec& spec);

/// sum(stance) - M g sin(theta). Negative means slip. Throws
/// StructuralFailure when no leg is in stance.
double stability_margin(std::span<const double> stance_forces, const RobotSpec& spec, double incline);

/// Quasi-static backward wave gait. Each cycle lifts every leg once in
/// leg_sequence order; while a leg is lifted the remaining legs hold with the
/// force drawn at their last grasp. A lifted leg re-grasps (new draw) before
/// the next leg lifts. The run stops at the first negative margin.
/// Grasp draw g (0-based, initial grasps first) uses derive_stream(seed, g).
GaitResult simulate_gait(const RobotSpec& spec, const GaitConfig& config, const ContactModel& model,
                         int cycles, std::uint64_t master_seed);

struct GaitSweepRow {
    std::uint64_t seed = 0;
    double incline_deg = 0.0;
    GaitOutcome outcome = GaitOutcome::completed;
    double distance = 0.0;
    int slip_events = 0;

    bool operator==(const GaitSweepRow&) const = default;
};

/// Seed of run r in a sweep: first draw of derive_stream(master_seed, r).
std::uint64_t sweep_run_seed(std::uint64_t master_seed, std::uint64_t run);

std::vector<GaitSweepRow> sweep_gait_serial(const RobotSpec& spec, const GaitConfig& config,
                                            const ContactModel& model, int cycles,
                                            std::uint64_t master_seed, int runs);
std::vector<GaitSweepRow> sweep_gait_parallel(const RobotSpec& spec, const GaitConfig& config,
                                              const ContactModel& model, int cycles,
                                              std::uint64_t master_seed, int runs);

double slip_fraction(std::span<const GaitSweepRow> rows);

}  // namespace pinlock
