#include "pinlock/climb.hpp"

#include "pinlock/errors.hpp"
#include "pinlock/grasp_mc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace pinlock {

void RobotSpec::validate() const {
    if (!(std::isfinite(total_mass) && total_mass > 0.0)) throw DomainError("robot.total_mass must be positive");
    if (!(std::isfinite(gravity) && gravity > 0.0)) throw DomainError("robot.gravity must be positive");
    if (unit_count < 1) throw DomainError("robot.unit_count must be >= 1");
    if (!(std::isfinite(per_unit_holding_force) && per_unit_holding_force >= 0.0)) {
        throw DomainError("robot.per_unit_holding_force must be non-negative");
    }
}

double holding_force_preset(std::string_view name) {
    if (name == "average") return 21.1;
    if (name == "worst-case") return 6.11;
    throw DomainError("unknown holding-force preset '" + std::string(name) +
                      "'; expected average or worst-case");
}

void GaitConfig::validate(int unit_count) const {
    if (!(std::isfinite(stride) && stride > 0.0)) throw DomainError("gait.stride must be positive");
    if (!(std::isfinite(step_duration) && step_duration >= 0.0)) {
        throw DomainError("gait.step_duration must be non-negative");
    }
    if (!(incline >= 0.0 && incline <= std::numbers::pi / 2)) {
        throw DomainError("gait.incline must lie in [0, 90] degrees");
    }
    if (stance_minimum < 1) throw DomainError("gait.stance_minimum must be >= 1");
    if (stance_minimum > unit_count - 1) {
        throw DomainError("gait.stance_minimum exceeds the legs left in stance while one is lifted");
    }
    if (!leg_sequence.empty()) {
        std::vector<int> sorted = leg_sequence;
        std::sort(sorted.begin(), sorted.end());
        std::vector<int> expected(static_cast<std::size_t>(unit_count));
        std::iota(expected.begin(), expected.end(), 0);
        if (sorted != expected) throw DomainError("gait.leg_sequence must be a permutation of 0..unit_count-1");
    }
}

std::string_view to_string(GaitOutcome outcome) {
    return outcome == GaitOutcome::completed ? "completed" : "slipped";
}

double required_force(const RobotSpec& spec, double incline) {
    spec.validate();
    if (!(incline >= 0.0 && incline <= std::numbers::pi / 2)) {
        throw DomainError("incline must lie in [0, 90] degrees");
    }
    return spec.weight() * std::sin(incline);
}

StaticAngle max_static_angle(const RobotSpec& spec) {
    spec.validate();
    const double ratio = spec.unit_count * spec.per_unit_holding_force / spec.weight();
    if (ratio >= 1.0) return StaticAngle{std::numbers::pi / 2, true};
    return StaticAngle{std::asin(ratio), false};
}

double stability_margin(std::span<const double> stance_forces, const RobotSpec& spec, double incline) {
    if (stance_forces.empty()) throw StructuralFailure("no leg in stance");
    const double held = std::accumulate(stance_forces.begin(), stance_forces.end(), 0.0);
    return held - required_force(spec, incline);
}

namespace {

class LegForceSource {
public:
    LegForceSource(const RobotSpec& spec, const ContactModel& model, std::uint64_t seed)
        : spec_(spec), model_(model), seed_(seed) {
        if (spec.force_mode == LegForceMode::sampled) {
            model.validate();
            const double mean = analytic_moments(model).mean;
            scale_ = mean > 0.0 ? spec.per_unit_holding_force / mean : 0.0;
        }
    }

    double grasp() {
        if (spec_.force_mode == LegForceMode::fixed) return spec_.per_unit_holding_force;
        RandomStream stream = derive_stream(seed_, next_++);
        return scale_ * simulate_trial_total(model_, stream);
    }

private:
    const RobotSpec& spec_;
    const ContactModel& model_;
    std::uint64_t seed_;
    std::uint64_t next_ = 0;
    double scale_ = 0.0;
};

}  // namespace

GaitResult simulate_gait(const RobotSpec& spec, const GaitConfig& config, const ContactModel& model,
                         int cycles, std::uint64_t master_seed) {
    spec.validate();
    config.validate(spec.unit_count);
    if (cycles < 1) throw DomainError("cycles must be >= 1");

    const auto n = static_cast<std::size_t>(spec.unit_count);
    std::vector<int> order = config.leg_sequence;
    if (order.empty()) {
        order.resize(n);
        std::iota(order.begin(), order.end(), 0);
    }

    LegForceSource source(spec, model, master_seed);
    std::vector<double> leg_force(n);
    for (double& f : leg_force) f = source.grasp();

    GaitResult result;
    std::vector<double> stance;
    stance.reserve(n);
    int steps = 0;
    for (int cycle = 0; cycle < cycles; ++cycle) {
        for (int lifted : order) {
            ++steps;
            stance.clear();
            for (std::size_t leg = 0; leg < n; ++leg) {
                if (static_cast<int>(leg) != lifted) stance.push_back(leg_force[leg]);
            }
            if (static_cast<int>(stance.size()) < config.stance_minimum) {
                throw StructuralFailure("fewer legs in stance than gait.stance_minimum");
            }
            const double margin = stability_margin(stance, spec, config.incline);
            result.per_step_margins.push_back(margin);
            if (margin < 0.0) {
                result.outcome = GaitOutcome::slipped;
                result.slip_events = 1;
                result.distance = result.cycles_completed * config.stride;
                result.elapsed = steps * config.step_duration;
                return result;
            }
            leg_force[static_cast<std::size_t>(lifted)] = source.grasp();
        }
        ++result.cycles_completed;
    }
    result.distance = cycles * config.stride;
    result.elapsed = static_cast<double>(cycles) * static_cast<double>(spec.unit_count) * config.step_duration;
    return result;
}

std::uint64_t sweep_run_seed(std::uint64_t master_seed, std::uint64_t run) {
    return derive_stream(master_seed, run).next_u64();
}

namespace {

GaitSweepRow sweep_row(const RobotSpec& spec, const GaitConfig& config, const ContactModel& model,
                       int cycles, std::uint64_t master_seed, int run) {
    const std::uint64_t seed = sweep_run_seed(master_seed, static_cast<std::uint64_t>(run));
    const GaitResult r = simulate_gait(spec, config, model, cycles, seed);
    return GaitSweepRow{seed, config.incline * 180.0 / std::numbers::pi, r.outcome, r.distance, r.slip_events};
}

void check_sweep(const RobotSpec& spec, const GaitConfig& config, int cycles, int runs) {
    spec.validate();
    config.validate(spec.unit_count);
    if (cycles < 1) throw DomainError("cycles must be >= 1");
    if (runs < 1) throw DomainError("sweep needs at least one run");
}

}  // namespace

std::vector<GaitSweepRow> sweep_gait_serial(const RobotSpec& spec, const GaitConfig& config,
                                            const ContactModel& model, int cycles,
                                            std::uint64_t master_seed, int runs) {
    check_sweep(spec, config, cycles, runs);
    std::vector<GaitSweepRow> rows(static_cast<std::size_t>(runs));
    for (int r = 0; r < runs; ++r) {
        rows[static_cast<std::size_t>(r)] = sweep_row(spec, config, model, cycles, master_seed, r);
    }
    return rows;
}

std::vector<GaitSweepRow> sweep_gait_parallel(const RobotSpec& spec, const GaitConfig& config,
                                              const ContactModel& model, int cycles,
                                              std::uint64_t master_seed, int runs) {
    check_sweep(spec, config, cycles, runs);
    std::vector<GaitSweepRow> rows(static_cast<std::size_t>(runs));
    GaitSweepRow* out = rows.data();
#pragma omp parallel for schedule(dynamic, 4)
    for (int r = 0; r < runs; ++r) {
        out[r] = sweep_row(spec, config, model, cycles, master_seed, r);
    }
    return rows;
}

double slip_fraction(std::span<const GaitSweepRow> rows) {
    if (rows.empty()) return 0.0;
    const auto slipped = std::count_if(rows.begin(), rows.end(),
                                       [](const GaitSweepRow& r) { return r.outcome == GaitOutcome::slipped; });
    return static_cast<double>(slipped) / static_cast<double>(rows.size());
}

}  // namespace pinlock
