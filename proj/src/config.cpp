#include "pinlock/config.hpp"

#include "pinlock/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

namespace pinlock {

using nlohmann::json;

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
    std::string out = "invalid config:";
    for (const auto& issue : issues) out += "\n  " + issue;
    return out;
}

/// Walks one JSON object, pulling typed fields and recording problems
/// against their dotted path instead of stopping at the first one.
class Reader {
public:
    Reader(const json& node, std::string path, std::vector<std::string>& issues)
        : node_(node), path_(std::move(path)), issues_(issues) {
        if (!node_.is_object()) fail(path_.empty() ? "<root>" : path_, "must be an object");
    }

    std::string at(std::string_view key) const {
        return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
    }

    void fail(const std::string& field, const std::string& what) const {
        issues_.push_back(field + ": " + what);
    }

    const json* find(std::string_view key) {
        seen_.insert(std::string(key));
        if (!node_.is_object()) return nullptr;
        const auto it = node_.find(key);
        return it == node_.end() ? nullptr : &*it;
    }

    bool has(std::string_view key) const { return node_.is_object() && node_.contains(key); }

    void number(std::string_view key, double& out, bool required = false) {
        const json* v = find(key);
        if (!v) {
            if (required) fail(at(key), "is required");
            return;
        }
        if (!v->is_number()) {
            fail(at(key), "must be a number");
            return;
        }
        out = v->get<double>();
    }

    template <typename Int>
    void integer(std::string_view key, Int& out, bool required = false) {
        const json* v = find(key);
        if (!v) {
            if (required) fail(at(key), "is required");
            return;
        }
        if (!v->is_number_integer()) {
            fail(at(key), "must be an integer");
            return;
        }
        if constexpr (std::is_unsigned_v<Int>) {
            if (v->is_number_unsigned()) {
                out = v->get<Int>();
            } else if (v->get<std::int64_t>() < 0) {
                fail(at(key), "must be non-negative");
            } else {
                out = static_cast<Int>(v->get<std::int64_t>());
            }
        } else {
            const auto wide = v->get<std::int64_t>();
            if (wide < std::numeric_limits<Int>::min() || wide > std::numeric_limits<Int>::max()) {
                fail(at(key), "is out of range");
                return;
            }
            out = static_cast<Int>(wide);
        }
    }

    void string(std::string_view key, std::string& out) {
        const json* v = find(key);
        if (!v) return;
        if (!v->is_string()) {
            fail(at(key), "must be a string");
            return;
        }
        out = v->get<std::string>();
    }

    void object(std::string_view key, const std::function<void(Reader&)>& body) {
        const json* v = find(key);
        if (!v) return;
        Reader child(*v, at(key), issues_);
        if (v->is_object()) {
            body(child);
            child.reject_unknown();
        }
    }

    void reject_unknown() const {
        if (!node_.is_object()) return;
        for (const auto& item : node_.items()) {
            if (!seen_.contains(item.key())) fail(at(item.key()), "unknown field");
        }
    }

private:
    const json& node_;
    std::string path_;
    std::vector<std::string>& issues_;
    std::set<std::string> seen_;
};

void check(std::vector<std::string>& issues, bool ok, const std::string& field, const std::string& what) {
    if (!ok) issues.push_back(field + ": " + what);
}

std::string got(double v) { return fmt::format(" (got {})", v); }

void validate_config(const RunConfig& c, std::vector<std::string>& issues) {
    check(issues, c.schema_version == kSchemaVersion, "schema_version",
          fmt::format("unsupported version {}; this tool reads {}", c.schema_version, kSchemaVersion));

    const auto& m = c.model;
    check(issues, m.pin_count >= 1, "model.pin_count", "must be >= 1" + got(m.pin_count));
    check(issues, m.contact_probability >= 0.0 && m.contact_probability <= 1.0,
          "model.contact_probability", "must lie in [0, 1]" + got(m.contact_probability));
    check(issues, std::isfinite(m.pressing.shape) && m.pressing.shape > 0.0, "model.pressing.shape",
          "must be positive" + got(m.pressing.shape));
    check(issues, std::isfinite(m.pressing.scale) && m.pressing.scale > 0.0, "model.pressing.scale",
          "must be positive" + got(m.pressing.scale));
    check(issues, m.friction_range.low >= 0.0, "model.friction_range.low",
          "must be >= 0" + got(m.friction_range.low));
    check(issues, m.friction_range.low <= m.friction_range.high, "model.friction_range",
          "low must be <= high");
    check(issues, std::isfinite(c.pressing_upper_bound) && c.pressing_upper_bound > 0.0,
          "model.pressing_upper_bound", "must be positive" + got(c.pressing_upper_bound));
    if (m.pressing.shape > 0.0 && m.pressing.scale > 0.0 && c.pressing_upper_bound > 0.0 &&
        std::isfinite(m.pressing.shape) && std::isfinite(m.pressing.scale)) {
        const double mass = pressing_mass_below(m.pressing, c.pressing_upper_bound);
        check(issues, mass >= 0.99, "model.pressing",
              fmt::format("only {:.4f} of the pressing-force mass lies below {} N; need >= 0.99", mass,
                          c.pressing_upper_bound));
    }

    const auto positive = [&](double v, const char* field) {
        check(issues, std::isfinite(v) && v > 0.0, field, "must be positive" + got(v));
    };
    positive(c.material.youngs_modulus, "material.youngs_modulus");
    positive(c.material.second_moment_area, "material.second_moment_area");
    positive(c.material.effective_length, "material.effective_length");

    check(issues, c.layout.pins_per_row >= 1, "layout.pins_per_row", "must be >= 1");
    check(issues, c.layout.rows >= 1, "layout.rows", "must be >= 1");
    positive(c.layout.pitch, "layout.pitch");
    positive(c.layout.travel_range, "layout.travel_range");
    check(issues, c.layout.spine_recess >= 0.0, "layout.spine_recess", "must be >= 0" + got(c.layout.spine_recess));

    check(issues, c.wedge.holder_stroke >= 0.0, "wedge.holder_stroke", "must be >= 0" + got(c.wedge.holder_stroke));
    check(issues, c.wedge.apparent_mu >= 0.0, "wedge.apparent_mu", "must be >= 0" + got(c.wedge.apparent_mu));
    check(issues, c.wedge.samples >= 2, "wedge.samples", "must be >= 2");

    positive(c.robot.total_mass, "robot.total_mass");
    positive(c.robot.gravity, "robot.gravity");
    check(issues, c.robot.unit_count >= 1, "robot.unit_count", "must be >= 1");
    check(issues, c.robot.per_unit_holding_force >= 0.0, "robot.per_unit_holding_force",
          "must be >= 0" + got(c.robot.per_unit_holding_force));

    positive(c.gait.stride, "gait.stride");
    check(issues, c.gait.step_duration >= 0.0, "gait.step_duration", "must be >= 0");
    check(issues, c.incline_deg >= 0.0 && c.incline_deg <= 90.0, "gait.incline_deg",
          "must lie in [0, 90]" + got(c.incline_deg));
    if (c.robot.unit_count >= 1) {
        try {
            GaitConfig g = c.gait;
            g.incline = std::clamp(g.incline, 0.0, std::numbers::pi / 2);
            g.validate(c.robot.unit_count);
        } catch (const DomainError& e) {
            const std::string what = e.what();
            if (what.find("leg_sequence") != std::string::npos) {
                issues.push_back("gait.leg_sequence: must be a permutation of 0..unit_count-1");
            } else if (what.find("stance_minimum") != std::string::npos) {
                issues.push_back("gait.stance_minimum: must lie in [1, unit_count - 1]");
            }
        }
    }
    check(issues, c.cycles >= 1, "gait.cycles", "must be >= 1");

    check(issues, c.trials >= 1, "trials", "must be >= 1");
    for (std::size_t i = 0; i < c.percentiles.size(); ++i) {
        const double p = c.percentiles[i];
        check(issues, p >= 0.0 && p <= 1.0, fmt::format("percentiles[{}]", i), "must lie in [0, 1]" + got(p));
    }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

double pressing_mass_below(const GammaParams& params, double bound) {
    params.validate();
    return boost::math::gamma_p(params.shape, bound / params.scale);
}

RunConfig parse_config(const json& doc) {
    std::vector<std::string> issues;
    RunConfig c;
    Reader root(doc, "", issues);
    if (!doc.is_object()) throw ConfigError(std::move(issues));

    root.integer("schema_version", c.schema_version, true);
    root.integer("trials", c.trials);
    root.integer("master_seed", c.master_seed);
    if (const json* p = root.find("percentiles")) {
        if (!p->is_array()) {
            root.fail("percentiles", "must be an array of probabilities");
        } else {
            c.percentiles.clear();
            for (std::size_t i = 0; i < p->size(); ++i) {
                if (!(*p)[i].is_number()) {
                    root.fail(fmt::format("percentiles[{}]", i), "must be a number");
                } else {
                    c.percentiles.push_back((*p)[i].get<double>());
                }
            }
        }
    }

    root.object("model", [&](Reader& r) {
        r.integer("pin_count", c.model.pin_count);
        r.number("contact_probability", c.model.contact_probability);
        r.number("pressing_upper_bound", c.pressing_upper_bound);
        r.object("pressing", [&](Reader& g) {
            const bool by_params = g.has("shape") || g.has("scale");
            const bool by_moments = g.has("mean") || g.has("variance");
            if (by_params && by_moments) {
                g.fail(g.at("mean"), "give either shape/scale or mean/variance, not both");
            }
            if (by_moments) {
                double mean = 0.0;
                double variance = 0.0;
                g.number("mean", mean, true);
                g.number("variance", variance, true);
                if (mean > 0.0 && variance > 0.0) {
                    c.model.pressing = gamma_from_moments(mean, variance);
                } else {
                    g.fail(g.at("mean"), "mean and variance must both be positive");
                }
            } else {
                g.number("shape", c.model.pressing.shape, true);
                g.number("scale", c.model.pressing.scale, true);
            }
        });
        r.object("friction_range", [&](Reader& f) {
            f.number("low", c.model.friction_range.low, true);
            f.number("high", c.model.friction_range.high, true);
        });
    });
    if (!root.has("model")) root.fail("model", "is required");

    root.object("material", [&](Reader& r) {
        r.number("youngs_modulus", c.material.youngs_modulus, true);
        r.number("second_moment_area", c.material.second_moment_area, true);
        r.number("effective_length", c.material.effective_length, true);
    });
    if (!root.has("material")) root.fail("material", "is required");

    root.object("layout", [&](Reader& r) {
        r.integer("pins_per_row", c.layout.pins_per_row);
        r.integer("rows", c.layout.rows);
        r.number("pitch", c.layout.pitch);
        r.number("travel_range", c.layout.travel_range);
        r.number("rest_height", c.layout.rest_height);
        r.number("spine_recess", c.layout.spine_recess);
        r.number("origin", c.layout.origin);
    });

    root.object("wedge", [&](Reader& r) {
        r.number("holder_stroke", c.wedge.holder_stroke);
        r.number("apparent_mu", c.wedge.apparent_mu);
        r.integer("samples", c.wedge.samples);
    });

    root.object("robot", [&](Reader& r) {
        r.number("total_mass", c.robot.total_mass);
        r.number("gravity", c.robot.gravity);
        r.integer("unit_count", c.robot.unit_count);
        if (r.has("per_unit_holding_force") && r.has("force_preset")) {
            r.fail(r.at("force_preset"), "give either per_unit_holding_force or force_preset, not both");
        }
        r.number("per_unit_holding_force", c.robot.per_unit_holding_force);
        std::string preset;
        r.string("force_preset", preset);
        if (!preset.empty()) {
            try {
                c.robot.per_unit_holding_force = holding_force_preset(preset);
            } catch (const DomainError&) {
                r.fail(r.at("force_preset"), "must be \"average\" or \"worst-case\"");
            }
        }
        std::string mode = "sampled";
        r.string("force_mode", mode);
        if (mode == "sampled") {
            c.robot.force_mode = LegForceMode::sampled;
        } else if (mode == "fixed") {
            c.robot.force_mode = LegForceMode::fixed;
        } else {
            r.fail(r.at("force_mode"), "must be \"sampled\" or \"fixed\"");
        }
    });

    root.object("gait", [&](Reader& r) {
        r.number("stride", c.gait.stride);
        r.number("step_duration", c.gait.step_duration);
        r.number("incline_deg", c.incline_deg);
        c.gait.incline = deg_to_rad(c.incline_deg);
        r.integer("stance_minimum", c.gait.stance_minimum);
        r.integer("cycles", c.cycles);
        if (const json* seq = r.find("leg_sequence")) {
            if (!seq->is_array()) {
                r.fail(r.at("leg_sequence"), "must be an array of leg indices");
            } else {
                c.gait.leg_sequence.clear();
                for (const auto& v : *seq) {
                    if (!v.is_number_integer()) {
                        r.fail(r.at("leg_sequence"), "entries must be integers");
                        break;
                    }
                    c.gait.leg_sequence.push_back(v.get<int>());
                }
            }
        }
    });

    if (const json* m = root.find("metadata")) {
        if (m->is_object()) c.metadata = *m; else root.fail("metadata", "must be an object");
    }
    if (const json* p = root.find("provenance")) {
        if (p->is_object()) c.provenance = *p; else root.fail("provenance", "must be an object");
    }
    root.reject_unknown();

    if (issues.empty()) validate_config(c, issues);
    if (!issues.empty()) throw ConfigError(std::move(issues));
    return c;
}

RunConfig parse_config_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("<root>: not valid JSON: ") + e.what()});
    }
    return parse_config(doc);
}

json serialize_config(const RunConfig& c) {
    json gait = {
        {"stride", c.gait.stride},
        {"step_duration", c.gait.step_duration},
        {"incline_deg", c.incline_deg},
        {"stance_minimum", c.gait.stance_minimum},
        {"leg_sequence", c.gait.leg_sequence},
        {"cycles", c.cycles},
    };
    return json{
        {"schema_version", c.schema_version},
        {"trials", c.trials},
        {"master_seed", c.master_seed},
        {"percentiles", c.percentiles},
        {"model",
         {{"pin_count", c.model.pin_count},
          {"contact_probability", c.model.contact_probability},
          {"pressing", {{"shape", c.model.pressing.shape}, {"scale", c.model.pressing.scale}}},
          {"pressing_upper_bound", c.pressing_upper_bound},
          {"friction_range", {{"low", c.model.friction_range.low}, {"high", c.model.friction_range.high}}}}},
        {"material",
         {{"youngs_modulus", c.material.youngs_modulus},
          {"second_moment_area", c.material.second_moment_area},
          {"effective_length", c.material.effective_length}}},
        {"layout",
         {{"pins_per_row", c.layout.pins_per_row},
          {"rows", c.layout.rows},
          {"pitch", c.layout.pitch},
          {"travel_range", c.layout.travel_range},
          {"rest_height", c.layout.rest_height},
          {"spine_recess", c.layout.spine_recess},
          {"origin", c.layout.origin}}},
        {"wedge",
         {{"holder_stroke", c.wedge.holder_stroke},
          {"apparent_mu", c.wedge.apparent_mu},
          {"samples", c.wedge.samples}}},
        {"robot",
         {{"total_mass", c.robot.total_mass},
          {"gravity", c.robot.gravity},
          {"unit_count", c.robot.unit_count},
          {"per_unit_holding_force", c.robot.per_unit_holding_force},
          {"force_mode", c.robot.force_mode == LegForceMode::fixed ? "fixed" : "sampled"}}},
        {"gait", gait},
        {"metadata", c.metadata},
        {"provenance", c.provenance},
    };
}

std::string content_digest(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return fmt::format("{:016x}", h);
}

LoadedConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot read config '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    LoadedConfig loaded;
    loaded.bytes = buf.str();
    loaded.hash = content_digest(loaded.bytes);
    loaded.config = parse_config_text(loaded.bytes);
    return loaded;
}

}  // namespace pinlock
