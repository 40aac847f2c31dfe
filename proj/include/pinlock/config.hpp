#pragma once

#include "pinlock/climb.hpp"
#include "pinlock/conformation.hpp"
#include "pinlock/mechanics.hpp"
#include "pinlock/stochastic.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pinlock {

inline constexpr int kSchemaVersion = 1;

/// Deterministic holding-force scenario settings.
struct WedgeSettings {
    double holder_stroke = 0.005;  // m
    double apparent_mu = 1.7;
    int samples = 301;

    bool operator==(const WedgeSettings&) const = default;
};

struct RunConfig {
    int schema_version = kSchemaVersion;
    ContactModel model;
    /// At least 99% of the gamma pressing-force mass must lie below this (N).
    double pressing_upper_bound = 5.0;
    PinMaterial material;
    PinArrayLayout layout;
    WedgeSettings wedge;
    RobotSpec robot;
    GaitConfig gait;  // gait.incline is derived from incline_deg
    double incline_deg = 0.0;
    int cycles = 4;
    std::int64_t trials = 100000;
    std::uint64_t master_seed = 0;
    std::vector<double> percentiles{0.05, 0.5, 0.95};
    /// Free-form annotations carried through round trips untouched.
    nlohmann::json metadata = nlohmann::json::object();
    nlohmann::json provenance = nlohmann::json::object();

    bool operator==(const RunConfig&) const = default;
};

/// Validation failure; every message is prefixed with the offending field
/// path, e.g. "model.contact_probability: must lie in [0, 1] (got 1.5)".
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> issues);
    const std::vector<std::string>& issues() const { return issues_; }

private:
    std::vector<std::string> issues_;
};

/// Parse and validate. Throws ConfigError listing every problem found.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_text(std::string_view text);

/// Canonical JSON; parse_config(serialize_config(c)) == c.
nlohmann::json serialize_config(const RunConfig& config);

/// FNV-1a 64-bit digest as 16 lowercase hex digits.
std::string content_digest(std::string_view bytes);

struct LoadedConfig {
    RunConfig config;
    std::string bytes;
    std::string hash;
};

/// Reads, hashes and parses a config file. Throws std::ios_base::failure when
/// unreadable, ConfigError when invalid.
LoadedConfig load_config(const std::filesystem::path& path);

/// Fraction of pressing-force mass below `bound` newtons.
double pressing_mass_below(const GammaParams& params, double bound);

}  // namespace pinlock
