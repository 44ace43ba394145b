#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nowcast/core/family.hpp"
#include "nowcast/core/time.hpp"
#include "nowcast/engine/config.hpp"

namespace nowcast::app {

/// Everything a subcommand can be configured with. Flags and config-file
/// keys share names, e.g. --max-lag and `max-lag = 40`.
struct RunConfig {
    std::string input;
    std::string endpoint;
    std::string mapping;
    std::string history;
    std::string symbol;
    std::string out;
    bool resume = false;

    std::size_t window = 300;
    Seconds interval{300};
    std::vector<Family> models{kAllFamilies.begin(), kAllFamilies.end()};
    double tolerance = 0.05;
    engine::RetrainMode retrain_mode = engine::RetrainMode::exceed;
    std::size_t max_lag = 40;
    std::size_t max_dim = 12;
    double saturation_tol = 0.05;
    std::size_t lyapunov_steps = 10;
    std::size_t sessions = 4;
    std::size_t stride = 1;
    engine::TuningSchedule tuning = engine::TuningSchedule::every_retrain;
    double split = 0.2;
    std::uint64_t seed = 0;
    double speedup = std::numeric_limits<double>::infinity();
    SessionHours hours;
    std::optional<Timestamp> start_at;
    std::optional<Timestamp> stop_at;
    bool parallel = true;

    bool operator==(const RunConfig&) const = default;
};

/// Text form of the options before validation, as CLI11 fills them.
struct RawOptions {
    std::string interval = "300s";
    std::string models = "lasso,ridge,random_forest,gbt,glm";
    std::string retrain_mode = "exceed";
    std::string tuning = "every-retrain";
    std::string speedup = "inf";
    std::string session_open = "09:30";
    std::string session_close = "15:30";
    std::string utc_offset = "+00:00";
    std::string start_at;
    std::string stop_at;
};

/// Parses the text options into `config` and checks every field.
/// Throws ConfigError naming the offending option.
void finalize(RunConfig& config, const RawOptions& raw);

engine::EngineConfig engine_config(const RunConfig& config);

}  // namespace nowcast::app
