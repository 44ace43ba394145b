#include "nowcast/app/run_config.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "nowcast/core/error.hpp"

namespace nowcast::app {

namespace {

template <typename F>
auto field(const char* name, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        throw ConfigError(fmt::format("--{}: {}", name, e.what()));
    }
}

double parse_speedup(const std::string& text) {
    if (text == "inf" || text == "infinity" || text == "max") return std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !(v > 0.0)) {
        throw ConfigError(fmt::format("--speedup: '{}' is not a positive number or 'inf'", text));
    }
    return v;
}

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

}  // namespace

void finalize(RunConfig& c, const RawOptions& raw) {
    const auto interval = field("interval", [&] { return parse_duration(raw.interval); });
    require(interval.count() > 0 && interval.count() % 1000 == 0, "--interval: must be a positive whole number of seconds");
    c.interval = std::chrono::duration_cast<Seconds>(interval);

    c.models = field("models", [&] { return parse_family_list(raw.models); });
    require(!c.models.empty(), "--models: at least one model is required");

    if (raw.retrain_mode == "exceed") {
        c.retrain_mode = engine::RetrainMode::exceed;
    } else if (raw.retrain_mode == "symmetric") {
        c.retrain_mode = engine::RetrainMode::symmetric;
    } else {
        throw ConfigError(fmt::format("--retrain-mode: expected exceed or symmetric, got '{}'", raw.retrain_mode));
    }
    if (raw.tuning == "every-retrain") {
        c.tuning = engine::TuningSchedule::every_retrain;
    } else if (raw.tuning == "daily") {
        c.tuning = engine::TuningSchedule::daily;
    } else {
        throw ConfigError(fmt::format("--tuning: expected every-retrain or daily, got '{}'", raw.tuning));
    }
    c.speedup = parse_speedup(raw.speedup);

    c.hours.open = field("session-open", [&] { return parse_time_of_day(raw.session_open); });
    c.hours.close = field("session-close", [&] { return parse_time_of_day(raw.session_close); });
    c.hours.utc_offset = field("utc-offset", [&] { return parse_utc_offset(raw.utc_offset); });
    require(c.hours.open < c.hours.close, "--session-open must be before --session-close");
    c.start_at = raw.start_at.empty() ? std::nullopt
                                      : std::optional(field("start-at", [&] { return parse_rfc3339(raw.start_at); }));
    c.stop_at = raw.stop_at.empty() ? std::nullopt
                                    : std::optional(field("stop-at", [&] { return parse_rfc3339(raw.stop_at); }));
    if (c.start_at && c.stop_at) require(*c.start_at < *c.stop_at, "--start-at must be before --stop-at");

    require(c.window >= 20, "--window: must be at least 20");
    require(c.tolerance > 0.0 && std::isfinite(c.tolerance), "--tolerance: must be > 0");
    require(c.max_lag >= 1, "--max-lag: must be >= 1");
    require(c.max_dim >= 2, "--max-dim: must be >= 2");
    require(c.saturation_tol > 0.0 && c.saturation_tol < 1.0, "--saturation-tol: must lie in (0, 1)");
    require(c.lyapunov_steps >= 4, "--lyapunov-steps: must be >= 4");
    require(c.sessions >= 1, "--sessions: must be >= 1");
    require(c.stride >= 1, "--stride: must be >= 1");
    require(c.split > 0.0 && c.split < 1.0, "--split: must lie in (0, 1)");
}

engine::EngineConfig engine_config(const RunConfig& c) {
    engine::EngineConfig e;
    e.window = c.window;
    e.interval = c.interval;
    e.families = c.models;
    e.policy = {c.tolerance, c.retrain_mode};
    e.calibration.max_lag = c.max_lag;
    e.calibration.max_dim = c.max_dim;
    e.calibration.saturation_tol = c.saturation_tol;
    e.calibration.lyapunov_steps = c.lyapunov_steps;
    e.calibration.sessions = c.sessions;
    e.calibration.min_points = c.window;
    e.calibration.hours = c.hours;
    e.stride = c.stride;
    e.tuning = c.tuning;
    e.split_fraction = c.split;
    e.seed = c.seed;
    e.hours = c.hours;
    e.parallel = c.parallel;
    return e;
}

}  // namespace nowcast::app
