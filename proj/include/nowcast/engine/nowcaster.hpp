#pragma once

#include <chrono>
#include <optional>
#include <vector>

#include "nowcast/engine/calibration.hpp"
#include "nowcast/engine/config.hpp"
#include "nowcast/engine/window.hpp"

namespace nowcast::engine {

struct StepResult {
    std::vector<ForecastRecord> closed;
    std::optional<GapEvent> gap;
    bool recalibrated = false;
    bool skipped = false;  ///< outside session hours
};

/**
 * Owns the window and the per-session calibration. The first in-session tick
 * of each local day recalibrates on the trailing sessions of the history seen
 * so far and grid-searches every family before forecasting that tick.
 */
class Nowcaster {
public:
    /// Throws LengthError when warm history holds fewer than config.window points.
    Nowcaster(EngineConfig config, PriceSeries warm_history);

    /// Feeds one tick: calibrate if a new session started, forecast if no
    /// forecast is open, then close the forecasts with the tick.
    StepResult process(const Tick& tick);

    /// Opens forecasts for the next tick if none are open. Requires a calibration.
    std::vector<ForecastRecord> forecast();

    /// Recalibrates and retunes on history up to now, as for a new session.
    const Calibration& calibrate(std::chrono::sys_days session);

    const WindowState& state() const noexcept { return state_; }
    const EngineConfig& config() const noexcept { return config_; }
    const PriceSeries& history() const noexcept { return history_; }
    const std::optional<Calibration>& calibration() const noexcept { return calibration_; }
    std::optional<std::chrono::sys_days> session() const noexcept { return session_; }

private:
    EngineConfig config_;
    PriceSeries history_;
    WindowState state_;
    std::optional<Calibration> calibration_;
    std::optional<std::chrono::sys_days> session_;
};

}  // namespace nowcast::engine
