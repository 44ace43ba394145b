#pragma once

#include <cstddef>

#include "nowcast/chaos/cao.hpp"
#include "nowcast/chaos/chaos_params.hpp"
#include "nowcast/chaos/lyapunov.hpp"
#include "nowcast/chaos/pacf.hpp"
#include "nowcast/core/series.hpp"

namespace nowcast::engine {

struct CalibrationConfig {
    std::size_t max_lag = 40;
    std::size_t max_dim = 12;
    double saturation_tol = chaos::kDefaultSaturationTol;
    std::size_t lyapunov_steps = chaos::kDefaultLyapunovSteps;
    std::size_t sessions = 4;      ///< trailing sessions fed to calibration
    std::size_t min_points = 300;  ///< never calibrate on less than the window
    SessionHours hours;
};

/// Everything calibrate_day computed, for reporting.
struct Calibration {
    chaos::ChaosParams params;
    std::vector<double> pacf;
    chaos::CaoProfile cao;
    std::size_t points = 0;
};

/**
 * Lag from the PACF significance band, embedding dimension from Cao's E1
 * plateau, then the largest Lyapunov exponent on that reconstruction.
 * max_lag and max_dim are clamped to what the history length supports.
 * Throws LengthError below min_points; degeneracy errors carry the date of
 * the last history point.
 */
Calibration calibrate_day(const PriceSeries& history, const CalibrationConfig& config);

/// The last `sessions` local trading days of history, extended further back
/// when they hold fewer than min_points points.
PriceSeries trailing_sessions(const PriceSeries& history, std::size_t sessions, std::size_t min_points,
                              const SessionHours& hours);

}  // namespace nowcast::engine
