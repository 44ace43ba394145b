#include "nowcast/engine/calibration.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "nowcast/core/error.hpp"

namespace nowcast::engine {

Calibration calibrate_day(const PriceSeries& history, const CalibrationConfig& config) {
    const std::size_t n = history.size();
    if (n < std::max<std::size_t>(config.min_points, 8)) {
        throw LengthError(fmt::format("calibration needs at least {} points, have {}", config.min_points, n));
    }
    const auto values = history.closes();
    const std::string context =
        fmt::format("calibration through {}", format_date(config.hours.local_date(history.points().back().timestamp)));

    try {
        Calibration out;
        out.points = n;
        const std::size_t max_lag = std::clamp<std::size_t>(config.max_lag, 1, (n - 1) / 2);
        out.pacf = chaos::pacf(values, max_lag);
        const std::size_t lag = chaos::select_lag(out.pacf, n);

        // Keep at least half the points as embedded rows.
        const std::size_t dim_cap = std::min((n - 2) / lag, (n / 2) / lag + 1);
        if (dim_cap < 2) {
            throw LengthError(fmt::format("lag {} leaves no room for a 2-dimensional embedding of {} points", lag, n));
        }
        const std::size_t max_dim = std::min(config.max_dim, dim_cap);
        out.cao = chaos::cao_profile(values, lag, max_dim);
        const auto choice = chaos::select_embedding_dim(out.cao, config.saturation_tol);

        const double lyap = chaos::estimate_lyapunov(values, lag, choice.dim, config.lyapunov_steps);
        out.params = {lag, choice.dim, lyap, lyap >= 0.0, choice.saturated};
        return out;
    } catch (const DegeneracyError& e) {
        throw DegeneracyError(fmt::format("{}: {}", context, e.what()));
    } catch (const LengthError& e) {
        throw LengthError(fmt::format("{}: {}", context, e.what()));
    }
}

PriceSeries trailing_sessions(const PriceSeries& history, std::size_t sessions, std::size_t min_points,
                              const SessionHours& hours) {
    const auto& pts = history.points();
    std::size_t begin = pts.size();
    std::size_t seen = 0;
    std::chrono::sys_days current{};
    while (begin > 0) {
        const auto day = hours.local_date(pts[begin - 1].timestamp);
        if (seen == 0 || day != current) {
            if (seen == sessions) break;
            ++seen;
            current = day;
        }
        --begin;
    }
    const std::size_t needed = std::min(min_points, pts.size());
    begin = std::min(begin, pts.size() - needed);
    return history.slice(begin, pts.size());
}

}  // namespace nowcast::engine
