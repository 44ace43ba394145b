#pragma once

#include <cmath>
#include <limits>
#include <optional>

#include "nowcast/core/family.hpp"
#include "nowcast/core/time.hpp"

namespace nowcast {

/// One family's one-step-ahead forecast for one tick.
struct ForecastRecord {
    Timestamp timestamp;   ///< time of the forecast target (the tick that closes it)
    Family family = Family::ridge;
    double forecast = 0.0;
    std::optional<double> actual;   ///< empty while open
    double squared_error = std::numeric_limits<double>::quiet_NaN();
    bool retrained = false;
    double train_mse = 0.0;
    Timestamp window_start;

    bool closed() const noexcept { return actual.has_value(); }

    void close(Timestamp ts, double value) {
        timestamp = ts;
        actual = value;
        const double e = forecast - value;
        squared_error = e * e;
    }

    bool operator==(const ForecastRecord& o) const {
        const auto same = [](double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); };
        return timestamp == o.timestamp && family == o.family && forecast == o.forecast && actual == o.actual &&
               same(squared_error, o.squared_error) && retrained == o.retrained && train_mse == o.train_mse &&
               window_start == o.window_start;
    }
};

}  // namespace nowcast
