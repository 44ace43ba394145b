#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <limits>

#include "nowcast/core/series.hpp"

namespace nowcast::ingest {

using Sleeper = std::function<void(std::chrono::milliseconds)>;

/// Sleeps on the steady clock.
Sleeper real_sleeper();

struct ReplayOptions {
    std::chrono::milliseconds interval{300'000};
    double speedup = std::numeric_limits<double>::infinity();  ///< infinity: no delay
    Sleeper sleeper;  ///< defaults to real_sleeper()
};

/// Emits the series as ticks in order, waiting interval / speedup between
/// ticks. Throws std::invalid_argument unless speedup > 0 and interval > 0.
class ReplaySource : public TickSource {
public:
    ReplaySource(PriceSeries series, ReplayOptions options = {});

    std::optional<Tick> next() override;

    std::chrono::milliseconds delay() const noexcept { return delay_; }
    std::size_t emitted() const noexcept { return index_; }

private:
    PriceSeries series_;
    ReplayOptions options_;
    std::chrono::milliseconds delay_{0};
    std::size_t index_ = 0;
};

}  // namespace nowcast::ingest
