#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nowcast/core/forecast_record.hpp"
#include "nowcast/core/series.hpp"
#include "nowcast/engine/nowcaster.hpp"

namespace nowcast::engine {

/// Receives each tick's closed records, in family order.
using RecordSink = std::function<void(std::span<const ForecastRecord>)>;

struct SessionOptions {
    std::size_t channel_capacity = 64;
    std::optional<Timestamp> stop_at;  ///< ticks after this are not processed
};

struct SessionSummary {
    std::size_t ticks_processed = 0;
    std::size_t ticks_skipped = 0;
    std::size_t records = 0;
    std::size_t recalibrations = 0;
    std::vector<GapEvent> gaps;            ///< window gaps and source gaps
    std::optional<Timestamp> last_tick;
    std::exception_ptr failure;            ///< set when the session halted early
    std::string failure_message;

    bool ok() const noexcept { return !failure; }
};

/**
 * Pulls ticks from `source` on a producer thread through a bounded channel
 * and feeds them to the engine, handing closed records to `sink` tick by
 * tick. A source or engine failure stops the session after everything
 * already closed has reached the sink; it is reported, not thrown.
 */
SessionSummary run_session(TickSource& source, Nowcaster& engine, const RecordSink& sink,
                           const SessionOptions& options = {});

}  // namespace nowcast::engine
