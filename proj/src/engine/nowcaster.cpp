#include "nowcast/engine/nowcaster.hpp"

#include <stdexcept>

#include <fmt/format.h>

#include "nowcast/core/error.hpp"

namespace nowcast::engine {

Nowcaster::Nowcaster(EngineConfig config, PriceSeries warm_history)
    : config_(std::move(config)), history_(std::move(warm_history)) {
    config_.calibration.hours = config_.hours;
    config_.calibration.min_points = std::max(config_.calibration.min_points, config_.window);
    state_ = make_window(history_, config_);
}

const Calibration& Nowcaster::calibrate(std::chrono::sys_days session) {
    const auto recent =
        trailing_sessions(history_, config_.calibration.sessions, config_.calibration.min_points, config_.hours);
    try {
        calibration_ = calibrate_day(recent, config_.calibration);
    } catch (const DegeneracyError& e) {
        throw DegeneracyError(fmt::format("session {}: {}", format_date(session), e.what()));
    }
    state_.chaos = calibration_->params;
    for (auto& s : state_.slots) s.open.reset();
    train_all(state_, config_, true);
    session_ = session;
    return *calibration_;
}

std::vector<ForecastRecord> Nowcaster::forecast() {
    if (!calibration_) throw std::logic_error("forecast before calibration");
    if (state_.has_open()) {
        std::vector<ForecastRecord> open;
        for (const auto& s : state_.slots) open.push_back(*s.open);
        return open;
    }
    return forecast_step(state_);
}

StepResult Nowcaster::process(const Tick& tick) {
    StepResult out;
    if (!config_.hours.contains(tick.timestamp)) {
        out.skipped = true;
        return out;
    }
    const auto day = config_.hours.local_date(tick.timestamp);
    if (!session_ || *session_ != day) {
        if (tick.timestamp <= history_.points().back().timestamp) {
            throw OrderingError(fmt::format("tick at {} is not after history tail", format_rfc3339(tick.timestamp)));
        }
        calibrate(day);
        out.recalibrated = true;
    }
    forecast();
    auto ingested = ingest_actual(state_, tick, config_);
    history_.append({tick.timestamp, tick.close});
    out.closed = std::move(ingested.closed);
    out.gap = ingested.gap;
    return out;
}

}  // namespace nowcast::engine
