#include "nowcast/ingest/replay.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace nowcast::ingest {

Sleeper real_sleeper() {
    return [](std::chrono::milliseconds d) {
        if (d.count() > 0) std::this_thread::sleep_for(d);
    };
}

ReplaySource::ReplaySource(PriceSeries series, ReplayOptions options)
    : series_(std::move(series)), options_(std::move(options)) {
    if (!(options_.speedup > 0.0)) throw std::invalid_argument("replay speedup must be > 0");
    if (options_.interval.count() <= 0) throw std::invalid_argument("replay interval must be > 0");
    if (!options_.sleeper) options_.sleeper = real_sleeper();
    if (std::isfinite(options_.speedup)) {
        delay_ = std::chrono::milliseconds(
            std::llround(static_cast<double>(options_.interval.count()) / options_.speedup));
    }
}

std::optional<Tick> ReplaySource::next() {
    if (index_ >= series_.size()) return std::nullopt;
    if (index_ > 0 && delay_.count() > 0) options_.sleeper(delay_);
    const auto& p = series_[index_++];
    return Tick{p.timestamp, series_.symbol(), p.close};
}

}  // namespace nowcast::ingest
