#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nowcast/core/time.hpp"

namespace nowcast {

struct PricePoint {
    Timestamp timestamp;
    double close = 0.0;

    bool operator==(const PricePoint&) const = default;
};

/// Close prices of one symbol, strictly increasing in time, all finite and > 0.
class PriceSeries {
public:
    PriceSeries() = default;
    /// Validates the invariants; throws OrderingError or DomainError.
    PriceSeries(std::string symbol, std::vector<PricePoint> points);

    const std::string& symbol() const noexcept { return symbol_; }
    const std::vector<PricePoint>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    const PricePoint& operator[](std::size_t i) const { return points_[i]; }

    std::vector<double> closes() const;
    /// Points [begin, end).
    PriceSeries slice(std::size_t begin, std::size_t end) const;
    /// Appends a later point; throws OrderingError / DomainError.
    void append(const PricePoint& point);

    bool operator==(const PriceSeries&) const = default;

private:
    std::string symbol_;
    std::vector<PricePoint> points_;
};

/// Throws DomainError unless the price is finite and positive.
void validate_price(double close, std::string_view context);

struct Tick {
    Timestamp timestamp;
    std::string symbol;
    double close = 0.0;

    bool operator==(const Tick&) const = default;
};

/// A missed interval slot (no data arrived, or the poller gave up).
struct GapEvent {
    Timestamp expected;
    Timestamp resumed;         ///< first timestamp after the gap; == expected when unknown
    std::size_t missed_slots = 1;
    std::string reason;
};

/// Single-producer pull interface over a stream of ticks.
class TickSource {
public:
    virtual ~TickSource() = default;
    /// Next tick, or nullopt at end of stream. May block.
    virtual std::optional<Tick> next() = 0;
    /// Gaps observed by the source itself (poll failures).
    virtual std::vector<GapEvent> gaps() const { return {}; }
    /// Asks a blocked or future next() to end the stream. Called from
    /// another thread.
    virtual void cancel() {}
};

}  // namespace nowcast
